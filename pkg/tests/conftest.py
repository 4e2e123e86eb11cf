import pytest

from framehom import make_desargues, make_named, verify_les

RANDOM_2D_SEEDS = range(10)
RANDOM_3D_SEEDS = range(10)


def build_corpus():
    """The standard test corpus: named frameworks, Desargues, 20 randoms."""
    frameworks = [
        ("bar", make_named("bar")),
        ("triangle", make_named("triangle")),
        ("square", make_named("square")),
        ("box3d", make_named("box3d")),
        ("desargues", make_desargues("1/2")),
    ]
    for seed in RANDOM_2D_SEEDS:
        frameworks.append((f"random2d-{seed}", make_named("random2d", seed)))
    for seed in RANDOM_3D_SEEDS:
        frameworks.append((f"random3d-{seed}", make_named("random3d", seed)))
    return frameworks


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def corpus_reports(corpus):
    """verify_les on the whole corpus, computed once per session."""
    return {label: verify_les(f) for label, f in corpus}
