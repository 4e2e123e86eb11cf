#!/usr/bin/env python3
"""Write the standard corpus of framework files for CLI experiments.

Usage: python scripts/make_corpus.py [outdir]
"""

import sys
from fractions import Fraction
from pathlib import Path

from framehom import make_desargues, make_named, save_framework


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("corpus")
    outdir.mkdir(parents=True, exist_ok=True)
    for name in ("bar", "triangle", "square", "box3d"):
        save_framework(make_named(name), outdir / f"{name}.fw")
    save_framework(make_desargues(Fraction(1, 2)), outdir / "desargues.fw")
    for seed in range(5):
        save_framework(make_named("random2d", seed), outdir / f"random2d_{seed}.fw")
        save_framework(make_named("random3d", seed), outdir / f"random3d_{seed}.fw")
    print(f"wrote {len(list(outdir.glob('*.fw')))} framework files to {outdir}/")


if __name__ == "__main__":
    main()
