"""Geometric frameworks: straight-line graph embeddings in the plane or space.

A framework is an ordered vertex list with positions in R^2 or R^3 plus a
list of oriented edges (tail -> head).  Coordinates are exact rationals by
default; a floating mode exists for tolerance experiments.  Frameworks are
immutable; every generator is a deterministic function of its arguments.

File format (line oriented, ``#`` starts a comment)::

    dim 2
    v 0 0 0
    v 1 1 0
    v 2 1/2 3/4
    e 0 1
    e 1 2
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from decimal import Decimal
from fractions import Fraction

from .linalg import MODE_EXACT, MODE_FLOAT, exact_matrix, rank as _matrix_rank

EPS_GEOM = 1e-9  # float mode: zero-length threshold, relative to the bbox diagonal

NAMED_FRAMEWORKS = ("bar", "triangle", "square", "box3d", "random2d", "random3d")


class FrameworkError(ValueError):
    """Invalid framework file or geometry."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(Decimal(repr(x)))
    return Fraction(x)


@dataclass(frozen=True)
class EdgeGeometry:
    """Derived geometry of one oriented edge."""

    direction: tuple   # p_head - p_tail
    half_lever: tuple  # direction / 2, the lever from the edge center to the head
    length: float      # Euclidean length (informational; float even in exact mode)


@dataclass(frozen=True)
class Framework:
    """Immutable geometric framework (graph + positions).

    Vertex ids are dense 0-based integers equal to list position.  Edge
    orientation is tail -> head as listed.
    """

    dim: int
    positions: tuple
    edges: tuple
    mode: str = MODE_EXACT

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise FrameworkError(f"ambient dimension must be 2 or 3, got {self.dim}")
        if self.mode not in (MODE_EXACT, MODE_FLOAT):
            raise FrameworkError(f"unknown mode {self.mode!r}")
        if not self.positions:
            raise FrameworkError("framework has no vertices")
        for i, p in enumerate(self.positions):
            if len(p) != self.dim:
                raise FrameworkError(f"vertex {i} has {len(p)} coordinates, expected {self.dim}")
        eps = self._zero_length_threshold()
        seen = set()
        for k, (t, h) in enumerate(self.edges):
            if not (0 <= t < len(self.positions)) or not (0 <= h < len(self.positions)):
                raise FrameworkError(f"edge {k} references unknown vertex id ({t}, {h})")
            if t == h:
                raise FrameworkError(f"edge {k} is a self-loop at vertex {t}")
            key = (min(t, h), max(t, h))
            if key in seen:
                raise FrameworkError(f"duplicate edge {k}: ({t}, {h})")
            seen.add(key)
            d = [self.positions[h][i] - self.positions[t][i] for i in range(self.dim)]
            if self.mode == MODE_EXACT:
                if all(x == 0 for x in d):
                    raise FrameworkError(f"zero-length edge {k}: ({t}, {h})")
            elif math.sqrt(sum(float(x) * float(x) for x in d)) <= eps:
                raise FrameworkError(f"zero-length edge {k}: ({t}, {h})")

    def _zero_length_threshold(self) -> float:
        if self.mode == MODE_EXACT:
            return 0.0
        return EPS_GEOM * max(self.bbox_diagonal(), 1e-300)

    @property
    def num_vertices(self) -> int:
        return len(self.positions)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def bbox_diagonal(self) -> float:
        lo = [min(float(p[i]) for p in self.positions) for i in range(self.dim)]
        hi = [max(float(p[i]) for p in self.positions) for i in range(self.dim)]
        return math.sqrt(sum((b - a) ** 2 for a, b in zip(lo, hi)))

    def connected(self) -> bool:
        if self.num_vertices == 0:
            return False
        adj = {i: [] for i in range(self.num_vertices)}
        for t, h in self.edges:
            adj[t].append(h)
            adj[h].append(t)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.num_vertices

    def edge_geometry(self, k: int) -> EdgeGeometry:
        t, h = self.edges[k]
        d = tuple(self.positions[h][i] - self.positions[t][i] for i in range(self.dim))
        if self.mode == MODE_EXACT:
            half = tuple(Fraction(x) / 2 for x in d)
        else:
            half = tuple(x / 2.0 for x in d)
        return EdgeGeometry(
            direction=d,
            half_lever=half,
            length=math.sqrt(sum(float(x) ** 2 for x in d)),
        )

    def as_float(self) -> Framework:
        """The same framework with float coordinates."""
        if self.mode == MODE_FLOAT:
            return self
        pos = tuple(tuple(float(x) for x in p) for p in self.positions)
        return Framework(self.dim, pos, self.edges, MODE_FLOAT)

    def with_flipped_edge(self, k: int) -> Framework:
        edges = list(self.edges)
        t, h = edges[k]
        edges[k] = (h, t)
        return replace(self, edges=tuple(edges))

    def with_vertex_permutation(self, perm) -> Framework:
        """Relabel vertex i as perm[i], reordering the position list to match."""
        if sorted(perm) != list(range(self.num_vertices)):
            raise FrameworkError("not a permutation of the vertex ids")
        pos = [None] * self.num_vertices
        for i, p in enumerate(self.positions):
            pos[perm[i]] = p
        edges = tuple((perm[t], perm[h]) for t, h in self.edges)
        return replace(self, positions=tuple(pos), edges=edges)

    def transformed(self, linear, offset) -> Framework:
        """Apply p -> linear @ p + offset to every vertex position."""
        pos = []
        for p in self.positions:
            q = [sum(linear[i][j] * p[j] for j in range(self.dim)) + offset[i]
                 for i in range(self.dim)]
            pos.append(tuple(q))
        return replace(self, positions=tuple(pos))


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def _parse_scalar(tok: str, mode: str, where: str):
    try:
        if mode == MODE_EXACT:
            return Fraction(tok)
        if "/" in tok:
            num, den = tok.split("/", 1)
            return float(num) / float(den)
        return float(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise FrameworkError(f"{where}: bad coordinate literal {tok!r}") from exc


def parse_framework(text: str, mode: str = MODE_EXACT) -> Framework:
    dim = None
    verts: dict[int, tuple] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        where = f"line {lineno}"
        if toks[0] == "dim":
            if dim is not None:
                raise FrameworkError(f"{where}: repeated dim header")
            if len(toks) != 2 or toks[1] not in ("2", "3"):
                raise FrameworkError(f"{where}: expected 'dim 2' or 'dim 3'")
            dim = int(toks[1])
        elif toks[0] == "v":
            if dim is None:
                raise FrameworkError(f"{where}: vertex before dim header")
            if len(toks) != 2 + dim:
                raise FrameworkError(f"{where}: vertex needs an id and {dim} coordinates")
            try:
                vid = int(toks[1])
            except ValueError:
                raise FrameworkError(f"{where}: bad vertex id {toks[1]!r}") from None
            if vid in verts:
                raise FrameworkError(f"{where}: duplicate vertex id {vid}")
            verts[vid] = tuple(_parse_scalar(t, mode, where) for t in toks[2:])
        elif toks[0] == "e":
            if len(toks) != 3:
                raise FrameworkError(f"{where}: edge needs exactly two vertex ids")
            try:
                edges.append((int(toks[1]), int(toks[2])))
            except ValueError:
                raise FrameworkError(f"{where}: bad edge endpoint") from None
        else:
            raise FrameworkError(f"{where}: unknown record {toks[0]!r}")
    if dim is None:
        raise FrameworkError("missing dim header")
    if not verts:
        raise FrameworkError("no vertices")
    if sorted(verts) != list(range(len(verts))):
        raise FrameworkError("vertex ids must be dense 0-based integers")
    positions = tuple(verts[i] for i in range(len(verts)))
    return Framework(dim, positions, tuple(edges), mode)


def load_framework(path, mode: str = MODE_EXACT) -> Framework:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_framework(fh.read(), mode)


def _format_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def format_framework(f: Framework) -> str:
    lines = [f"dim {f.dim}"]
    for i, p in enumerate(f.positions):
        lines.append("v " + str(i) + " " + " ".join(_format_scalar(x) for x in p))
    for t, h in f.edges:
        lines.append(f"e {t} {h}")
    return "\n".join(lines) + "\n"


def save_framework(f: Framework, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_framework(f))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

_DESARGUES_OUTER = ((Fraction(0), Fraction(4)),
                    (Fraction(-3), Fraction(-2)),
                    (Fraction(3), Fraction(-2)))


def make_desargues(t) -> Framework:
    """Two triangles in perspective from the origin, joined corner to corner.

    Vertices 0-2 are the outer triangle, 3-5 the inner copy scaled by ``t``.
    The three connecting bars lie on lines through the origin, so their
    extensions are concurrent: the configuration carries one self-stress
    and one mechanism.
    """
    t = _as_fraction(t)
    if not 0 < t < 1:
        raise FrameworkError(f"scale must satisfy 0 < t < 1, got {t}")
    outer = list(_DESARGUES_OUTER)
    inner = [(t * x, t * y) for x, y in outer]
    positions = tuple(outer + inner)
    edges = ((0, 1), (1, 2), (2, 0),       # outer triangle
             (3, 4), (4, 5), (5, 3),       # inner triangle
             (0, 3), (1, 4), (2, 5))       # connectors through the origin
    return Framework(2, positions, edges)


def _cube_positions():
    pts = []
    for z in (0, 1):
        for x, y in ((0, 0), (1, 0), (1, 1), (0, 1)):
            pts.append((Fraction(x), Fraction(y), Fraction(z)))
    return tuple(pts)


_CUBE_EDGES = ((0, 1), (1, 2), (2, 3), (3, 0),
               (4, 5), (5, 6), (6, 7), (7, 4),
               (0, 4), (1, 5), (2, 6), (3, 7))


def _random_framework(dim: int, seed: int, max_vertices: int) -> Framework:
    rng = random.Random(f"framehom:random{dim}d:{seed}")
    while True:
        nv = rng.randint(4, max_vertices)
        pos = [tuple(Fraction(rng.randint(-64, 64), 8) for _ in range(dim))
               for _ in range(nv)]
        if len(set(pos)) != nv:
            continue
        # affine span must be full dimensional (collinear/coplanar sets break
        # the rigid-body DOF count the counting rules presume)
        rel = [[p[i] - pos[0][i] for i in range(dim)] for p in pos[1:]]
        if _matrix_rank(exact_matrix(rel)) < dim:
            continue
        edges = [(rng.randrange(i), i) for i in range(1, nv)]  # random spanning tree
        undirected = {(min(t, h), max(t, h)) for t, h in edges}
        candidates = [(a, b) for a in range(nv) for b in range(a + 1, nv)
                      if (a, b) not in undirected]
        rng.shuffle(candidates)
        extra = rng.randint(0, nv)
        for a, b in candidates[:extra]:
            if rng.random() < 0.5:
                a, b = b, a
            edges.append((a, b))
        try:
            return Framework(dim, tuple(pos), tuple(edges))
        except FrameworkError:
            continue


def make_named(name: str, seed: int = 0) -> Framework:
    """Deterministic corpus frameworks.

    ``bar``, ``triangle``, ``square`` and ``box3d`` ignore the seed;
    ``random2d``/``random3d`` are connected random frameworks with rational
    coordinates and full-dimensional affine span.
    """
    if name == "bar":
        return Framework(2, ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))),
                         ((0, 1),))
    if name == "triangle":
        return Framework(2, ((Fraction(0), Fraction(0)), (Fraction(2), Fraction(0)),
                             (Fraction(1), Fraction(2))),
                         ((0, 1), (1, 2), (2, 0)))
    if name == "square":
        return Framework(2, ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
                             (Fraction(1), Fraction(1)), (Fraction(0), Fraction(1))),
                         ((0, 1), (1, 2), (2, 3), (3, 0)))
    if name == "box3d":
        return Framework(3, _cube_positions(), _CUBE_EDGES)
    if name == "random2d":
        return _random_framework(2, seed, 15)
    if name == "random3d":
        return _random_framework(3, seed, 10)
    raise FrameworkError(f"unknown framework name {name!r}")


def perturb(f: Framework, magnitude, seed: int) -> Framework:
    """Shift every coordinate by an independent uniform offset in [-m, m].

    Offsets are dyadic rational multiples of the magnitude in exact mode, so
    the result stays exactly representable.  magnitude 0 returns an
    identical framework.
    """
    rng = random.Random(f"framehom:perturb:{seed}")
    if f.mode == MODE_EXACT:
        mag = _as_fraction(magnitude)
        if mag < 0:
            raise FrameworkError("magnitude must be nonnegative")
        pos = tuple(
            tuple(x + mag * Fraction(rng.randint(-4096, 4096), 4096) for x in p)
            for p in f.positions)
    else:
        mag = float(magnitude)
        if mag < 0:
            raise FrameworkError("magnitude must be nonnegative")
        pos = tuple(tuple(x + rng.uniform(-mag, mag) for x in p) for p in f.positions)
    return replace(f, positions=pos)
