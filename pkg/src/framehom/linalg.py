"""Dense linear algebra over exact rationals, with a floating fallback.

Matrices are plain 2-D numpy arrays.  ``dtype=object`` entries are exact
rationals (``fractions.Fraction`` or int) and make up "exact" mode;
``dtype=float64`` is "float" mode.  A computation never mixes modes: the
mode of every derived matrix is the mode of its inputs.

Exact mode reduces with deterministic pivoting (first nonzero entry in
column order), so ranks, kernels and complements are reproducible
bit-for-bit.  Float mode ranks are SVD-based with a relative singular
value cutoff of ``EPS_RANK``; subspace comparisons use principal angles
with threshold ``EPS_ANGLE``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

try:  # gmpy2 rationals are a few times faster inside the elimination loops
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

MODE_EXACT = "exact"
MODE_FLOAT = "float"

EPS_RANK = 1e-10   # float mode: singular values below EPS_RANK * sigma_max count as zero
EPS_ANGLE = 1e-7   # float mode: largest principal angle tolerated in subspace comparisons
EPS_SOLVE = 1e-8   # float mode: relative residual tolerated by solve_in_image


def mode_of(a: np.ndarray) -> str:
    return MODE_EXACT if a.dtype == object else MODE_FLOAT


def exact_matrix(rows, cols: int | None = None) -> np.ndarray:
    """Build an exact-mode matrix from nested sequences of rationals."""
    rows = [list(r) for r in rows]
    if not rows:
        if cols is None:
            raise ValueError("empty matrix needs an explicit column count")
        return np.zeros((0, cols), dtype=object)
    ncols = len(rows[0])
    out = np.empty((len(rows), ncols), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != ncols:
            raise ValueError("ragged rows")
        out[i, :] = r
    return out


def float_matrix(rows, cols: int | None = None) -> np.ndarray:
    if not len(rows):
        if cols is None:
            raise ValueError("empty matrix needs an explicit column count")
        return np.zeros((0, cols))
    return np.asarray(rows, dtype=float)


def zeros(rows: int, cols: int, mode: str) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object if mode == MODE_EXACT else float)


def identity(n: int, mode: str) -> np.ndarray:
    out = zeros(n, n, mode)
    for i in range(n):
        out[i, i] = 1 if mode == MODE_EXACT else 1.0
    return out


def to_float(a: np.ndarray) -> np.ndarray:
    return np.asarray([[float(x) for x in row] for row in a], dtype=float) if a.size \
        else np.zeros(a.shape)


@dataclass(frozen=True)
class SubspaceBasis:
    """Linearly independent spanning vectors of a subspace of R^ambient_dim.

    ``vectors`` has shape (dim, ambient_dim): each row is one basis vector.
    An empty row set (the zero subspace) is legal.
    """

    ambient_dim: int
    vectors: np.ndarray

    def __post_init__(self):
        if self.vectors.ndim != 2 or self.vectors.shape[1] != self.ambient_dim:
            raise ValueError(
                f"basis vectors have shape {self.vectors.shape}, "
                f"ambient dimension is {self.ambient_dim}")

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def mode(self) -> str:
        return mode_of(self.vectors)

    def matrix(self) -> np.ndarray:
        """Basis vectors as the columns of an (ambient_dim x dim) matrix."""
        return self.vectors.T.copy()


# ---------------------------------------------------------------------------
# exact kernel: reduced row echelon form with first-nonzero pivoting
# ---------------------------------------------------------------------------

def _rref(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """In-place RREF over exact rationals. Returns (rows, pivot columns)."""
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [x / p for x in rows[r]]
        top = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], top)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def _q_rows(a: np.ndarray) -> list[list]:
    return [[_Q(x.numerator, x.denominator) if x else _Q(0) for x in row] for row in a]


def _from_q(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _clear_primitive(vec: list) -> list[int]:
    """Scale a rational vector to coprime integers with positive leading entry."""
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-w for w in ints]
            break
    return ints


def _exact_rows_to_array(vectors: list[list], ncols: int) -> np.ndarray:
    if not vectors:
        return np.zeros((0, ncols), dtype=object)
    out = np.empty((len(vectors), ncols), dtype=object)
    for i, v in enumerate(vectors):
        out[i, :] = v
    return out


def _rref_of(a: np.ndarray) -> tuple[list[list], list[int]]:
    return _rref(_q_rows(a), a.shape[1])


# ---------------------------------------------------------------------------
# rank / kernel / image / complement
# ---------------------------------------------------------------------------

def rank(a: np.ndarray) -> int:
    """Matrix rank: exact over the rationals, SVD cutoff in float mode."""
    if min(a.shape) == 0:
        return 0
    if mode_of(a) == MODE_EXACT:
        return len(_rref_of(a)[1])
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.count_nonzero(s > EPS_RANK * s[0])) if s.size else 0


def kernel_basis(a: np.ndarray) -> SubspaceBasis:
    """Basis of the right nullspace {x : a @ x = 0}.

    Exact mode returns integer vectors with entries of gcd 1, derived from
    the RREF free columns (reproducible).  Float mode returns orthonormal
    rows of V beyond the numerical rank.
    """
    nrows, ncols = a.shape
    if mode_of(a) == MODE_EXACT:
        if nrows == 0:
            return SubspaceBasis(ncols, _exact_rows_to_array(
                [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)], ncols))
        red, pivots = _rref_of(a)
        free = [c for c in range(ncols) if c not in pivots]
        vecs = []
        for fc in free:
            v = [_Q(0)] * ncols
            v[fc] = _Q(1)
            for r, pc in enumerate(pivots):
                v[pc] = -red[r][fc]
            vecs.append(_clear_primitive(v))
        return SubspaceBasis(ncols, _exact_rows_to_array(vecs, ncols))
    if ncols == 0:
        return SubspaceBasis(0, np.zeros((0, 0)))
    if nrows == 0:
        return SubspaceBasis(ncols, np.eye(ncols))
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    r = int(np.count_nonzero(s > EPS_RANK * s[0])) if s.size else 0
    return SubspaceBasis(ncols, vh[r:, :].copy())


def image_basis(a: np.ndarray) -> SubspaceBasis:
    """Basis of the column space.

    Exact mode returns the pivot columns of ``a`` themselves; float mode the
    leading left singular vectors.
    """
    nrows, ncols = a.shape
    if mode_of(a) == MODE_EXACT:
        if min(a.shape) == 0:
            return SubspaceBasis(nrows, np.zeros((0, nrows), dtype=object))
        _, pivots = _rref_of(a)
        vecs = [list(a[:, c]) for c in pivots]
        return SubspaceBasis(nrows, _exact_rows_to_array(vecs, nrows))
    if min(a.shape) == 0:
        return SubspaceBasis(nrows, np.zeros((0, nrows)))
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = int(np.count_nonzero(s > EPS_RANK * s[0])) if s.size else 0
    return SubspaceBasis(nrows, u[:, :r].T.copy())


def image_complement_basis(a: np.ndarray) -> SubspaceBasis:
    """Basis of the orthogonal complement of the column space of ``a``.

    This realizes the cokernel concretely: (im a)^perp = ker(a^T), of
    dimension rows - rank(a).
    """
    return kernel_basis(a.transpose().copy())


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------

def solve_in_image(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b for b in the column space of ``a``.

    ``b`` may be a vector or a matrix of stacked right-hand-side columns
    (all solved in one elimination pass).  Exact mode returns the solution
    with all RREF-free variables set to zero; float mode the minimum-norm
    solution.  Raises ValueError when any right-hand side is outside the
    column space.
    """
    single = b.ndim == 1
    bm = b.reshape(-1, 1) if single else b
    if bm.shape[0] != a.shape[0]:
        raise ValueError(f"shape mismatch: {a.shape} vs {bm.shape}")
    nrows, ncols = a.shape
    nrhs = bm.shape[1]
    if mode_of(a) == MODE_EXACT:
        aug = [[_Q(x.numerator, x.denominator) if x else _Q(0) for x in row_a]
               + [_Q(y.numerator, y.denominator) if y else _Q(0) for y in row_b]
               for row_a, row_b in zip(a, bm)]
        red, pivots = _rref(aug, ncols + nrhs)
        bad = [p for p in pivots if p >= ncols]
        if bad:
            raise ValueError("right-hand side is not in the column space")
        x = [[Fraction(0)] * nrhs for _ in range(ncols)]
        for r, pc in enumerate(pivots):
            for j in range(nrhs):
                x[pc][j] = _from_q(red[r][ncols + j])
        out = _exact_rows_to_array(x, nrhs) if ncols else np.zeros((0, nrhs), dtype=object)
    else:
        if ncols == 0:
            if bm.size and np.linalg.norm(bm) > EPS_SOLVE * max(1.0, float(np.abs(a).sum())):
                raise ValueError("right-hand side is not in the column space")
            out = np.zeros((0, nrhs))
        else:
            out, *_ = np.linalg.lstsq(a, bm, rcond=None)
            resid = a @ out - bm
            scale = max(1.0, float(np.abs(a).max(initial=0.0)) *
                        float(np.abs(out).max(initial=0.0)), float(np.abs(bm).max(initial=0.0)))
            if float(np.abs(resid).max(initial=0.0)) > EPS_SOLVE * scale:
                raise ValueError("right-hand side is not in the column space")
    return out[:, 0] if single else out


def solve_gram(basis_matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve (B^T B) x = B^T rhs where B has independent columns.

    Gives the coordinates of the orthogonal projection of each rhs column
    onto span(B).
    """
    bt = basis_matrix.T.copy()
    return solve_in_image(bt @ basis_matrix, bt @ rhs)


# ---------------------------------------------------------------------------
# subspace toolkit
# ---------------------------------------------------------------------------

def _check_same_ambient(a: SubspaceBasis, b: SubspaceBasis):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")
    if a.dim and b.dim and a.mode != b.mode:
        raise ValueError("mixed exact/float subspaces")


def _canonical_rows(vectors: np.ndarray, ncols: int) -> np.ndarray:
    """Canonicalize a spanning row set: RREF rows, cleared to primitive ints."""
    if mode_of(vectors) == MODE_EXACT:
        red, pivots = _rref(_q_rows(vectors), ncols)
        vecs = [_clear_primitive(red[r]) for r in range(len(pivots))]
        return _exact_rows_to_array(vecs, ncols)
    if not vectors.size:
        return np.zeros((0, ncols))
    u, s, vh = np.linalg.svd(vectors, full_matrices=False)
    r = int(np.count_nonzero(s > EPS_RANK * s[0])) if s.size else 0
    return vh[:r, :].copy()


def span_rows(vectors: np.ndarray, ambient_dim: int) -> SubspaceBasis:
    """SubspaceBasis spanned by the rows of ``vectors`` (made independent)."""
    return SubspaceBasis(ambient_dim, _canonical_rows(vectors, ambient_dim))


def project_onto(v: np.ndarray, s: SubspaceBasis) -> np.ndarray:
    """Orthogonal projection of vector ``v`` onto span(s)."""
    if v.shape[0] != s.ambient_dim:
        raise ValueError(f"vector length {v.shape[0]} vs ambient {s.ambient_dim}")
    if s.dim == 0:
        return np.zeros(s.ambient_dim, dtype=object) if mode_of(v) == MODE_EXACT \
            else np.zeros(s.ambient_dim)
    bmat = s.matrix()
    return bmat @ solve_gram(bmat, v)


def intersect(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """Basis of span(a) ∩ span(b)."""
    _check_same_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        empty = np.zeros((0, a.ambient_dim),
                         dtype=object if MODE_EXACT in (a.mode, b.mode) else float)
        return SubspaceBasis(a.ambient_dim, empty)
    stacked = np.hstack([a.matrix(), -b.matrix()])
    null = kernel_basis(stacked)
    vecs = null.vectors[:, :a.dim] @ a.vectors
    return span_rows(vecs, a.ambient_dim)


def complement_within(sub: SubspaceBasis, ambient_sub: SubspaceBasis) -> SubspaceBasis:
    """Orthogonal complement of span(sub) inside span(ambient_sub).

    Requires sub ⊆ ambient_sub.
    """
    _check_same_ambient(sub, ambient_sub)
    if not subspace_contains(ambient_sub, sub):
        raise ValueError("sub is not contained in ambient_sub")
    w = ambient_sub.matrix()
    if sub.dim == 0:
        return SubspaceBasis(ambient_sub.ambient_dim, ambient_sub.vectors.copy())
    constraints = sub.vectors @ w
    coeffs = kernel_basis(constraints)
    vecs = coeffs.vectors @ ambient_sub.vectors
    return span_rows(vecs, ambient_sub.ambient_dim)


def subspace_contains(outer: SubspaceBasis, inner: SubspaceBasis) -> bool:
    """True when span(outer) ⊇ span(inner)."""
    _check_same_ambient(outer, inner)
    if inner.dim == 0:
        return True
    if outer.dim == 0:
        return False
    if outer.mode == MODE_EXACT:
        stacked = np.vstack([outer.vectors, inner.vectors])
        return rank(stacked) == outer.dim
    q = _orthonormal_rows(outer.vectors)
    resid = inner.vectors - (inner.vectors @ q.T) @ q
    norms = np.linalg.norm(inner.vectors, axis=1)
    norms[norms == 0] = 1.0
    return bool(np.all(np.linalg.norm(resid, axis=1) / norms < EPS_ANGLE))


def subspaces_equal(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    """True when span(a) = span(b).

    Exact mode certifies mutual containment through rank identities; float
    mode requires equal dimensions and largest principal angle < EPS_ANGLE.
    """
    _check_same_ambient(a, b)
    if a.dim != b.dim:
        return False
    if a.dim == 0:
        return True
    if a.mode == MODE_EXACT:
        return subspace_contains(a, b) and subspace_contains(b, a)
    return largest_principal_angle(a, b) < EPS_ANGLE


def _orthonormal_rows(vectors: np.ndarray) -> np.ndarray:
    u, s, vh = np.linalg.svd(vectors, full_matrices=False)
    r = int(np.count_nonzero(s > EPS_RANK * s[0])) if s.size else 0
    return vh[:r, :]


def largest_principal_angle(a: SubspaceBasis, b: SubspaceBasis) -> float:
    """Largest principal angle between two float-mode subspaces, radians."""
    _check_same_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return 0.0 if a.dim == b.dim else math.pi / 2
    qa = _orthonormal_rows(to_float(a.vectors) if a.mode == MODE_EXACT else a.vectors)
    qb = _orthonormal_rows(to_float(b.vectors) if b.mode == MODE_EXACT else b.vectors)
    s = np.linalg.svd(qa @ qb.T, compute_uv=False)
    k = min(qa.shape[0], qb.shape[0])
    smin = float(s[k - 1]) if s.size >= k and k > 0 else 0.0
    return math.acos(min(1.0, max(-1.0, smin)))
