"""The long exact sequence tying truss, frame, and anchored-frame homology.

The short exact sequence of structural cosheaves induces, on homology,

    0 -> H1(force) -> H1(moment) -> H1(anchored) -> H0(force) -> H0(moment) -> 0

with the middle arrow into degree 0 given by the snake-lemma connecting
homomorphism: lift an anchored self-stress through the section, take the
frame boundary, and read off the resultant shear forces at the vertices.
Its image, projected to homology representatives, is exactly the space of
truss mechanisms.

This module computes the induced maps and the connecting homomorphism,
verifies exactness at every node, evaluates the counting rules
(Maxwell-Calladine, the circuit-rank rule for frame self-stresses, and
the anchored stress count), and runs perturbation scans.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import linalg
from .cosheaf import (
    CosheafMap,
    HomologyResult,
    assemble_boundary,
    check_cosheaf_map,
    homology,
)
from .framework import Framework
from .linalg import (
    MODE_EXACT,
    SubspaceBasis,
    complement_within,
    image_basis,
    kernel_basis,
    rank,
    solve_gram,
    solve_in_image,
    span_rows,
    subspaces_equal,
)
from .structural import anchored_from_phi, build_phi, rigid_body_space


@dataclass(frozen=True)
class InducedMap:
    """A map between homology spaces, expressed in their basis coordinates.

    ``matrix`` has shape (dim target H, dim source H); kernel and image are
    subspaces of the source / target coordinate spaces.
    """

    matrix: np.ndarray
    rank: int
    kernel: SubspaceBasis
    image: SubspaceBasis


def _induced_from_matrix(m: np.ndarray) -> InducedMap:
    return InducedMap(
        matrix=m,
        rank=rank(m),
        kernel=kernel_basis(m),
        image=span_rows(image_basis(m).vectors, m.shape[0]),
    )


def _h_matrix(h: SubspaceBasis) -> np.ndarray:
    return h.matrix()


def induced_map(m: CosheafMap, degree: int, src_h: HomologyResult,
                tgt_h: HomologyResult) -> InducedMap:
    """Induced map on homology: apply the chain map, re-express in H bases.

    Degree 1 images are automatically cycles of the target; degree 0
    images are first projected onto the representative space (the
    orthogonal complement of the target boundary image).  Refuses to run
    when the commuting condition fails.
    """
    chk = check_cosheaf_map(m)
    if not chk.passed:
        raise ValueError(f"cosheaf map does not commute at incidences {chk.failures}")
    if degree == 1:
        src_basis, tgt_basis = src_h.h1, tgt_h.h1
        apply = m.apply_c1
    elif degree == 0:
        src_basis, tgt_basis = src_h.h0, tgt_h.h0
        apply = m.apply_c0
    else:
        raise ValueError("degree must be 0 or 1")
    cols = [apply(v) for v in src_basis.vectors]
    if not cols:
        return _induced_from_matrix(linalg.zeros(tgt_basis.dim, 0, m.source.mode))
    stacked = np.stack(cols, axis=1)
    if degree == 0:
        bdd = assemble_boundary(m.target)
        im = image_basis(bdd).matrix()
        if im.shape[1]:
            stacked = stacked - im @ solve_gram(im, stacked)
    coords = solve_in_image(_h_matrix(tgt_basis), stacked)
    return _induced_from_matrix(coords)


@dataclass(frozen=True)
class ConnectingMap(InducedMap):
    """The connecting homomorphism H1(anchored) -> H0(force).

    ``resultants[j]`` holds, for the j-th H1(anchored) basis cycle, the
    raw vertex force resultants (num_vertices x dim) read off before
    projection to homology representatives: the green force arrows.
    """

    resultants: tuple


class _LesContext:
    """Shared computation for one framework: cosheaves, homologies, maps."""

    def __init__(self, f: Framework, section_rng: random.Random | None = None):
        if not f.connected():
            raise ValueError("the long exact sequence machinery needs a connected framework")
        if f.num_edges == 0:
            raise ValueError("framework has no edges")
        self.f = f
        self.phi = build_phi(f)
        self.force = self.phi.source
        self.moment = self.phi.target
        self.anch = anchored_from_phi(self.phi)
        self.pi = self.anch.projection
        self.b_force = assemble_boundary(self.force)
        self.b_moment = assemble_boundary(self.moment)
        self.b_anch = assemble_boundary(self.anch.cosheaf)
        self.h_force = HomologyResult(kernel_basis(self.b_force),
                                      linalg.image_complement_basis(self.b_force))
        self.h_moment = HomologyResult(kernel_basis(self.b_moment),
                                       linalg.image_complement_basis(self.b_moment))
        self.h_anch = HomologyResult(kernel_basis(self.b_anch),
                                     linalg.image_complement_basis(self.b_anch))
        self.rigid = rigid_body_space(f)
        self.mech = complement_within(self.rigid, self.h_force.h0)
        self.phi1 = induced_map(self.phi, 1, self.h_force, self.h_moment)
        self.phi0 = induced_map(self.phi, 0, self.h_force, self.h_moment)
        self.pi1 = induced_map(self.pi, 1, self.h_moment, self.h_anch)
        self.theta = self._connecting(section_rng)

    def _edge_sections(self, rng: random.Random | None):
        """Edge-stalk right inverses of the projection.

        The canonical section lands in the orthogonal complement of the
        embedded axial line; a randomized one adds an arbitrary axial
        component, which the snake construction must quotient away.
        """
        if rng is None:
            return self.anch.edge_sections
        out = []
        for e, sec in enumerate(self.anch.edge_sections):
            r = linalg.zeros(self.force.edge_dims[e], sec.shape[1], self.f.mode)
            for i in range(r.shape[0]):
                for j in range(r.shape[1]):
                    v = rng.randint(-3, 3)
                    r[i, j] = v if self.f.mode == MODE_EXACT else float(v)
            out.append(sec + self.phi.edge_maps[e] @ r)
        return tuple(out)

    def lift_to_moment(self, w: np.ndarray, sections=None) -> np.ndarray:
        """Apply the edge-stalk section to a flat C1(anchored) vector."""
        sections = self.anch.edge_sections if sections is None else sections
        out = linalg.zeros(self.moment.c1_dim, 1, self.f.mode)[:, 0]
        aoff = self.anch.cosheaf.edge_offsets()
        moff = self.moment.edge_offsets()
        for e in range(self.f.num_edges):
            ad = self.anch.cosheaf.edge_dims[e]
            md = self.moment.edge_dims[e]
            out[moff[e]:moff[e] + md] = sections[e] @ w[aoff[e]:aoff[e] + ad]
        return out

    def vertex_resultants(self, w: np.ndarray, sections=None) -> np.ndarray:
        """Vertex force resultants of one anchored C1 cycle.

        Lift through the section, apply the frame boundary, and pull the
        per-vertex couples back through the truss embedding.  The pull-back
        is exact only when the moment components vanish, which holds for
        cycles of the anchored boundary; a nonzero residual raises.
        """
        y = self.b_moment @ self.lift_to_moment(w, sections)
        n = self.f.dim
        out = linalg.zeros(self.f.num_vertices, n, self.f.mode)
        moff = self.moment.vertex_offsets()
        for v in range(self.f.num_vertices):
            block = y[moff[v]:moff[v] + self.moment.vertex_dims[v]]
            out[v, :] = solve_in_image(self.phi.vertex_maps[v], block)
        return out

    def _connecting(self, section_rng: random.Random | None) -> ConnectingMap:
        sections = self._edge_sections(section_rng)
        gens = self.h_anch.h1.vectors
        resultants = tuple(self.vertex_resultants(w, sections) for w in gens)
        if not len(gens):
            base = _induced_from_matrix(linalg.zeros(self.h_force.h0.dim, 0, self.f.mode))
            return ConnectingMap(matrix=base.matrix, rank=base.rank, kernel=base.kernel,
                                 image=base.image, resultants=())
        stacked = np.stack([r.reshape(-1) for r in resultants], axis=1)
        im = image_basis(self.b_force).matrix()
        if im.shape[1]:
            stacked = stacked - im @ solve_gram(im, stacked)
        coords = solve_in_image(_h_matrix(self.h_force.h0), stacked)
        base = _induced_from_matrix(coords)
        return ConnectingMap(matrix=base.matrix, rank=base.rank, kernel=base.kernel,
                             image=base.image, resultants=resultants)

    def mechanism_basis_ambient(self) -> SubspaceBasis:
        """Image of the connecting map as vectors in the truss C_0 space."""
        if self.theta.image.dim == 0:
            return SubspaceBasis(self.h_force.h0.ambient_dim,
                                 linalg.zeros(0, self.h_force.h0.ambient_dim, self.f.mode))
        vecs = self.theta.image.vectors @ self.h_force.h0.vectors
        return span_rows(vecs, self.h_force.h0.ambient_dim)


def connecting_map(f: Framework, section_rng: random.Random | None = None) -> ConnectingMap:
    """Snake-lemma connecting homomorphism H1(anchored) -> H0(force).

    A custom ``section_rng`` randomizes the lifting section; the resulting
    map on homology is identical (well-definedness of the construction),
    though the raw resultants may differ by boundary terms.
    """
    return _LesContext(f, section_rng).theta


# ---------------------------------------------------------------------------
# counting rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountCheck:
    name: str
    applicable: bool
    expected: int | None
    computed: int | None
    passed: bool
    note: str = ""


def _counting_checks(f: Framework, dims_f, dims_m, dims_n,
                     rigid_dim, mech_dim) -> tuple:
    n = f.dim
    nv, ne = f.num_vertices, f.num_edges
    k = 3 if n == 2 else 6
    connected = f.connected()
    full_span = _affine_span_full(f)
    checks = []

    if connected:
        expected = n * nv - ne
        computed = rigid_dim + mech_dim - dims_f[0]
        checks.append(CountCheck(
            "maxwell_calladine", True, expected, computed, expected == computed,
            f"n|V|-|E| vs rigid + mechanisms - self-stresses"))
    else:
        checks.append(CountCheck("maxwell_calladine", False, None, None, True,
                                 "not applicable: framework is disconnected"))

    if connected:
        expected = k * (ne - nv + 1)
        checks.append(CountCheck(
            "moment_circuit_rank", True, expected, dims_m[0], expected == dims_m[0],
            f"{k}(|E|-|V|+1) independent stress resultants across the cuts"))
    else:
        checks.append(CountCheck("moment_circuit_rank", False, None, None, True,
                                 "not applicable: framework is disconnected"))

    if connected and full_span:
        expected = 2 * ne - nv if n == 2 else 5 * ne - 3 * nv
        checks.append(CountCheck(
            "anchored_stress_count", True, expected, dims_n[0], expected == dims_n[0],
            "2|E|-|V|" if n == 2 else "5|E|-3|V|"))
        reduced_maxwell = ne - n * nv + (3 if n == 2 else 6)
        expected2 = k * (ne - nv + 1) - reduced_maxwell
        checks.append(CountCheck(
            "anchored_decomposition", True, expected2, dims_n[0], expected2 == dims_n[0],
            "cycle-rule count minus the reduced Maxwell count"))
    else:
        why = "disconnected" if not connected else "degenerate affine span"
        checks.append(CountCheck("anchored_stress_count", False, None, None, True,
                                 f"not applicable: {why}"))
        checks.append(CountCheck("anchored_decomposition", False, None, None, True,
                                 f"not applicable: {why}"))

    if connected:
        alt = (dims_f[0] - mech_dim) + dims_n[0] - dims_m[0]
        checks.append(CountCheck(
            "les_alternating_sum", True, 0, alt, alt == 0,
            "(self-stresses - mechanisms) + anchored stresses - frame stresses"))
    else:
        checks.append(CountCheck("les_alternating_sum", False, None, None, True,
                                 "not applicable: framework is disconnected"))
    return tuple(checks)


def _affine_span_full(f: Framework) -> bool:
    rel = [[p[i] - f.positions[0][i] for i in range(f.dim)] for p in f.positions[1:]]
    if not rel:
        return False
    if f.mode == MODE_EXACT:
        return rank(linalg.exact_matrix(rel)) == f.dim
    return rank(linalg.float_matrix(rel)) == f.dim


def counting_rules(f: Framework) -> tuple:
    """Evaluate the counting rules on one framework.

    Rules that presume connectivity (or, for the anchored count, a
    non-degenerate embedding) are marked not applicable rather than
    failing.
    """
    dims_f = homology_dims(f, "force")
    dims_m = homology_dims(f, "moment")
    dims_n = homology_dims(f, "anchored")
    if f.connected():
        from .structural import build_force_cosheaf
        h0 = linalg.image_complement_basis(assemble_boundary(build_force_cosheaf(f)))
        rigid = rigid_body_space(f)
        mech = complement_within(rigid, h0)
        rigid_dim, mech_dim = rigid.dim, mech.dim
    else:
        rigid_dim = mech_dim = 0
    return _counting_checks(f, dims_f, dims_m, dims_n, rigid_dim, mech_dim)


def homology_dims(f: Framework, which: str) -> tuple[int, int]:
    from .structural import build_force_cosheaf, build_moment_cosheaf, build_anchored_cosheaf
    if which == "force":
        k = build_force_cosheaf(f)
    elif which == "moment":
        k = build_moment_cosheaf(f)
    elif which == "anchored":
        k = build_anchored_cosheaf(f).cosheaf
    else:
        raise ValueError(f"unknown cosheaf {which!r}")
    h = homology(k)
    return (h.dim_h1, h.dim_h0)


# ---------------------------------------------------------------------------
# the verification report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LesCheck:
    code: str
    description: str
    passed: bool
    residual: str


@dataclass(frozen=True)
class LesReport:
    """Everything verify_les knows about one framework."""

    num_vertices: int
    num_edges: int
    dim: int
    connected: bool
    mode: str
    dims_force: tuple[int, int]
    dims_moment: tuple[int, int]
    dims_anchored: tuple[int, int]
    rigid_dim: int
    mech_dim: int
    rank_phi1: int
    rank_pi1: int
    rank_theta: int
    rank_phi0: int
    checks: tuple
    counting: tuple
    mechanism_basis: tuple

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks) and all(c.passed for c in self.counting)


def _subspace_check(code, desc, a: SubspaceBasis, b: SubspaceBasis) -> LesCheck:
    same = subspaces_equal(a, b)
    if a.mode == MODE_EXACT or a.dim == 0 or b.dim == 0:
        if same:
            residual = "exact subspace equality"
        elif a.dim and b.dim:
            union = rank(np.vstack([a.vectors, b.vectors]))
            residual = f"dims {a.dim} vs {b.dim}, union rank {union}"
        else:
            residual = f"dims {a.dim} vs {b.dim}"
    else:
        residual = f"largest principal angle {linalg.largest_principal_angle(a, b):.3e}"
    return LesCheck(code, desc, same, residual)


def verify_les(f: Framework, section_rng: random.Random | None = None) -> LesReport:
    """Compute the long exact sequence and verify exactness at every node.

    Checks (a)-(g) plus the degree-0 tail; each verdict carries residual
    evidence.  Counting-rule results are embedded in the report.
    """
    return _report_from_context(_LesContext(f, section_rng))


def _report_from_context(ctx: _LesContext) -> LesReport:
    f = ctx.f
    checks = []

    h1f, h1m, h1n = ctx.h_force.h1.dim, ctx.h_moment.h1.dim, ctx.h_anch.h1.dim
    checks.append(LesCheck(
        "a", "phi* injective on H1", ctx.phi1.rank == h1f,
        f"rank {ctx.phi1.rank} of {h1f}"))
    checks.append(_subspace_check(
        "b", "im phi* = ker pi* inside H1(moment)", ctx.phi1.image, ctx.pi1.kernel))
    checks.append(_subspace_check(
        "c", "im pi* = ker theta inside H1(anchored)", ctx.pi1.image, ctx.theta.kernel))

    mech_ambient = ctx.mechanism_basis_ambient()
    checks.append(_subspace_check(
        "d", "theta surjective onto the mechanism space", mech_ambient, ctx.mech))
    checks.append(LesCheck(
        "e", "H0(anchored) vanishes", ctx.h_anch.h0.dim == 0,
        f"dim {ctx.h_anch.h0.dim}"))
    alt = (h1f - ctx.mech.dim) + h1n - h1m
    checks.append(LesCheck(
        "f", "alternating dimension sum of the reduced sequence is zero", alt == 0,
        f"sum {alt}"))
    checks.append(LesCheck(
        "g", "dim H1(anchored) = rank pi* + rank theta",
        h1n == ctx.pi1.rank + ctx.theta.rank,
        f"{h1n} vs {ctx.pi1.rank} + {ctx.theta.rank}"))
    checks.append(_subspace_check(
        "h", "im theta = ker phi0* inside H0(force)", ctx.theta.image, ctx.phi0.kernel))
    checks.append(LesCheck(
        "i", "phi0* surjective onto H0(moment)", ctx.phi0.rank == ctx.h_moment.h0.dim,
        f"rank {ctx.phi0.rank} of {ctx.h_moment.h0.dim}"))

    counting = _counting_checks(
        f,
        (h1f, ctx.h_force.h0.dim),
        (h1m, ctx.h_moment.h0.dim),
        (h1n, ctx.h_anch.h0.dim),
        ctx.rigid.dim, ctx.mech.dim)

    return LesReport(
        num_vertices=f.num_vertices,
        num_edges=f.num_edges,
        dim=f.dim,
        connected=True,
        mode=f.mode,
        dims_force=(h1f, ctx.h_force.h0.dim),
        dims_moment=(h1m, ctx.h_moment.h0.dim),
        dims_anchored=(h1n, ctx.h_anch.h0.dim),
        rigid_dim=ctx.rigid.dim,
        mech_dim=ctx.mech.dim,
        rank_phi1=ctx.phi1.rank,
        rank_pi1=ctx.pi1.rank,
        rank_theta=ctx.theta.rank,
        rank_phi0=ctx.phi0.rank,
        checks=tuple(checks),
        counting=counting,
        mechanism_basis=tuple(mech_ambient.vectors),
    )


# ---------------------------------------------------------------------------
# perturbation scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    magnitude: object
    seed: int
    valid: bool
    dims_force: tuple | None = None
    dims_moment: tuple | None = None
    dims_anchored: tuple | None = None
    rank_phi1: int | None = None
    rank_pi1: int | None = None
    rank_theta: int | None = None
    error: str = ""


def perturbation_scan(f: Framework, magnitudes, seeds) -> tuple:
    """Homology dims and induced ranks across coordinate perturbations.

    One row per (magnitude, seed); rows whose perturbation breaks the
    framework (a zero-length edge) are flagged invalid instead of raising.
    """
    from .framework import perturb
    rows = []
    for mag in magnitudes:
        for seed in seeds:
            try:
                g = perturb(f, mag, seed)
                ctx = _LesContext(g)
            except ValueError as exc:
                rows.append(ScanRow(magnitude=mag, seed=seed, valid=False, error=str(exc)))
                continue
            rows.append(ScanRow(
                magnitude=mag, seed=seed, valid=True,
                dims_force=(ctx.h_force.h1.dim, ctx.h_force.h0.dim),
                dims_moment=(ctx.h_moment.h1.dim, ctx.h_moment.h0.dim),
                dims_anchored=(ctx.h_anch.h1.dim, ctx.h_anch.h0.dim),
                rank_phi1=ctx.phi1.rank,
                rank_pi1=ctx.pi1.rank,
                rank_theta=ctx.theta.rank,
            ))
    return tuple(rows)
