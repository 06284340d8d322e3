"""Residual checks and the recurrence classification.

Every function here consumes :class:`~recurb.tensors.PointGeometry` bundles
(or grids of them) and returns plain numbers or small report records.
Residuals are dimensionless so one set of tolerances serves all charts.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .ambient import AmbientModel
from .errors import SamplingError
from .frames import induced_metric, normal_frame
from .jets import ImmersionChart, default_step, eval_jet3
from .tensors import PointGeometry, evaluate_point, orthonormal_tangent_basis

PARALLEL = "parallel"
RECURRENT = "recurrent_nonparallel"
NOT_RECURRENT = "not_recurrent"
B_ZERO = "b_zero"


@dataclass(frozen=True)
class Tolerances:
    parallel: float = 1e-4   # |nabla b| <= parallel * (1 + |b|)
    recur: float = 1e-2      # relative recurrence residual
    rank: float = 1e-6       # singular value cutoff, relative to the largest
    b_zero: float = 1e-8     # |b| below this counts as totally geodesic
    identity: float = 1e-3   # Gauss / Codazzi / Ricci pass threshold

    def __post_init__(self):
        for name, val in self.__dict__.items():
            if not val > 0:
                raise ValueError(f"tolerance {name} must be positive, got {val}")


DEFAULT_TOL = Tolerances()


# -- structure equations -----------------------------------------------------

def gauss_residual(pg: PointGeometry, a: AmbientModel) -> float:
    R = pg.derived.riemann
    rhs = K.gauss_rhs(pg.g, pg.b, float(a.c))
    return float(np.max(np.abs(R - rhs)) / (1.0 + np.max(np.abs(R))))


def codazzi_residual(pg: PointGeometry) -> float:
    nb = pg.derived.nabla_bar_b
    swapped = np.swapaxes(nb, 1, 2)  # (s, i, k, j)
    return float(np.max(np.abs(nb - swapped)) / (1.0 + np.max(np.abs(nb))))


def commutator_pairing(pg: PointGeometry) -> np.ndarray:
    """``g([A_s, A_t] d_i, d_j)`` indexed (s, t, i, j)."""
    A, b = pg.fundamental.shape_ops, pg.b
    # g(A_s A_t X, Y) = b^s(A_t X, Y)
    term = np.einsum("tmi,smj->stij", A, b)
    return term - np.swapaxes(term, 0, 1)


def ricci_eq_residual(pg: PointGeometry) -> tuple[float, bool]:
    """Return ``(residual, trivial)``; hypersurfaces are trivially flat."""
    if pg.p == 1:
        return 0.0, True
    rhs = commutator_pairing(pg)
    diff = pg.derived.normal_curv - rhs
    return float(np.max(np.abs(diff)) / (1.0 + np.max(np.abs(rhs)))), False


def identity_residuals(pg: PointGeometry, a: AmbientModel) -> dict:
    ricci, trivial = ricci_eq_residual(pg)
    return {"gauss": gauss_residual(pg, a), "codazzi": codazzi_residual(pg),
            "ricci": ricci, "ricci_trivial": trivial}


# -- recurrence ----------------------------------------------------------------

@dataclass(frozen=True)
class RecurrenceReport:
    mu: np.ndarray
    residual: float
    nabla_b_norm: float
    b_norm: float
    status: str


def extract_recurrence(pg: PointGeometry, tol: Tolerances = DEFAULT_TOL) -> RecurrenceReport:
    """Least-squares 1-form ``mu`` with ``nabla b ~ mu (x) b`` and a status."""
    b = pg.b
    nb = pg.derived.nabla_bar_b  # (s, k, i, j)
    b_norm = float(np.linalg.norm(b))
    nb_norm = float(np.linalg.norm(nb))
    n = pg.n
    if b_norm <= tol.b_zero:
        return RecurrenceReport(np.zeros(n), 0.0, nb_norm, b_norm, B_ZERO)
    mu = np.einsum("skij,sij->k", nb, b) / b_norm ** 2
    resid = float(np.linalg.norm(nb - np.einsum("k,sij->skij", mu, b)) / b_norm)
    if nb_norm <= tol.parallel * (1.0 + b_norm):
        status = PARALLEL
    elif resid <= tol.recur:
        status = RECURRENT
    else:
        status = NOT_RECURRENT
    return RecurrenceReport(mu, resid, nb_norm, b_norm, status)


# -- first normal space ------------------------------------------------------------

def _slot_matrix(pg: PointGeometry) -> np.ndarray:
    iu = np.triu_indices(pg.n)
    return pg.b[:, iu[0], iu[1]]  # (p, n(n+1)/2)


def first_normal_basis(pg: PointGeometry, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal coefficients (rows, in the frame ``{n_s}``) spanning N_1."""
    M = _slot_matrix(pg)
    if np.linalg.norm(M) <= tol.b_zero:
        return np.zeros((0, pg.p))
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    keep = s > tol.rank * s[0]
    return U[:, keep].T


def first_normal_dim(pg: PointGeometry, tol: Tolerances = DEFAULT_TOL) -> int:
    return int(first_normal_basis(pg, tol).shape[0])


def first_normal_vectors(pg: PointGeometry, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """N_1 basis as model-space vectors."""
    return first_normal_basis(pg, tol) @ pg.frame.normals


def normal_parallel_residual(pg: PointGeometry, tol: Tolerances = DEFAULT_TOL) -> float:
    """Size of the N_0 part of ``nabla b`` relative to ``1 + |nabla b|``.

    D_X b(Y, Z) = (nabla_X b)(Y, Z) + terms already in N_1, so N_1 is
    parallel in the normal connection exactly when this vanishes.
    """
    basis = first_normal_basis(pg, tol)
    nb = pg.derived.nabla_bar_b
    if basis.shape[0] == 0:
        return float(np.linalg.norm(nb))
    proj = np.eye(pg.p) - basis.T @ basis
    off = np.einsum("st,tkij->skij", proj, nb)
    return float(np.linalg.norm(off) / (1.0 + np.linalg.norm(nb)))


# -- consequences of recurrence -----------------------------------------------------

def einstein_residual(pg: PointGeometry, a: AmbientModel) -> float:
    lam = a.c * (pg.n - 1)
    return float(np.max(np.abs(pg.derived.ricci - lam * pg.g)) / np.max(np.abs(pg.g)))


def h_pairing_residual(pg: PointGeometry) -> float:
    """``n <H, b(X,Y)>`` against ``sum_s g(A_s X, A_s Y)``."""
    b, H = pg.b, pg.fundamental.H
    lhs = pg.n * np.einsum("s,sij->ij", H, b)
    rhs = np.einsum("sik,kl,slj->ij", b, pg.frame.g_inv, b)
    return float(np.max(np.abs(lhs - rhs)) / (1.0 + np.max(np.abs(rhs))))


@dataclass(frozen=True)
class EigenResult:
    applicable: bool
    residual: Optional[float] = None
    eigenvalues: Optional[np.ndarray] = None
    trace: Optional[float] = None
    gap_ratio: Optional[float] = None
    pattern_ok: Optional[bool] = None


def shape_eigenstructure(pg: PointGeometry, tol: Tolerances = DEFAULT_TOL,
                        pattern_tol: float = 1e-4) -> EigenResult:
    """Check ``trace(A) A - A^2 = 0`` for the shape operator of N_1's generator.

    Pattern: one principal curvature equal to ``trace A`` (nonzero), the
    other n-1 vanishing.
    """
    basis = first_normal_basis(pg, tol)
    if basis.shape[0] != 1:
        return EigenResult(False)
    b_xi = np.einsum("s,sij->ij", basis[0], pg.b)
    E = orthonormal_tangent_basis(pg.g)
    Ahat = E.T @ b_xi @ E
    Ahat = 0.5 * (Ahat + Ahat.T)
    k = np.linalg.eigvalsh(Ahat)
    k = k[np.argsort(-np.abs(k), kind="stable")]
    tr = float(np.trace(Ahat))
    resid = np.linalg.norm(tr * Ahat - Ahat @ Ahat) / (1.0 + np.max(np.abs(k)) ** 2)
    rest = float(np.max(np.abs(k[1:]))) if len(k) > 1 else 0.0
    gap = float(abs(k[0]) / rest) if rest > 0 else float("inf")
    ok = (abs(k[0]) > pattern_tol
          and abs(k[0] - tr) <= pattern_tol * (1 + abs(tr))
          and rest <= pattern_tol
          and gap >= 100.0)
    return EigenResult(True, float(resid), k, tr, gap, bool(ok))


# -- grid-level checks ---------------------------------------------------------

@dataclass(frozen=True)
class ProductCheck:
    applicable: bool
    orthogonality: Optional[float] = None
    conjugacy: Optional[float] = None
    second_block: Optional[float] = None
    block_independence: Optional[float] = None

    def worst(self) -> Optional[float]:
        if not self.applicable:
            return None
        return max(self.orthogonality, self.conjugacy, self.second_block,
                   self.block_independence)


def product_structure_check(chart: ImmersionChart, a: AmbientModel, points,
                            adapted: bool, force: bool = False,
                            seed_basis=None, h=None) -> ProductCheck:
    """Residuals of the product form: u^1 spans L_1, u^2..u^n span L_2.

    orthogonality   max |g_1j|, j >= 2
    conjugacy       max |b(d_1, d_j)|, j >= 2
    second_block    max |b(d_i, d_j)|, i, j >= 2
    block_independence  max |d_j g_11| (j >= 2) and |d_1 g_ij| (i, j >= 2)
    """
    if not (adapted or force):
        return ProductCheck(False)
    steps = default_step(chart) if h is None else np.broadcast_to(h, (chart.n,))
    orth = conj = blk = indep = 0.0

    def metric_at(u):
        return induced_metric(eval_jet3(chart, u), a)[0]

    for u in points:
        u = np.asarray(u, dtype=float)
        jet = eval_jet3(chart, u)
        frame = normal_frame(jet, a, seed_basis)
        g = frame.g
        bn = np.linalg.norm(K.second_form(jet.d2, frame.normals, a.signature), axis=0)
        orth = max(orth, float(np.max(np.abs(g[0, 1:]))))
        conj = max(conj, float(np.max(bn[0, 1:])))
        blk = max(blk, float(np.max(bn[1:, 1:])))
        for m in range(chart.n):
            e = np.zeros(chart.n)
            e[m] = steps[m]
            dg = (metric_at(u + e) - metric_at(u - e)) / (2 * steps[m])
            val = abs(dg[0, 0]) if m > 0 else np.max(np.abs(dg[1:, 1:]))
            indep = max(indep, float(val))
    return ProductCheck(True, orth, conj, blk, indep)


def mean_curvature_norm(chart, a, u, seed_basis=None) -> float:
    jet = eval_jet3(chart, u)
    frame = normal_frame(jet, a, seed_basis)
    b = K.second_form(jet.d2, frame.normals, a.signature)
    H = np.einsum("ij,sij->s", frame.g_inv, b) / chart.n
    return float(np.linalg.norm(H))


def mu_vs_dlnH(chart: ImmersionChart, a: AmbientModel, points, mus,
               h=None, h_floor: float = 1e-8) -> Optional[float]:
    """max |mu_k - d_k ln|H||; None when |H| vanishes somewhere on the grid."""
    steps = default_step(chart) if h is None else np.broadcast_to(h, (chart.n,))
    worst = 0.0
    for u, mu in zip(points, mus):
        u = np.asarray(u, dtype=float)
        if mean_curvature_norm(chart, a, u) <= h_floor:
            return None
        for k in range(chart.n):
            e = np.zeros(chart.n)
            e[k] = steps[k]
            hp = mean_curvature_norm(chart, a, u + e)
            hm = mean_curvature_norm(chart, a, u - e)
            if min(hp, hm) <= h_floor:
                return None
            dln = (np.log(hp) - np.log(hm)) / (2 * steps[k])
            worst = max(worst, abs(float(mu[k]) - dln))
    return worst


def codimension_reduction_rank(pgs: Sequence[PointGeometry], a: AmbientModel,
                               tol: Tolerances = DEFAULT_TOL) -> int:
    """Rank of tangents, first normals and positions over a grid.

    Affine span (positions minus their mean) for c = 0, linear span in the
    flat model for c != 0.
    """
    if len(pgs) < 2 * pgs[0].n + 2:
        raise SamplingError(f"need at least {2 * pgs[0].n + 2} points, got {len(pgs)}")
    pos = np.array([pg.jet.value for pg in pgs])
    if a.c == 0:
        pos = pos - pos.mean(axis=0)
    rows = [pos]
    for pg in pgs:
        rows.append(pg.jet.d1)
        rows.append(first_normal_vectors(pg, tol))
    M = np.vstack(rows)
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol.rank * s[0]))


# -- grid classification --------------------------------------------------------

def grid_points(chart: ImmersionChart, counts, margin_steps: Optional[float] = None):
    """Tensor grid of interior points, inset from the boundary by a few FD steps."""
    counts = list(counts)
    if len(counts) == 1:
        counts = counts * chart.n
    if len(counts) != chart.n:
        raise ValueError(f"grid needs {chart.n} counts, got {len(counts)}")
    if any(int(c) != c or c < 3 for c in counts):
        raise ValueError(f"grid counts must be integers >= 3, got {counts}")
    if margin_steps is None:
        # stencils reach 2 steps; FD jets add 2 more
        margin_steps = 3.0 if chart.exact_jet is not None else 5.0
    steps = default_step(chart)
    axes = [np.linspace(lo + margin_steps * h, hi - margin_steps * h, int(c))
            for (lo, hi), h, c in zip(chart.domain, steps, counts)]
    return [np.array(p) for p in product(*axes)]


@dataclass(frozen=True)
class PointReport:
    u: np.ndarray
    recurrence: RecurrenceReport
    dim_N1: int
    dim_N0: int
    gauss: float
    codazzi: float
    ricci: float
    ricci_trivial: bool
    einstein_residual: float
    normal_flat_residual: float
    normal_parallel_residual: float
    h_pairing_residual: float
    shape_eig: EigenResult
    H_norm: float

    @property
    def status(self) -> str:
        return self.recurrence.status


@dataclass
class ClassificationReport:
    c: float
    points: list
    product_check: ProductCheck
    mu_vs_dlnH: Optional[float]
    codim_rank: Optional[int]
    summary: dict = field(default_factory=dict)


def classify_point(pg: PointGeometry, a: AmbientModel,
                   tol: Tolerances = DEFAULT_TOL) -> PointReport:
    rec = extract_recurrence(pg, tol)
    dim1 = first_normal_dim(pg, tol)
    ricci, trivial = ricci_eq_residual(pg)
    return PointReport(
        u=pg.u, recurrence=rec, dim_N1=dim1, dim_N0=pg.p - dim1,
        gauss=gauss_residual(pg, a), codazzi=codazzi_residual(pg),
        ricci=ricci, ricci_trivial=trivial,
        einstein_residual=einstein_residual(pg, a),
        normal_flat_residual=float(np.max(np.abs(pg.derived.normal_curv))),
        normal_parallel_residual=normal_parallel_residual(pg, tol),
        h_pairing_residual=h_pairing_residual(pg), shape_eig=shape_eigenstructure(pg, tol),
        H_norm=float(np.linalg.norm(pg.fundamental.H)))


def grid_status(statuses) -> str:
    s = set(statuses)
    if s == {B_ZERO}:
        return B_ZERO
    if NOT_RECURRENT in s:
        return NOT_RECURRENT
    if RECURRENT in s:
        return RECURRENT
    return PARALLEL


def classify(chart: ImmersionChart, a: AmbientModel, counts=(5,),
             tol: Tolerances = DEFAULT_TOL, product_adapted: bool = False,
             seed_basis=None) -> ClassificationReport:
    """Run every pointwise and grid-level check on a tensor grid."""
    pts = grid_points(chart, counts)
    pgs = [evaluate_point(chart, a, u, seed_basis=seed_basis) for u in pts]
    reports = [classify_point(pg, a, tol) for pg in pgs]
    statuses = [r.status for r in reports]
    prod = product_structure_check(chart, a, pts, product_adapted, seed_basis=seed_basis)
    mu_h = None
    if all(s in (PARALLEL, RECURRENT) for s in statuses):
        mu_h = mu_vs_dlnH(chart, a, pts, [r.recurrence.mu for r in reports])
    try:
        codim = codimension_reduction_rank(pgs, a, tol)
    except SamplingError:
        codim = None

    def worst(getter):
        vals = [(getter(r), r.u) for r in reports]
        vals = [(v, u) for v, u in vals if v is not None]
        if not vals:
            return None
        v, u = max(vals, key=lambda t: t[0])
        return {"value": v, "u": u}

    summary = {
        "grid_status": grid_status(statuses),
        "status_histogram": dict(sorted(Counter(statuses).items())),
        "dim_N1_mode": Counter(r.dim_N1 for r in reports).most_common(1)[0][0],
        "worst_residuals": {
            "gauss": worst(lambda r: r.gauss),
            "codazzi": worst(lambda r: r.codazzi),
            "ricci": worst(lambda r: r.ricci),
            "recurrence": worst(lambda r: r.recurrence.residual),
            "einstein": worst(lambda r: r.einstein_residual),
            "normal_flat": worst(lambda r: r.normal_flat_residual),
            "normal_parallel": worst(lambda r: r.normal_parallel_residual),
            "h_pairing": worst(lambda r: r.h_pairing_residual),
            "shape_quadratic": worst(lambda r: r.shape_eig.residual),
        },
    }
    return ClassificationReport(a.c, reports, prod, mu_h, codim, summary)
