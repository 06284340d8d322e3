"""Fundamental tensors of a submanifold at a parameter point.

Second fundamental form components are taken in an orthonormal normal
frame ``{n_s}``.  First derivatives of per-point fields (``b``, Gamma and
the normal connection) come from central differences in a smooth local
gauge: the frame at the centre is fixed by :func:`frames.normal_frame`,
and frames at stencil points are obtained by transporting it with
:func:`frames.transport_frame`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .ambient import AmbientModel
from .errors import GaugeError
from .frames import FrameData, induced_metric, normal_frame, transport_frame
from .jets import ImmersionChart, Jet3, default_step, eval_jet3


@dataclass(frozen=True)
class FundamentalData:
    gamma: np.ndarray      # (n, n, n)   Gamma^k_ij
    b: np.ndarray          # (p, n, n)   b^s_ij
    shape_ops: np.ndarray  # (p, n, n)   A_s = g^-1 b^s (mixed index)
    H: np.ndarray          # (p,)        trace(A_s) / n
    omega: np.ndarray      # (n, p, p)   <d_i n_s, n_t>


@dataclass(frozen=True)
class DerivedTensors:
    nabla_bar_b: np.ndarray  # (p, n, n, n)  index order (s, k, i, j)
    riemann: np.ndarray      # (n, n, n, n)  g(R(d_i, d_j) d_k, d_l)
    ricci: np.ndarray        # (n, n)
    normal_curv: np.ndarray  # (p, p, n, n)  <R_perp(d_i, d_j) n_s, n_t>


@dataclass(frozen=True)
class PointGeometry:
    u: np.ndarray
    jet: Jet3
    frame: FrameData
    fundamental: FundamentalData
    derived: DerivedTensors
    steps: np.ndarray

    @property
    def n(self) -> int:
        return self.jet.n

    @property
    def p(self) -> int:
        return self.frame.p

    # short aliases used throughout the analysis code
    @property
    def g(self):
        return self.frame.g

    @property
    def b(self):
        return self.fundamental.b


def christoffel(jet: Jet3, frame: FrameData, a: AmbientModel) -> np.ndarray:
    return K.christoffel(jet.d1, jet.d2, frame.g_inv, a.signature)


def second_fundamental_form(jet: Jet3, frame: FrameData, a: AmbientModel):
    """Return ``(b, A, H)``: components, mixed shape operators, mean curvature."""
    b = K.second_form(jet.d2, frame.normals, a.signature)
    A = np.einsum("kl,slj->skj", frame.g_inv, b)
    H = np.trace(A, axis1=1, axis2=2) / jet.n
    return b, A, H


def orthonormal_tangent_basis(g: np.ndarray) -> np.ndarray:
    """Columns ``e_i`` with ``E.T g E = I``: E = g^{-1/2} (symmetric root)."""
    w, V = np.linalg.eigh(g)
    return (V / np.sqrt(w)) @ V.T


def ricci_from_riemann(riemann: np.ndarray, g: np.ndarray) -> np.ndarray:
    E = orthonormal_tangent_basis(g)
    # S(X, Y) = sum_i g(R(e_i, X) Y, e_i)
    return np.einsum("ai,bi,ajkb->jk", E, E, riemann)


class _Stencil:
    """Lazily evaluated per-point data on the integer lattice ``u + m*h``."""

    def __init__(self, chart, a, u, steps, seed_basis, use_exact):
        self.chart, self.a, self.u, self.h = chart, a, u, steps
        self.use_exact = use_exact
        self._local = {}
        self._omega = {}
        jet = self._jet((0,) * chart.n)
        self.centre = normal_frame(jet, a, seed_basis)
        self._local[(0,) * chart.n] = self._pack(jet, self.centre)

    def _jet(self, off):
        return eval_jet3(self.chart, self.u + np.asarray(off) * self.h, use_exact=self.use_exact)

    def _pack(self, jet, frame):
        gamma = christoffel(jet, frame, self.a)
        b = K.second_form(jet.d2, frame.normals, self.a.signature)
        return jet, frame, gamma, b

    def local(self, off):
        off = tuple(off)
        if off not in self._local:
            jet = self._jet(off)
            frame = transport_frame(jet, self.a, self.centre.normals,
                                    metric=induced_metric(jet, self.a))
            self._local[off] = self._pack(jet, frame)
        return self._local[off]

    def _shift(self, off, i, m):
        off = list(off)
        off[i] += m
        return tuple(off)

    def omega(self, off):
        off = tuple(off)
        if off not in self._omega:
            n = self.chart.n
            frame = self.local(off)[1]
            sig = self.a.signature
            p = frame.p
            out = np.empty((n, p, p))
            for i in range(n):
                plus = self.local(self._shift(off, i, 1))[1]
                minus = self.local(self._shift(off, i, -1))[1]
                if np.any(np.einsum("sa,sa,a->s", plus.normals, minus.normals, sig) < 0):
                    raise GaugeError(f"normal frame flips across the stencil at {self.u}")
                dn = (plus.normals - minus.normals) / (2 * self.h[i])
                w = np.einsum("sa,ta,a->st", dn, frame.normals, sig)
                # the symmetric part is pure truncation error for an orthonormal frame
                out[i] = 0.5 * (w - w.T)
            self._omega[off] = out
        return self._omega[off]

    def derivative(self, fn):
        """Stack of central differences ``d_m fn(off)`` at the centre."""
        n = self.chart.n
        zero = (0,) * n
        return np.array([(fn(self._shift(zero, m, 1)) - fn(self._shift(zero, m, -1)))
                         / (2 * self.h[m]) for m in range(n)])


def evaluate_point(chart: ImmersionChart, a: AmbientModel, u, h=None,
                   seed_basis=None, use_exact: bool = True) -> PointGeometry:
    """All fundamental and derived tensors at ``u``."""
    u = np.asarray(u, dtype=float)
    steps = default_step(chart) if h is None else np.broadcast_to(
        np.asarray(h, dtype=float), (chart.n,)).copy()
    st = _Stencil(chart, a, u, steps, seed_basis, use_exact)
    zero = (0,) * chart.n
    jet, frame, gamma, b = st.local(zero)
    A = np.einsum("kl,slj->skj", frame.g_inv, b)
    H = np.trace(A, axis1=1, axis2=2) / chart.n
    omega = st.omega(zero)
    fund = FundamentalData(gamma, b, A, H, omega)

    db = st.derivative(lambda off: st.local(off)[3])
    dgamma = st.derivative(lambda off: st.local(off)[2])
    domega = st.derivative(st.omega)
    nb = K.nabla_b(b, db, gamma, omega)
    # exact symmetry in (i, j); db and gamma are symmetric up to rounding
    nb = 0.5 * (nb + np.swapaxes(nb, 2, 3))
    riemann = K.riemann(gamma, dgamma, frame.g)
    ricci = ricci_from_riemann(riemann, frame.g)
    ricci = 0.5 * (ricci + ricci.T)
    rperp = K.normal_curvature(omega, domega)
    derived = DerivedTensors(nb, riemann, ricci, rperp)
    return PointGeometry(u, jet, frame, fund, derived, steps)


def nabla_bar_b(chart, u, a, h=None, seed_basis=None) -> np.ndarray:
    return evaluate_point(chart, a, u, h, seed_basis).derived.nabla_bar_b


def intrinsic_curvature(chart, u, a, h=None):
    d = evaluate_point(chart, a, u, h).derived
    return d.riemann, d.ricci


def normal_curvature(chart, u, a, h=None, seed_basis=None) -> np.ndarray:
    return evaluate_point(chart, a, u, h, seed_basis).derived.normal_curv
