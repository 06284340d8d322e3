"""Induced metric and orthonormal normal frames."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .ambient import AmbientModel, radial_normal
from .errors import DegenerateImmersionError, FrameError, GaugeError
from .jets import ImmersionChart, Jet3, default_step, eval_jet3

COND_MAX = 1e12
SEED_TOL = 1e-6


@dataclass(frozen=True)
class FrameData:
    g: np.ndarray
    g_inv: np.ndarray
    cond: float
    normals: np.ndarray  # (p, model_dim)
    radial: Optional[np.ndarray] = None

    @property
    def p(self) -> int:
        return self.normals.shape[0]


def induced_metric(jet: Jet3, a: AmbientModel):
    """Return ``(g, g_inv, cond)`` for the pulled-back metric."""
    g = K.gram(jet.d1, a.signature)
    eig = np.linalg.eigvalsh(g)
    if eig[0] <= 0 or eig[-1] / eig[0] > COND_MAX:
        raise DegenerateImmersionError(
            f"induced metric is degenerate (eigenvalues {eig})")
    return g, np.linalg.inv(g), float(eig[-1] / eig[0])


def _complement_projector(jet: Jet3, g_inv, a: AmbientModel, radial):
    """Callable removing tangent (and radial) components from model vectors."""
    sig = a.signature
    d1 = jet.d1
    r_sign = None if radial is None else float(np.sum(sig * radial * radial))

    def project(v):
        for _ in range(2):
            v = v - d1.T @ (g_inv @ (d1 @ (sig * v)))
            if radial is not None:
                v = v - (np.sum(sig * radial * v) / r_sign) * radial
        return v

    return project


def _orthonormalize(candidates, project, sig, p, tol, on_short):
    out = []
    for v in candidates:
        scale = np.sqrt(abs(np.sum(sig * v * v))) or 1.0
        w = project(np.asarray(v, dtype=float))
        for _ in range(2):
            for q in out:
                w = w - np.sum(sig * q * w) * q
        nrm2 = np.sum(sig * w * w)
        if nrm2 <= (tol * scale) ** 2:
            if on_short is not None:
                on_short(v)
            continue
        out.append(w / np.sqrt(nrm2))
        if len(out) == p:
            break
    return out


def _sign_fix(vec):
    for x in vec:
        if abs(x) > 1e-12:
            return vec if x > 0 else -vec
    return vec


def normal_frame(jet: Jet3, a: AmbientModel, seed_basis=None, metric=None) -> FrameData:
    """Orthonormal frame of the normal space of the submanifold inside M(c).

    Gram-Schmidt (signature-aware) over ``seed_basis`` after projecting out
    the tangent plane and, for c != 0, the radial model normal.  Each
    normal is sign-fixed so its first nonzero component is positive.
    """
    n = jet.n
    p = a.ambient_dim - n
    if p < 1:
        raise FrameError(f"ambient dimension {a.ambient_dim} leaves no normal space for n={n}")
    g, g_inv, cond = metric if metric is not None else induced_metric(jet, a)
    radial = radial_normal(jet.value, a) if a.c != 0 else None
    if seed_basis is None:
        seed_basis = np.eye(a.model_dim)
    project = _complement_projector(jet, g_inv, a, radial)
    found = _orthonormalize(seed_basis, project, a.signature, p, SEED_TOL, None)
    if len(found) < p:
        raise FrameError(
            f"seed basis spans only {len(found)} of {p} normal directions; reseed")
    normals = np.array([_sign_fix(v) for v in found])
    return FrameData(g, g_inv, cond, normals, radial)


def transport_frame(jet: Jet3, a: AmbientModel, ref_normals, metric=None) -> FrameData:
    """Frame at a nearby point obtained by projecting a reference frame.

    Smooth in the point and free of sign choices, so finite differences of
    it are well defined.  Equals ``ref_normals`` at the reference point.
    """
    g, g_inv, cond = metric if metric is not None else induced_metric(jet, a)
    radial = radial_normal(jet.value, a) if a.c != 0 else None
    project = _complement_projector(jet, g_inv, a, radial)
    p = len(ref_normals)

    def short(_):
        raise GaugeError("reference frame degenerates on the stencil")

    found = _orthonormalize(ref_normals, project, a.signature, p, 0.5, short)
    return FrameData(g, g_inv, cond, np.array(found), radial)


def frame_derivative(chart: ImmersionChart, u, sigma: int, a: AmbientModel,
                     h=None, seed_basis=None) -> np.ndarray:
    """Central-difference ``d_i n_sigma`` for each parameter direction i."""
    u = np.asarray(u, dtype=float)
    steps = default_step(chart) if h is None else np.broadcast_to(h, (chart.n,))
    centre = normal_frame(eval_jet3(chart, u), a, seed_basis)
    out = np.empty((chart.n, a.model_dim))
    for i in range(chart.n):
        e = np.zeros(chart.n)
        e[i] = steps[i]
        plus = transport_frame(eval_jet3(chart, u + e), a, centre.normals).normals[sigma]
        minus = transport_frame(eval_jet3(chart, u - e), a, centre.normals).normals[sigma]
        if np.sum(a.signature * plus * minus) < 0:
            raise GaugeError(f"normal {sigma} flips sign across the stencil at {u}")
        out[i] = (plus - minus) / (2 * steps[i])
    return out
