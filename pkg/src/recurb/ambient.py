"""Constant-curvature ambient spaces handled through their flat models.

c = 0 is Euclidean space itself.  c > 0 is the round sphere of radius
1/sqrt(c) in E^{N+1}; c < 0 is the upper sheet of the pseudosphere
``-x0^2 + sum x_a^2 = 1/c`` in Minkowski space R^{1,N}.  Every quantity
downstream is computed with ordinary partial derivatives in the model.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, PreconditionError

ON_MODEL_TOL = 1e-9


@dataclass(frozen=True)
class AmbientModel:
    c: float
    ambient_dim: int
    signature: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.ambient_dim) != self.ambient_dim or self.ambient_dim < 3:
            raise InputError(f"ambient_dim must be an integer >= 3, got {self.ambient_dim}")
        if not np.isfinite(self.c):
            raise InputError("curvature constant must be finite")
        sig = np.ones(self.model_dim)
        if self.c < 0:
            sig[0] = -1.0
        sig.setflags(write=False)
        object.__setattr__(self, "signature", sig)

    @property
    def model_dim(self) -> int:
        return self.ambient_dim if self.c == 0 else self.ambient_dim + 1

    @property
    def kind(self) -> str:
        if self.c == 0:
            return "euclidean"
        return "sphere" if self.c > 0 else "hyperbolic"


def euclidean(dim: int) -> AmbientModel:
    return AmbientModel(0.0, dim)


def sphere(dim: int, c: float = 1.0) -> AmbientModel:
    if c <= 0:
        raise InputError("sphere model needs c > 0")
    return AmbientModel(float(c), dim)


def hyperbolic(dim: int, c: float = -1.0) -> AmbientModel:
    if c >= 0:
        raise InputError("hyperbolic model needs c < 0")
    return AmbientModel(float(c), dim)


def signed_inner(u, v, signature) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    sig = np.asarray(signature, dtype=float)
    if u.shape != sig.shape or v.shape != sig.shape:
        raise InputError(
            f"expected vectors of length {sig.shape[0]}, got {u.shape} and {v.shape}")
    return float(np.sum(sig * u * v))


def inner(u, v, a: AmbientModel) -> float:
    """Signature-weighted inner product of two model vectors."""
    return signed_inner(u, v, a.signature)


def on_model_residual(x, a: AmbientModel) -> float:
    if a.c == 0:
        return 0.0
    return abs(inner(x, x, a) - 1.0 / a.c)


def radial_normal(x, a: AmbientModel, tol: float = ON_MODEL_TOL) -> np.ndarray:
    """Unit normal of the model hypersurface at x (in the flat model).

    -sqrt(c) x for the sphere (norm +1), sqrt(-c) x for the pseudosphere
    (norm -1, timelike).
    """
    if a.c == 0:
        raise PreconditionError("flat ambient has no radial normal")
    x = np.asarray(x, dtype=float)
    res = on_model_residual(x, a)
    if res > tol:
        raise PreconditionError(f"point is off the model (residual {res:.3e})")
    if a.c > 0:
        return -np.sqrt(a.c) * x
    return np.sqrt(-a.c) * x
