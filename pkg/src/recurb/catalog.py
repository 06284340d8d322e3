"""Ground-truth immersions with closed-form jets.

Charts are written once as sympy expressions; value and all partials up to
order three are generated symbolically and compiled with ``lambdify``, so
every entry ships an exact jet that is independent of the finite-difference
path in :mod:`recurb.jets`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Optional

import numpy as np
import sympy as sp

from .ambient import AmbientModel
from .errors import InputError
from .jets import ImmersionChart

STATUSES = ("parallel", "recurrent_nonparallel", "not_recurrent", "b_zero")


@dataclass(frozen=True)
class Expected:
    status: str
    dim_N1: Optional[int]
    product_adapted: bool = False
    hypersurface: bool = False


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    description: str
    chart: ImmersionChart
    ambient: AmbientModel
    expected: Expected
    params: dict = field(default_factory=dict)


def symbolic_chart(name: str, exprs, syms, domain) -> ImmersionChart:
    """Compile a sympy parametrisation into a chart with an exact 3-jet."""
    exprs = [sp.sympify(e) for e in exprs]
    n, m = len(syms), len(exprs)
    idx2 = list(combinations_with_replacement(range(n), 2))
    idx3 = list(combinations_with_replacement(range(n), 3))
    derivs = {(): exprs}
    for order in (1, 2, 3):
        for key in combinations_with_replacement(range(n), order):
            lower = derivs[key[:-1]]
            derivs[key] = [sp.diff(e, syms[key[-1]]) for e in lower]
    flat = list(exprs)
    for key in [(i,) for i in range(n)] + idx2 + idx3:
        flat += derivs[key]
    value_fn = sp.lambdify(syms, exprs, modules="numpy")
    jet_fn = sp.lambdify(syms, flat, modules="numpy", cse=True)

    def evaluate(u):
        return np.array(value_fn(*u), dtype=float)

    def exact_jet(u):
        vals = np.array(jet_fn(*u), dtype=float)
        value = vals[:m]
        d1 = vals[m:m + n * m].reshape(n, m)
        off = m + n * m
        d2 = np.empty((n, n, m))
        for c, (i, j) in enumerate(idx2):
            d2[i, j] = d2[j, i] = vals[off + c * m: off + (c + 1) * m]
        off += len(idx2) * m
        d3 = np.empty((n, n, n, m))
        for c, key in enumerate(idx3):
            block = vals[off + c * m: off + (c + 1) * m]
            for i, j, k in {(a, b, d) for a in key for b in key for d in key
                            if sorted((a, b, d)) == list(key)}:
                d3[i, j, k] = block
        return value, d1, d2, d3

    return ImmersionChart(n, np.asarray(domain, dtype=float), evaluate, exact_jet, name)


def givens(dim: int, rotations) -> np.ndarray:
    """Product of plane rotations ``[(i, j, angle), ...]``: exactly orthogonal."""
    Q = np.eye(dim)
    for i, j, t in rotations:
        G = np.eye(dim)
        G[i, i] = G[j, j] = np.cos(t)
        G[i, j], G[j, i] = -np.sin(t), np.sin(t)
        Q = G @ Q
    return Q


# committed rotations for the higher-codimension parabolic cylinders
ROT_E4 = givens(4, [(0, 3, 0.7), (1, 3, -0.4), (2, 3, 0.9), (0, 1, 0.3)])
ROT_E5 = givens(5, [(0, 3, 0.7), (1, 4, -0.5), (2, 3, 0.9), (0, 4, 0.35), (1, 2, 0.25)])

_u, _v = sp.symbols("u v", real=True)
UV = (_u, _v)


def _trig_perturbation(seed: int, terms: int = 3, dims: int = 2, kmax: int = 1):
    """Random smooth trig sum, one component per output dimension."""
    rng = np.random.default_rng(seed)
    comps = [sp.Integer(0)] * dims
    for _ in range(terms):
        k = rng.integers(-kmax, kmax + 1, size=2)
        if not k.any():
            k[0] = 1
        phase = float(rng.uniform(0, 2 * np.pi))
        amp = rng.normal(size=dims)
        arg = int(k[0]) * _u + int(k[1]) * _v + sp.Float(phase)
        for d in range(dims):
            comps[d] = comps[d] + sp.Float(float(amp[d])) * sp.sin(arg)
    return comps


def _param(params, name, default, lo=None, hi=None, integer=False):
    val = params.get(name, default)
    try:
        val = int(val) if integer else float(val)
    except (TypeError, ValueError):
        raise InputError(f"parameter {name!r} must be numeric, got {val!r}") from None
    if integer and float(params.get(name, default)) != val:
        raise InputError(f"parameter {name!r} must be an integer")
    if (lo is not None and val < lo) or (hi is not None and val > hi):
        raise InputError(f"parameter {name!r}={val} outside [{lo}, {hi}]")
    return val


# -- entry builders -----------------------------------------------------------

def _cylinder_parabola(params, dim):
    s = _param(params, "scale", 1.0, 1e-3, 1e3)
    base = [s * _u, s * _u ** 2 / 2, s * _v] + [0] * (dim - 3)
    if dim == 3:
        exprs = base
    else:
        Q = ROT_E4 if dim == 4 else ROT_E5
        exprs = list(sp.Matrix(Q.tolist()) * sp.Matrix(base))
    suffix = "" if dim == 3 else f" rotated into E^{dim}"
    return dict(
        description=f"parabola x cylinder (u, u^2/2, v){suffix}; recurrent, not parallel",
        exprs=exprs, domain=[[-1.5, 1.5], [0.0, 1.0]], ambient=AmbientModel(0.0, dim),
        expected=Expected("recurrent_nonparallel", 1, True, dim == 3), params={"scale": s})


def _cylinder_circular(params):
    r = _param(params, "radius", 1.0, 1e-3, 1e3)
    return dict(
        description="circular cylinder of given radius in E^3; parallel",
        exprs=[r * sp.cos(_u), r * sp.sin(_u), _v], domain=[[-0.25, 0.25], [0.0, 0.5]],
        ambient=AmbientModel(0.0, 3), expected=Expected("parallel", 1, True, True),
        params={"radius": r})


def _plane(params):
    return dict(
        description="coordinate plane in E^3; totally geodesic",
        exprs=[_u, _v, 0], domain=[[-1.0, 1.0], [-1.0, 1.0]],
        ambient=AmbientModel(0.0, 3), expected=Expected("b_zero", 0, True, True), params={})


def _sphere_round(params):
    r = _param(params, "radius", 1.0, 1e-3, 1e3)
    return dict(
        description="round sphere S^2(R) in E^3, latitude/longitude chart; parallel",
        exprs=[r * sp.cos(_u) * sp.cos(_v), r * sp.cos(_u) * sp.sin(_v), r * sp.sin(_u)],
        domain=[[-0.25, 0.25], [0.0, 0.5]], ambient=AmbientModel(0.0, 3),
        expected=Expected("parallel", 1, False, True), params={"radius": r})


def _ellipsoid(params):
    a = _param(params, "a", 1.0, 1e-2, 1e2)
    b = _param(params, "b", 1.0, 1e-2, 1e2)
    c = _param(params, "c", 1.5, 1e-2, 1e2)
    # latitudes away from the equator, where the symmetric spheroid has a
    # pointwise parallel b
    return dict(
        description="ellipsoid with semi-axes (a, b, c) in E^3; not recurrent",
        exprs=[a * sp.cos(_u) * sp.cos(_v), b * sp.cos(_u) * sp.sin(_v), c * sp.sin(_u)],
        domain=[[0.5, 1.0], [0.0, 0.5]], ambient=AmbientModel(0.0, 3),
        expected=Expected("not_recurrent", 1, False, True), params={"a": a, "b": b, "c": c})


def _clifford_torus(params):
    k = 1 / sp.sqrt(2)
    return dict(
        description="Clifford torus in the unit S^3 (c = 1); parallel",
        exprs=[k * sp.cos(_u), k * sp.sin(_u), k * sp.cos(_v), k * sp.sin(_v)],
        domain=[[0.0, 0.5], [0.0, 0.5]], ambient=AmbientModel(1.0, 3),
        expected=Expected("parallel", 1, False, True), params={})


def _sphere_small_in_s3(params):
    rho = _param(params, "rho", 0.7, 1e-2, float(np.pi / 2))
    s, c = sp.sin(sp.Float(rho)), sp.cos(sp.Float(rho))
    return dict(
        description="small (umbilic) 2-sphere of angular radius rho in S^3; parallel",
        exprs=[c, s * sp.cos(_u) * sp.cos(_v), s * sp.cos(_u) * sp.sin(_v), s * sp.sin(_u)],
        domain=[[-0.25, 0.25], [0.0, 0.5]], ambient=AmbientModel(1.0, 3),
        expected=Expected("parallel", 1, False, True), params={"rho": rho})


def _hyperbolic_plane_exprs():
    return [sp.cosh(_u) * sp.cosh(_v), sp.sinh(_u) * sp.cosh(_v), sp.sinh(_v)]


def _hyperbolic_geodesic_plane(params):
    return dict(
        description="totally geodesic H^2 in the hyperboloid model of H^3 (c = -1)",
        exprs=_hyperbolic_plane_exprs() + [0], domain=[[-0.25, 0.25], [-0.25, 0.25]],
        ambient=AmbientModel(-1.0, 3), expected=Expected("b_zero", 0, False, True), params={})


def _hyperbolic_equidistant(params):
    t = _param(params, "distance", 0.5, -5.0, 5.0)
    if t == 0:
        raise InputError("distance 0 is the geodesic plane; use hyperbolic-geodesic-plane")
    ch, sh = sp.cosh(sp.Float(t)), sp.sinh(sp.Float(t))
    return dict(
        description="equidistant surface to a geodesic plane in H^3 (umbilic); parallel",
        exprs=[ch * e for e in _hyperbolic_plane_exprs()] + [sh],
        domain=[[-0.25, 0.25], [-0.25, 0.25]], ambient=AmbientModel(-1.0, 3),
        expected=Expected("parallel", 1, False, True), params={"distance": t})


def _perturbed_torus_e4(params):
    seed = _param(params, "seed", 0, 0, 2 ** 31, integer=True)
    amp = _param(params, "amplitude", 0.1, 0.0, 0.3)
    pert = _trig_perturbation(seed, dims=4)
    base = [sp.cos(_u), sp.sin(_u), sp.cos(_v), sp.sin(_v)]
    return dict(
        description="flat torus in E^4 with a seeded trigonometric perturbation",
        exprs=[b + amp * q for b, q in zip(base, pert)], domain=[[0.0, 0.5], [0.0, 0.5]],
        ambient=AmbientModel(0.0, 4), expected=Expected("not_recurrent", 2),
        params={"seed": seed, "amplitude": amp})


def _perturbed_graph(params, c):
    seed = _param(params, "seed", 0, 0, 2 ** 31, integer=True)
    amp = _param(params, "amplitude", 0.2, 0.0, 0.5)
    p1, p2 = _trig_perturbation(seed, dims=2)
    z = [_u, _v, amp * p1, amp * p2]
    zz = sum(x ** 2 for x in z)
    lead = sp.sqrt(1 - zz) if c > 0 else sp.sqrt(1 + zz)
    model = "S^4 (c = 1)" if c > 0 else "the hyperboloid model of H^4 (c = -1)"
    return dict(
        description=f"seeded perturbed graph surface in {model}",
        exprs=[lead] + z, domain=[[-0.1, 0.1], [-0.1, 0.1]],
        ambient=AmbientModel(float(c), 4), expected=Expected("not_recurrent", 2),
        params={"seed": seed, "amplitude": amp})


_BUILDERS: dict[str, tuple[Callable, tuple[str, ...]]] = {
    "cylinder-parabola": (lambda p: _cylinder_parabola(p, 3), ("scale",)),
    "cylinder-parabola-e4": (lambda p: _cylinder_parabola(p, 4), ("scale",)),
    "cylinder-parabola-e5": (lambda p: _cylinder_parabola(p, 5), ("scale",)),
    "cylinder-circular": (_cylinder_circular, ("radius",)),
    "plane": (_plane, ()),
    "sphere-round": (_sphere_round, ("radius",)),
    "ellipsoid": (_ellipsoid, ("a", "b", "c")),
    "clifford-torus": (_clifford_torus, ()),
    "sphere-small-in-S3": (_sphere_small_in_s3, ("rho",)),
    "hyperbolic-geodesic-plane": (_hyperbolic_geodesic_plane, ()),
    "hyperbolic-equidistant": (_hyperbolic_equidistant, ("distance",)),
    "perturbed-torus-E4": (_perturbed_torus_e4, ("seed", "amplitude")),
    "perturbed-graph-S4": (lambda p: _perturbed_graph(p, 1), ("seed", "amplitude")),
    "perturbed-graph-H4": (lambda p: _perturbed_graph(p, -1), ("seed", "amplitude")),
}


@lru_cache(maxsize=None)
def _instantiate(entry_id: str, frozen: tuple) -> CatalogEntry:
    builder, _ = _BUILDERS[entry_id]
    info = builder(dict(frozen))
    chart = symbolic_chart(entry_id, info["exprs"], UV, info["domain"])
    return CatalogEntry(entry_id, info["description"], chart, info["ambient"],
                        info["expected"], info["params"])


def instantiate(entry_id: str, params: Optional[dict] = None) -> CatalogEntry:
    """Build a catalog entry; identical arguments return the same object."""
    if entry_id not in _BUILDERS:
        raise InputError(f"unknown catalog entry {entry_id!r}")
    params = dict(params or {})
    allowed = _BUILDERS[entry_id][1]
    unknown = sorted(set(params) - set(allowed))
    if unknown:
        raise InputError(f"entry {entry_id!r} takes params {list(allowed)}, got {unknown}")
    return _instantiate(entry_id, tuple(sorted(params.items())))


def list_entries() -> list[tuple[str, str, float, tuple[str, ...]]]:
    """``(id, description, ambient c, param names)`` in stable order."""
    out = []
    for entry_id, (builder, names) in _BUILDERS.items():
        info = builder({})
        out.append((entry_id, info["description"], info["ambient"].c, names))
    return out


def entry_ids() -> list[str]:
    return list(_BUILDERS)
