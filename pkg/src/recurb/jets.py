"""Immersion charts and their derivative jets up to order three."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, EvaluationError, InputError

STEP_REL = 1e-3
STEP_MIN = 1e-5
STEP_MAX = 1e-2


@dataclass(frozen=True)
class Jet3:
    """Value and symmetric partial derivatives of a chart at one point.

    Arrays are indexed (i, ..., a) with parameter indices first and the
    model coordinate last: ``d2[i, j, a] = d^2 r^a / du^i du^j``.
    """

    value: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray
    step_used: np.ndarray

    @property
    def n(self) -> int:
        return self.d1.shape[0]


@dataclass(frozen=True)
class ImmersionChart:
    """A parametrised submanifold: box domain plus a map into model coordinates.

    ``exact_jet(u)`` (optional) returns ``(value, d1, d2, d3)`` with the
    same layout as :class:`Jet3`.
    """

    n: int
    domain: np.ndarray
    eval: Callable[[np.ndarray], np.ndarray]
    exact_jet: Optional[Callable[[np.ndarray], tuple]] = None
    name: str = "chart"
    widths: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dom = np.array(self.domain, dtype=float)
        if self.n < 2 or dom.shape != (self.n, 2) or np.any(dom[:, 1] <= dom[:, 0]):
            raise InputError(f"bad domain {self.domain!r} for n={self.n}")
        dom.setflags(write=False)
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "widths", dom[:, 1] - dom[:, 0])

    def without_exact(self) -> "ImmersionChart":
        return ImmersionChart(self.n, self.domain, self.eval, None, self.name + "[fd]")


def default_step(chart: ImmersionChart) -> np.ndarray:
    return np.clip(STEP_REL * chart.widths, STEP_MIN, STEP_MAX)


def _as_steps(chart, h) -> np.ndarray:
    if h is None or (isinstance(h, str) and h == "auto"):
        return default_step(chart)
    steps = np.broadcast_to(np.asarray(h, dtype=float), (chart.n,)).copy()
    if np.any(steps <= 0):
        raise InputError("finite-difference steps must be positive")
    return steps


def check_inside(chart: ImmersionChart, u, margin=0.0) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (chart.n,):
        raise InputError(f"parameter point must have length {chart.n}")
    lo = chart.domain[:, 0] + margin
    hi = chart.domain[:, 1] - margin
    if np.any(u < lo - 1e-15) or np.any(u > hi + 1e-15):
        raise DomainError(f"point {u} (margin {margin}) leaves domain {chart.domain.tolist()}")
    return u


def evaluate(chart: ImmersionChart, u) -> np.ndarray:
    x = np.asarray(chart.eval(np.asarray(u, dtype=float)), dtype=float)
    if not np.all(np.isfinite(x)):
        raise EvaluationError(f"chart {chart.name} is not finite at {u}")
    return x


def _sym3(t: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(t)
    for p in permutations(range(3)):
        acc += np.transpose(t, p + (3,))
    return acc / 6.0


def _exact(chart, u) -> Jet3:
    value, d1, d2, d3 = (np.asarray(x, dtype=float) for x in chart.exact_jet(u))
    for x in (value, d1, d2, d3):
        if not np.all(np.isfinite(x)):
            raise EvaluationError(f"exact jet of {chart.name} is not finite at {u}")
    return Jet3(value, d1, d2, d3, np.zeros(chart.n))


def eval_jet3(chart: ImmersionChart, u, h=None, use_exact: bool = True) -> Jet3:
    """Jet of ``chart`` at ``u``: exact if available, else central differences."""
    if use_exact and chart.exact_jet is not None:
        return _exact(chart, check_inside(chart, u))
    steps = _as_steps(chart, h)
    n = chart.n
    u = np.asarray(u, dtype=float)
    if u.shape != (n,):
        raise InputError(f"parameter point must have length {n}")
    lo = chart.domain[:, 0] + 2 * steps
    hi = chart.domain[:, 1] - 2 * steps
    if np.any(u < lo - 1e-15) or np.any(u > hi + 1e-15):
        raise DomainError(f"stencil at {u} with steps {steps} leaves domain")

    cache: dict[tuple, np.ndarray] = {}

    def f(offset):
        key = tuple(offset)
        if key not in cache:
            cache[key] = evaluate(chart, u + np.asarray(offset) * steps)
        return cache[key]

    def shift(base, i, m):
        off = list(base)
        off[i] += m
        return off

    def d2_at(base):
        out = np.empty((n, n, f(base).shape[0]))
        for i in range(n):
            out[i, i] = (f(shift(base, i, 1)) - 2 * f(base) + f(shift(base, i, -1))) / steps[i] ** 2
            for j in range(i + 1, n):
                pp = f(shift(shift(base, i, 1), j, 1))
                pm = f(shift(shift(base, i, 1), j, -1))
                mp = f(shift(shift(base, i, -1), j, 1))
                mm = f(shift(shift(base, i, -1), j, -1))
                out[i, j] = out[j, i] = (pp - pm - mp + mm) / (4 * steps[i] * steps[j])
        return out

    zero = [0] * n
    value = f(zero)
    d1 = np.array([(f(shift(zero, i, 1)) - f(shift(zero, i, -1))) / (2 * steps[i])
                   for i in range(n)])
    d2 = d2_at(zero)
    d3 = np.array([(d2_at(shift(zero, i, 1)) - d2_at(shift(zero, i, -1))) / (2 * steps[i])
                   for i in range(n)])
    return Jet3(value, d1, d2, _sym3(d3), steps)
