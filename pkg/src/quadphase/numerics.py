"""Numerical kernel: modified Bessel functions, grids, quadrature and log-domain sums.

Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .exceptions import DomainError, IntegrationError

__all__ = [
    "Grid1D",
    "bessel_i0",
    "bessel_i1",
    "bessel_i0e",
    "bessel_i1e",
    "log_bessel_i0",
    "log_bessel_i1",
    "bessel_ratio",
    "integrate",
    "integrate_values",
    "log_sum_exp_weighted",
]

# Power series is used up to this argument, the large-argument expansion beyond.
# At 30 the smallest asymptotic term is ~e^-60, so both branches are at machine precision.
_SERIES_MAX = 30.0
_EPS = 1e-17


def _check_kappa(kappa) -> float:
    k = float(kappa)
    if not math.isfinite(k) or k < 0.0:
        raise DomainError(f"Bessel argument must be finite and nonnegative, got {kappa!r}")
    return k


def _series(k: float, order: int) -> float:
    q = 0.25 * k * k
    term = 1.0 if order == 0 else 0.5 * k
    total = term
    m = 0
    while True:
        m += 1
        term *= q / (m * (m + order))
        total += term
        if term < _EPS * total:
            return total


def _asymptotic_scaled(k: float, order: int) -> float:
    # e^-x I_nu(x) ~ (2 pi x)^-1/2 sum_k prod_j ((2j-1)^2 - 4 nu^2) / (k! (8x)^k)
    mu = 4.0 * order * order
    term = 1.0
    total = 1.0
    j = 0
    while True:
        j += 1
        nxt = term * ((2 * j - 1) ** 2 - mu) / (8.0 * j * k)
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) < _EPS * abs(total):
            break
    return total / math.sqrt(2.0 * math.pi * k)


def bessel_i0e(kappa) -> float:
    """Exponentially scaled I0, ``exp(-kappa) * I0(kappa)``."""
    k = _check_kappa(kappa)
    if k <= _SERIES_MAX:
        return _series(k, 0) * math.exp(-k)
    return _asymptotic_scaled(k, 0)


def bessel_i1e(kappa) -> float:
    """Exponentially scaled I1, ``exp(-kappa) * I1(kappa)``."""
    k = _check_kappa(kappa)
    if k == 0.0:
        return 0.0
    if k <= _SERIES_MAX:
        return _series(k, 1) * math.exp(-k)
    return _asymptotic_scaled(k, 1)


def log_bessel_i0(kappa) -> float:
    """Natural log of I0, valid far beyond the overflow range of I0 itself."""
    k = _check_kappa(kappa)
    if k <= _SERIES_MAX:
        return math.log(_series(k, 0))
    return k + math.log(_asymptotic_scaled(k, 0))


def log_bessel_i1(kappa) -> float:
    k = _check_kappa(kappa)
    if k == 0.0:
        return -math.inf
    if k <= _SERIES_MAX:
        return math.log(_series(k, 1))
    return k + math.log(_asymptotic_scaled(k, 1))


def _exp_or_inf(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def bessel_i0(kappa) -> float:
    """Modified Bessel function of the first kind, order zero.

    Parameters
    ----------
    kappa : float
        Nonnegative, finite argument.

    Returns
    -------
    float
        ``I0(kappa)``; ``inf`` once the value overflows a double
        (use :func:`log_bessel_i0` there).
    """
    k = _check_kappa(kappa)
    if k <= _SERIES_MAX:
        return _series(k, 0)
    return _exp_or_inf(log_bessel_i0(k))


def bessel_i1(kappa) -> float:
    """Modified Bessel function of the first kind, order one."""
    k = _check_kappa(kappa)
    if k <= _SERIES_MAX:
        return 0.0 if k == 0.0 else _series(k, 1)
    return _exp_or_inf(log_bessel_i1(k))


def bessel_ratio(kappa) -> float:
    """``I1(kappa) / I0(kappa)`` evaluated from the scaled functions."""
    k = _check_kappa(kappa)
    if k == 0.0:
        return 0.0
    return bessel_i1e(k) / bessel_i0e(k)


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on ``[lo, hi]`` (closed) or ``[lo, hi)`` (periodic).

    A periodic grid omits ``hi`` because it coincides with ``lo`` on the circle.
    """

    lo: float
    hi: float
    count: int
    periodic: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.hi > self.lo:
            raise DomainError(f"grid bounds must be finite with hi > lo, got [{self.lo}, {self.hi}]")
        if int(self.count) != self.count or self.count < 3:
            raise DomainError(f"grid count must be an integer >= 3, got {self.count!r}")
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def closed(cls, lo: float, hi: float, count: int) -> "Grid1D":
        return cls(float(lo), float(hi), count, periodic=False)

    @classmethod
    def circle(cls, lo: float, hi: float, count: int) -> "Grid1D":
        return cls(float(lo), float(hi), count, periodic=True)

    @property
    def step(self) -> float:
        intervals = self.count if self.periodic else self.count - 1
        return (self.hi - self.lo) / intervals

    @cached_property
    def nodes(self) -> np.ndarray:
        nodes = self.lo + self.step * np.arange(self.count, dtype=float)
        if not self.periodic:
            nodes[-1] = self.hi
        nodes.flags.writeable = False
        return nodes

    @cached_property
    def weights(self) -> np.ndarray:
        """Quadrature weights.

        Periodic grids use the uniform (periodic trapezoid) rule, which converges
        spectrally for smooth periodic integrands. Closed grids use composite
        Simpson; with an odd number of intervals the trailing three intervals take
        the 3/8 rule, averaged with the mirrored variant so the weights stay
        symmetric about the midpoint.
        """
        h = self.step
        if self.periodic:
            w = np.full(self.count, h)
        else:
            m = self.count - 1
            if m % 2 == 0:
                w = _simpson_weights(self.count, h)
            else:
                head = np.zeros(self.count)
                if m > 3:
                    head[: m - 2] = _simpson_weights(m - 2, h)
                head[m - 3 :] += np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * h / 8.0)
                w = 0.5 * (head + head[::-1])
        w.flags.writeable = False
        return w


def _simpson_weights(count: int, h: float) -> np.ndarray:
    w = np.ones(count)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def integrate_values(values, grid: Grid1D) -> float:
    """Quadrature of integrand samples already evaluated on ``grid.nodes``."""
    v = np.asarray(values, dtype=float)
    if v.shape != (grid.count,):
        raise DomainError(f"expected {grid.count} integrand values, got shape {v.shape}")
    bad = ~np.isfinite(v)
    if bad.any():
        i = int(np.argmax(bad))
        raise IntegrationError(float(grid.nodes[i]), float(v[i]))
    return float(np.dot(grid.weights, v))


def integrate(f: Callable, grid: Grid1D) -> float:
    """Integrate ``f`` over the grid.

    ``f`` is called once with the full node array; a scalar return value
    is broadcast (constant integrand).
    """
    with np.errstate(all="ignore"):
        values = np.broadcast_to(np.asarray(f(grid.nodes), dtype=float), (grid.count,))
    return integrate_values(values, grid)


def log_sum_exp_weighted(log_values, weights) -> float:
    """Return ``ln(sum_i w_i exp(v_i))`` without overflow or underflow."""
    v = np.asarray(log_values, dtype=float)
    w = np.asarray(weights, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise DomainError("log_values must be a nonempty 1-d sequence")
    if w.shape != v.shape:
        raise DomainError(f"weights shape {w.shape} does not match log_values shape {v.shape}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise DomainError("weights must be finite and nonnegative")
    with np.errstate(divide="ignore"):
        a = v + np.log(w)
    top = float(np.max(a))
    if top == -math.inf:
        return -math.inf
    if not math.isfinite(top):
        raise DomainError("log_values must not contain +inf or nan")
    return top + math.log(float(np.sum(np.exp(a - top))))
