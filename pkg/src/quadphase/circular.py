"""von Mises statistics and the two-factor form of the coherent-state posterior.

``exp(-2 A (cos phi - c)^2)`` equals, up to a constant,
``exp(4 A c cos phi) * exp(-A cos 2 phi)``: a first-harmonic von Mises factor with
concentration ``|4 A c|`` times a second-harmonic factor with concentration ``A``
located at ``pi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import DomainError
from .numerics import Grid1D, bessel_i0e, bessel_ratio, log_sum_exp_weighted
from .states import TWO_PI, wrap_phase

__all__ = [
    "VonMisesFactor",
    "von_mises_pdf",
    "von_mises_logpdf",
    "von_mises_dispersion",
    "decompose_posterior",
    "verify_decomposition",
]


@dataclass(frozen=True)
class VonMisesFactor:
    kappa: float
    beta: float = 0.0
    harmonic: int = 1

    def __post_init__(self):
        k = float(self.kappa)
        if not math.isfinite(k) or k < 0.0:
            raise DomainError(f"kappa must be finite and nonnegative, got {self.kappa!r}")
        if self.harmonic not in (1, 2):
            raise DomainError(f"harmonic must be 1 or 2, got {self.harmonic!r}")
        object.__setattr__(self, "kappa", k)
        object.__setattr__(self, "beta", wrap_phase(self.beta))

    def log_kernel(self, x):
        """``kappa * cos(harmonic * x - beta)``, the unnormalized log-density."""
        return self.kappa * np.cos(self.harmonic * np.asarray(x, dtype=float) - self.beta)


def von_mises_logpdf(factor: VonMisesFactor, x):
    # log(2 pi I0(k)) = log(2 pi) + k + log(i0e(k)); stays finite for any kappa
    log_norm = math.log(TWO_PI) + factor.kappa + math.log(bessel_i0e(factor.kappa))
    return factor.log_kernel(x) - log_norm


def von_mises_pdf(factor: VonMisesFactor, x):
    """``exp(kappa cos(h x - beta)) / (2 pi I0(kappa))``."""
    return np.exp(von_mises_logpdf(factor, x))


def von_mises_dispersion(kappa) -> float:
    """Circular dispersion ``sqrt(1 - (I1/I0)^2)`` of a von Mises law."""
    a = bessel_ratio(kappa)
    return math.sqrt((1.0 - a) * (1.0 + a))


def decompose_posterior(n_alpha_sq, theta_prime) -> tuple[VonMisesFactor, VonMisesFactor]:
    """Factor the coherent-state posterior into two von Mises terms.

    The first-harmonic concentration ``4 n|alpha|^2 cos theta'`` is kept
    nonnegative by moving its sign into the location (``beta = pi``).
    """
    a = float(n_alpha_sq)
    if not a > 0.0 or not math.isfinite(a):
        raise DomainError(f"n_alpha_sq must be positive and finite, got {n_alpha_sq!r}")
    k1 = 4.0 * a * math.cos(theta_prime)
    first = VonMisesFactor(abs(k1), 0.0 if k1 >= 0.0 else math.pi, harmonic=1)
    second = VonMisesFactor(a, -math.pi, harmonic=2)
    return first, second


def _normalized(logd: np.ndarray, grid: Grid1D) -> np.ndarray:
    return np.exp(logd - log_sum_exp_weighted(logd, grid.weights))


def verify_decomposition(n_alpha_sq, theta_prime, grid: Optional[Grid1D] = None) -> float:
    """Max pointwise gap between the direct posterior and the von Mises product.

    Both are normalized on ``grid`` (default: 4096-node circle) in log domain.
    """
    if grid is None:
        grid = Grid1D.circle(0.0, TWO_PI, 4096)
    phi = grid.nodes
    direct = -2.0 * n_alpha_sq * (np.cos(phi) - math.cos(theta_prime)) ** 2
    f1, f2 = decompose_posterior(n_alpha_sq, theta_prime)
    product = f1.log_kernel(phi) + f2.log_kernel(phi)
    return float(np.max(np.abs(_normalized(direct, grid) - _normalized(product, grid))))
