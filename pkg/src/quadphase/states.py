"""Probe states and the statistics of a rotated-quadrature measurement.

Quadratures follow X(theta) = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2), so the
vacuum variance is 1/2. A measurement at phase difference ``theta_prime`` between local
oscillator and signal returns x distributed as a Gaussian with mean
``sqrt(2) * amp * cos(theta_prime)`` and variance ``exp(-2 r) / 2``.
The squeezed variance is taken independent of ``theta_prime``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.special import ndtr

from .exceptions import DomainError

__all__ = [
    "StateModel",
    "QuadratureDensity",
    "PartitionReport",
    "theta_prime",
    "quadrature_density",
    "quadrature_pdf",
    "quadrature_logpdf",
    "quadrature_mean_and_std",
    "mean_photon_number",
    "optimum_partition",
    "partition_report",
    "wrap_phase",
]

TWO_PI = 2.0 * math.pi
_HALF_LOG_PI = 0.5 * math.log(math.pi)
# optimum_partition is asymptotic; flag when the realised energy is off by more than this
PARTITION_TOLERANCE = 0.25


def wrap_phase(phase) -> float:
    """Map an angle into ``[0, 2 pi)``."""
    w = math.fmod(float(phase), TWO_PI)
    if w < 0.0:
        w += TWO_PI
    return 0.0 if w >= TWO_PI else w


def _finite(name: str, value) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return v


@dataclass(frozen=True)
class StateModel:
    """Coherent (``squeeze == 0``) or quadrature-squeezed probe field.

    Attributes
    ----------
    amp : float
        Coherent amplitude modulus ``|alpha|``.
    sig_phase : float
        Signal phase in radians, stored in ``[0, 2 pi)``.
    squeeze : float
        Squeezing parameter ``r``.
    """

    amp: float = 1.0
    sig_phase: float = 0.0
    squeeze: float = 0.0

    def __post_init__(self):
        amp = _finite("amp", self.amp)
        if amp < 0.0:
            raise DomainError(f"amp must be nonnegative, got {amp}")
        squeeze = _finite("squeeze", self.squeeze)
        # sinh(r)^2 overflows a double beyond |r| ~ 355
        if abs(squeeze) > 350.0:
            raise DomainError(f"squeeze {squeeze} gives a non-finite photon number")
        object.__setattr__(self, "amp", amp)
        object.__setattr__(self, "squeeze", squeeze)
        object.__setattr__(self, "sig_phase", wrap_phase(_finite("sig_phase", self.sig_phase)))

    def to_record(self) -> dict[str, str]:
        return {"amp": repr(self.amp), "sig_phase": repr(self.sig_phase), "squeeze": repr(self.squeeze)}

    @classmethod
    def from_record(cls, record: Mapping[str, str]) -> "StateModel":
        try:
            return cls(
                amp=float(record["amp"]),
                sig_phase=float(record.get("sig_phase", 0.0)),
                squeeze=float(record.get("squeeze", 0.0)),
            )
        except KeyError as exc:
            raise DomainError(f"state record is missing {exc.args[0]!r}") from None
        except ValueError as exc:
            raise DomainError(f"bad state record: {exc}") from None


@dataclass(frozen=True)
class QuadratureDensity:
    """Gaussian law of x at one phase difference. ``inv_std`` is ``sqrt(2) e^r``."""

    mean: float
    inv_std: float
    theta_prime: float

    @property
    def std(self) -> float:
        return 1.0 / self.inv_std

    def logpdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mean) * self.inv_std
        return math.log(self.inv_std) - 0.5 * math.log(TWO_PI) - 0.5 * z * z

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def cdf(self, x):
        return ndtr((np.asarray(x, dtype=float) - self.mean) * self.inv_std)


def theta_prime(model: StateModel, lo_phase) -> float:
    """Phase difference between local oscillator and signal, in ``[0, 2 pi)``."""
    return wrap_phase(_finite("lo_phase", lo_phase) - model.sig_phase)


def quadrature_density(model: StateModel, theta_prime) -> QuadratureDensity:
    return QuadratureDensity(
        mean=math.sqrt(2.0) * model.amp * math.cos(theta_prime),
        inv_std=math.sqrt(2.0) * math.exp(model.squeeze),
        theta_prime=float(theta_prime),
    )


def quadrature_logpdf(model: StateModel, theta_prime, x):
    """``ln p(x, theta')``; broadcasts over array ``theta_prime`` and ``x``."""
    r = model.squeeze
    d = np.asarray(x, dtype=float) - math.sqrt(2.0) * model.amp * np.cos(theta_prime)
    return r - _HALF_LOG_PI - math.exp(2.0 * r) * d * d


def quadrature_pdf(model: StateModel, theta_prime, x):
    """Probability density of the quadrature outcome ``x`` at phase difference ``theta_prime``.

    ``e^r / sqrt(pi) * exp(-e^{2r} (x - sqrt(2) amp cos theta')^2)``; ``r = 0`` is the
    coherent state.
    """
    return np.exp(quadrature_logpdf(model, theta_prime, x))


def quadrature_mean_and_std(model: StateModel, theta_prime) -> tuple[float, float]:
    return (
        math.sqrt(2.0) * model.amp * math.cos(theta_prime),
        math.exp(-model.squeeze) / math.sqrt(2.0),
    )


def mean_photon_number(model: StateModel) -> float:
    return model.amp ** 2 + math.sinh(model.squeeze) ** 2


@dataclass(frozen=True)
class PartitionReport:
    model: StateModel
    requested_n: float
    actual_n: float

    @property
    def deviation(self) -> float:
        return abs(self.actual_n - self.requested_n) / self.requested_n

    @property
    def flagged(self) -> bool:
        return self.deviation > PARTITION_TOLERANCE


def optimum_partition(total_n) -> StateModel:
    """Split a photon budget between displacement and squeezing.

    Uses ``amp = sqrt(N / 2)`` and ``e^r = 2 amp`` exactly. The split is only
    asymptotically energy-preserving; see :func:`partition_report`.
    """
    n = _finite("total_N", total_n)
    if n <= 0.0:
        raise DomainError(f"total_N must be positive, got {total_n!r}")
    amp = math.sqrt(n / 2.0)
    return StateModel(amp=amp, squeeze=math.log(2.0 * amp))


def partition_report(total_n) -> PartitionReport:
    model = optimum_partition(total_n)
    return PartitionReport(model, float(total_n), mean_photon_number(model))
