"""Reference distributions and resolution predictors to compare the ML posterior against.

Covers the zero-field ("phase without phase") distribution, the posterior obtained when
the local oscillator is shifted by pi/2, and the linear error-propagation width.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exceptions import DomainError
from .inference import (
    PhaseDistribution,
    PhaseInterval,
    asymptotic_posterior,
    circular_dispersion,
    gaussian_width,
)
from .numerics import Grid1D
from .states import StateModel, quadrature_logpdf

__all__ = [
    "Method",
    "ResolutionCurve",
    "vogel_schleich_density",
    "homodyne_posterior",
    "vs_agreement_check",
    "semiclassical_width",
    "resolution_scan",
]

# |sin theta'| below this makes the error-propagation width undefined
SEMICLASSICAL_SIN_FLOOR = 1e-6


class Method(enum.Enum):
    ML_DISPERSION = "ml"
    GAUSSIAN_FISHER = "fisher"
    SEMICLASSICAL = "semiclassical"

    @classmethod
    def parse(cls, value) -> "Method":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            pass
        try:
            return cls[str(value).upper()]
        except KeyError:
            raise DomainError(f"unknown resolution method {value!r}") from None


@dataclass(frozen=True)
class ResolutionCurve:
    """Phase resolution against true phase difference; ``None`` marks an unavailable width."""

    thetas: tuple
    widths: tuple
    method: Method

    def __post_init__(self):
        if len(self.thetas) != len(self.widths):
            raise DomainError("thetas and widths must have equal length")
        if any(b <= a for a, b in zip(self.thetas, self.thetas[1:])):
            raise DomainError("thetas must be strictly increasing")

    def csv_text(self) -> str:
        lines = ["theta_prime,width,method"]
        for t, w in zip(self.thetas, self.widths):
            lines.append(f"{t:.17g},{'' if w is None else format(w, '.17g')},{self.method.value}")
        return "\n".join(lines) + "\n"

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(self.csv_text())


def _half_grid(grid) -> Grid1D:
    if grid is None:
        return PhaseInterval.HALF.grid()
    if isinstance(grid, int):
        return PhaseInterval.HALF.grid(grid)
    return grid


def vogel_schleich_density(model: StateModel, lo_phase_grid=None) -> PhaseDistribution:
    """Probability of a zero quadrature outcome versus local-oscillator phase, normalized on ``[0, pi)``."""
    grid = _half_grid(lo_phase_grid)
    logd = quadrature_logpdf(model, grid.nodes - model.sig_phase, 0.0)
    return PhaseDistribution.from_log_density(grid, PhaseInterval.HALF, logd)


def homodyne_posterior(n_alpha_sq, theta_prime, interval=PhaseInterval.FULL, grid_count=None) -> PhaseDistribution:
    """``exp(-2 n|alpha|^2 (sin phi - sin theta')^2)`` normalized on the interval."""
    a = float(n_alpha_sq)
    if not a > 0.0:
        raise DomainError(f"n_alpha_sq must be positive, got {n_alpha_sq!r}")
    interval = PhaseInterval.parse(interval)
    grid = interval.grid(grid_count)
    logd = -2.0 * a * (np.sin(grid.nodes) - math.sin(theta_prime)) ** 2
    return PhaseDistribution.from_log_density(grid, interval, logd)


def vs_agreement_check(n_alpha_sq, grid_count=None) -> float:
    """Max gap between the zero-field distribution and the ML homodyne posterior.

    The zero-field side uses a single-shot state carrying the whole energy
    (``amp**2 = n_alpha_sq``) read at local-oscillator phase ``theta + pi/2``;
    the ML side is the shifted posterior at ``theta' = 0`` on ``[0, pi)``.
    """
    a = float(n_alpha_sq)
    if not a > 0.0:
        raise DomainError(f"n_alpha_sq must be positive, got {n_alpha_sq!r}")
    grid = PhaseInterval.HALF.grid(grid_count)
    # sig_phase = -pi/2 makes theta' = theta + pi/2
    effective = StateModel(amp=math.sqrt(a), sig_phase=-math.pi / 2)
    vs = vogel_schleich_density(effective, grid)
    ml = homodyne_posterior(a, 0.0, PhaseInterval.HALF, grid_count)
    return float(np.max(np.abs(vs.density - ml.density)))


def semiclassical_width(model: StateModel, theta_prime, n) -> Optional[float]:
    """Error-propagation width ``Delta X / (|d<X>/d theta'| sqrt(n))``; ``None`` near ``sin theta' = 0``."""
    if not n >= 1:
        raise DomainError(f"n must be at least 1, got {n!r}")
    s = abs(math.sin(theta_prime))
    if s < SEMICLASSICAL_SIN_FLOOR or model.amp == 0.0:
        return None
    delta_x = math.exp(-model.squeeze) / math.sqrt(2.0)
    slope = math.sqrt(2.0) * model.amp * s
    return delta_x / (slope * math.sqrt(n))


def resolution_scan(model: StateModel, n, thetas: Sequence[float], method=Method.ML_DISPERSION, grid_count=None) -> ResolutionCurve:
    method = Method.parse(method)
    thetas = tuple(float(t) for t in thetas)
    if any(not 0.0 <= t < math.pi for t in thetas):
        raise DomainError("resolution scan phases must lie in [0, pi)")
    widths = []
    for t in thetas:
        if method is Method.ML_DISPERSION:
            widths.append(circular_dispersion(asymptotic_posterior(model, t, n, PhaseInterval.HALF, grid_count)))
        elif method is Method.GAUSSIAN_FISHER:
            widths.append(gaussian_width(model, t, n))
        else:
            widths.append(semiclassical_width(model, t, n))
    return ResolutionCurve(thetas, tuple(widths), method)
