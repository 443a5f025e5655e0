"""Maximum-likelihood phase inference from quadrature records.

Posteriors are built on a uniform phase grid and kept in log domain until the
final normalization, so records with ``n * amp**2`` in the tens of thousands stay
finite. All entry points take the sample ``values`` only, never the true phase.
"""
from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exceptions import ContractError, DomainError
from .numerics import Grid1D, integrate_values, log_sum_exp_weighted
from .states import StateModel, TWO_PI, quadrature_density, quadrature_logpdf

__all__ = [
    "PhaseInterval",
    "PhaseDistribution",
    "EstimateReport",
    "log_likelihood",
    "empirical_posterior",
    "relative_entropy",
    "asymptotic_posterior",
    "shannon_entropy",
    "fisher_information",
    "gaussian_width",
    "circular_dispersion",
    "ml_estimate",
    "width_scaling_probe",
    "total_variation",
]

_HALF_LOG_PI = 0.5 * math.log(math.pi)
NORMALIZATION_TOL = 1e-6
# Fisher information below these is treated as vanishing (relative / absolute)
FISHER_REL_THRESHOLD = 1e-9
FISHER_ABS_THRESHOLD = 1e-12
# secondary peak within this log-density gap of the global peak counts as a twin
TWIN_LOG_RATIO = -0.5
# truncation of the x-integral, in standard deviations beyond the extreme means
_TAIL_SIGMAS = 10.0
_ENTROPY_NODES = 4001


class PhaseInterval(enum.Enum):
    """Range of inferred phases: the full circle or the half-width interval."""

    FULL = "full"
    HALF = "half"

    @property
    def lo(self) -> float:
        return 0.0

    @property
    def hi(self) -> float:
        return TWO_PI if self is PhaseInterval.FULL else math.pi

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def default_count(self) -> int:
        return 4096 if self is PhaseInterval.FULL else 2048

    def grid(self, count: Optional[int] = None) -> Grid1D:
        count = self.default_count if count is None else count
        if self is PhaseInterval.FULL:
            return Grid1D.circle(0.0, TWO_PI, count)
        # [0, pi) posteriors are not pi-periodic, so the closed grid is integrated with Simpson
        return Grid1D.closed(0.0, math.pi, count)

    @classmethod
    def parse(cls, value) -> "PhaseInterval":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"interval must be 'full' or 'half', got {value!r}") from None


@dataclass(frozen=True, eq=False)
class PhaseDistribution:
    """A normalized density over a phase grid.

    ``log_density`` is the unnormalized log-density; ``density`` equals
    ``exp(log_density - log_norm)``. ``model`` and ``n`` record how the
    distribution was built, when known, so estimates can report a Fisher width.
    """

    grid: Grid1D
    interval: PhaseInterval
    log_density: np.ndarray
    log_norm: float
    density: np.ndarray
    model: Optional[StateModel] = None
    n: Optional[float] = None

    @classmethod
    def from_log_density(cls, grid, interval, log_density, model=None, n=None) -> "PhaseDistribution":
        logd = np.array(np.broadcast_to(np.asarray(log_density, dtype=float), (grid.count,)))
        log_norm = log_sum_exp_weighted(logd, grid.weights)
        if not math.isfinite(log_norm):
            raise ContractError(f"posterior cannot be normalized (log normalizer {log_norm})")
        density = np.exp(logd - log_norm)
        logd.flags.writeable = False
        density.flags.writeable = False
        return cls(grid, PhaseInterval.parse(interval), logd, log_norm, density, model, n)

    @property
    def phi(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def normalized_log_density(self) -> np.ndarray:
        return self.log_density - self.log_norm

    def integral(self) -> float:
        return integrate_values(self.density, self.grid)

    def check_normalized(self, tol: float = NORMALIZATION_TOL) -> None:
        total = self.integral()
        if abs(total - 1.0) > tol:
            raise ContractError(f"distribution integrates to {total!r}, not 1 (tolerance {tol})")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(f"# interval={self.interval.value},count={self.grid.count}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["phi", "density", "log_density"])
            for phi, d, ld in zip(self.phi, self.density, self.normalized_log_density):
                writer.writerow([f"{phi:.17g}", f"{d:.17g}", f"{ld:.17g}"])


@dataclass(frozen=True)
class EstimateReport:
    phi_hat: float
    dispersion: float
    gaussian_width: Optional[float]
    twin_peak: bool
    interval: PhaseInterval

    def to_record(self) -> dict:
        return {
            "phi_hat": self.phi_hat,
            "dispersion": self.dispersion,
            "gaussian_width": self.gaussian_width,
            "twin_peak": self.twin_peak,
            "interval": self.interval.value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2)


def _as_values(values) -> np.ndarray:
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise DomainError("log-likelihood needs at least one sample value")
    return v


def log_likelihood(model: StateModel, values: Sequence[float], phi):
    """Sum of ``ln p(x_i, phi)`` over the record; vectorized over ``phi``.

    The Gaussian family reduces the sum to the sample mean and the centred sum
    of squares, which keeps long records cheap on fine grids.
    """
    x = _as_values(values)
    n = x.size
    xbar = float(np.mean(x))
    ss = float(np.sum((x - xbar) ** 2))
    mu = math.sqrt(2.0) * model.amp * np.cos(phi)
    r = model.squeeze
    return n * (r - _HALF_LOG_PI) - math.exp(2.0 * r) * (ss + n * (xbar - mu) ** 2)


def empirical_posterior(model: StateModel, values, interval=PhaseInterval.HALF, grid_count=None) -> PhaseDistribution:
    """Normalized likelihood of an observed record over the phase interval."""
    interval = PhaseInterval.parse(interval)
    grid = interval.grid(grid_count)
    x = _as_values(values)
    return PhaseDistribution.from_log_density(
        grid, interval, log_likelihood(model, x, grid.nodes), model=model, n=x.size
    )


def _relative_entropy_closed(model, theta_prime, phi):
    r = model.squeeze
    d = np.cos(phi) - math.cos(theta_prime)
    return _HALF_LOG_PI - r + 0.5 + math.exp(2.0 * r) * 2.0 * model.amp ** 2 * d * d


def _relative_entropy_quadrature(model, theta_prime, phi) -> float:
    dens = quadrature_density(model, theta_prime)
    mu_phi = math.sqrt(2.0) * model.amp * math.cos(phi)
    lo = min(dens.mean, mu_phi) - _TAIL_SIGMAS * dens.std
    hi = max(dens.mean, mu_phi) + _TAIL_SIGMAS * dens.std
    grid = Grid1D.closed(lo, hi, _ENTROPY_NODES)
    x = grid.nodes
    return -integrate_values(dens.pdf(x) * quadrature_logpdf(model, phi, x), grid)


def relative_entropy(model: StateModel, theta_prime, phi, method: str = "closed"):
    """Cross entropy ``-int p(x, theta') ln p(x, phi) dx``.

    Parameters
    ----------
    method : {"closed", "quadrature"}
        ``"closed"`` evaluates the analytic Gaussian result and broadcasts over
        ``phi``; ``"quadrature"`` integrates the definition numerically on a
        truncated x-range (scalar ``phi`` only).
    """
    if method == "closed":
        return _relative_entropy_closed(model, theta_prime, phi)
    if method == "quadrature":
        return _relative_entropy_quadrature(model, float(theta_prime), float(phi))
    raise DomainError(f"unknown relative entropy method {method!r}")


def asymptotic_posterior(model: StateModel, theta_prime, n, interval=PhaseInterval.HALF, grid_count=None) -> PhaseDistribution:
    """Large-sample posterior ``exp(-n S(phi | theta'))`` normalized on the interval."""
    if not n >= 1:
        raise DomainError(f"n must be at least 1, got {n!r}")
    interval = PhaseInterval.parse(interval)
    grid = interval.grid(grid_count)
    logd = -n * _relative_entropy_closed(model, theta_prime, grid.nodes)
    return PhaseDistribution.from_log_density(grid, interval, logd, model=model, n=n)


def shannon_entropy(model: StateModel, theta_prime=0.0) -> float:
    """Differential entropy of the quadrature distribution (independent of ``theta_prime``)."""
    return _HALF_LOG_PI + 0.5 - model.squeeze


def _fisher_numerical(model, theta_prime, step=1e-5) -> float:
    dens = quadrature_density(model, theta_prime)
    mu_lo = math.sqrt(2.0) * model.amp * math.cos(theta_prime + step)
    mu_hi = math.sqrt(2.0) * model.amp * math.cos(theta_prime - step)
    lo = min(dens.mean, mu_lo, mu_hi) - _TAIL_SIGMAS * dens.std
    hi = max(dens.mean, mu_lo, mu_hi) + _TAIL_SIGMAS * dens.std
    grid = Grid1D.closed(lo, hi, _ENTROPY_NODES)
    x = grid.nodes
    score = (quadrature_logpdf(model, theta_prime + step, x) - quadrature_logpdf(model, theta_prime - step, x)) / (2 * step)
    return integrate_values(dens.pdf(x) * score * score, grid)


def fisher_information(model: StateModel, theta_prime, method: str = "analytic") -> float:
    """Fisher information of one quadrature outcome about the phase difference.

    ``"analytic"`` returns ``4 amp^2 e^{2r} sin^2 theta'``; ``"numerical"``
    integrates the squared central-difference score against the density.
    """
    if method == "analytic":
        return 4.0 * model.amp ** 2 * math.exp(2.0 * model.squeeze) * math.sin(theta_prime) ** 2
    if method == "numerical":
        return _fisher_numerical(model, float(theta_prime))
    raise DomainError(f"unknown Fisher information method {method!r}")


def gaussian_width(model: StateModel, theta_prime, n) -> Optional[float]:
    """``1 / sqrt(n I)``, or ``None`` where the Fisher information vanishes."""
    if not n >= 1:
        raise DomainError(f"n must be at least 1, got {n!r}")
    info = fisher_information(model, theta_prime)
    scale = 4.0 * model.amp ** 2 * math.exp(2.0 * model.squeeze)
    if info < FISHER_ABS_THRESHOLD or info < FISHER_REL_THRESHOLD * scale:
        return None
    return 1.0 / math.sqrt(n * info)


def circular_dispersion(dist: PhaseDistribution) -> float:
    """``sqrt(1 - |<e^{i phi}>|^2)`` with the average taken over the distribution's own interval."""
    dist.check_normalized()
    w = dist.grid.weights * dist.density
    phi = dist.phi
    c = float(np.dot(w, np.cos(phi)))
    s = float(np.dot(w, np.sin(phi)))
    centre = math.atan2(s, c)
    # 1 - |m| = sum w (1 - cos(phi - centre)) + (1 - sum w); the sine form avoids cancellation
    one_minus = float(np.dot(w, 2.0 * np.sin(0.5 * (phi - centre)) ** 2)) + (1.0 - float(np.sum(w)))
    one_minus = min(max(one_minus, 0.0), 1.0)
    return math.sqrt(min(1.0, one_minus * (2.0 - one_minus)))


def _local_maxima(logd: np.ndarray, periodic: bool) -> np.ndarray:
    if periodic:
        left, right = np.roll(logd, 1), np.roll(logd, -1)
        return np.flatnonzero((logd >= left) & (logd > right))
    left = np.concatenate(([-np.inf], logd[:-1]))
    right = np.concatenate((logd[1:], [-np.inf]))
    return np.flatnonzero((logd >= left) & (logd > right))


def _refine(logd: np.ndarray, k: int, grid: Grid1D) -> float:
    phi = float(grid.nodes[k])
    n = grid.count
    if grid.periodic:
        l, r = logd[(k - 1) % n], logd[(k + 1) % n]
    elif 0 < k < n - 1:
        l, r = logd[k - 1], logd[k + 1]
    else:
        return phi
    curv = l - 2.0 * logd[k] + r
    if not curv < 0.0:
        return phi
    offset = min(max(0.5 * (l - r) / curv, -0.5), 0.5)
    return phi + offset * grid.step


def _into_interval(phi: float, interval: PhaseInterval) -> float:
    if interval is PhaseInterval.FULL:
        phi = math.fmod(phi, TWO_PI)
        if phi < 0.0:
            phi += TWO_PI
        return 0.0 if phi >= TWO_PI else phi
    return min(max(phi, 0.0), math.nextafter(math.pi, 0.0))


def ml_estimate(dist: PhaseDistribution) -> EstimateReport:
    """Maximum-likelihood point estimate and resolution diagnostics.

    The grid argmax is refined by a parabola through the neighbouring log-density
    values. On the full interval a second local maximum within ``e^{-1/2}`` of the
    global one sets ``twin_peak``; the reported peak is then the one in ``[0, pi]``.
    """
    logd = dist.log_density
    periodic = dist.interval is PhaseInterval.FULL
    k = int(np.argmax(logd))
    twin = False
    if periodic:
        peaks = _local_maxima(logd, periodic=True)
        strong = peaks[logd[peaks] >= logd[k] + TWIN_LOG_RATIO]
        twin = strong.size >= 2
        if twin:
            upper = strong[dist.phi[strong] <= math.pi]
            if upper.size:
                k = int(upper[np.argmax(logd[upper])])
    phi_hat = _into_interval(_refine(logd, k, dist.grid), dist.interval)
    width = None
    if dist.model is not None and dist.n is not None:
        width = gaussian_width(dist.model, phi_hat, dist.n)
    return EstimateReport(phi_hat, circular_dispersion(dist), width, bool(twin), dist.interval)


def width_scaling_probe(model: StateModel, n, grid_count=None) -> tuple[float, float]:
    """Dispersions of half-interval posteriors at ``theta' = pi/2`` and ``theta' = 0``."""
    if not n * model.amp ** 2 >= 10:
        raise DomainError(f"n * amp**2 must be at least 10, got {n * model.amp ** 2}")
    mid = asymptotic_posterior(model, math.pi / 2, n, PhaseInterval.HALF, grid_count)
    edge = asymptotic_posterior(model, 0.0, n, PhaseInterval.HALF, grid_count)
    return circular_dispersion(mid), circular_dispersion(edge)


def total_variation(a: PhaseDistribution, b: PhaseDistribution) -> float:
    """``(1/2) int |a - b| dphi`` for two distributions on the same grid."""
    if a.grid != b.grid:
        raise DomainError("distributions must share a grid")
    return 0.5 * integrate_values(np.abs(a.density - b.density), a.grid)
