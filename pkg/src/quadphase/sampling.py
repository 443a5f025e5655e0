"""Synthetic homodyne records and their empirical statistics.

Records are generated from a Philox counter-based generator seeded with a 64-bit
integer. Each raw 64-bit output keeps its top 53 bits as a uniform in (0, 1)
(offset by half an ulp so 0 and 1 never occur), which is pushed through the
Gaussian inverse CDF. Both steps are fixed, so a (model, theta', n, seed) tuple
reproduces the same record on any platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import ndtri

from .exceptions import DomainError
from .states import StateModel, quadrature_density

__all__ = ["SampleParseError", "SampleSet", "draw_samples", "sample_moments", "uniform_stream", "read_samples", "write_samples"]

_SEED_MAX = 2**64 - 1


class SampleParseError(DomainError):
    """A sample CSV file is malformed; the message names the offending line."""


def uniform_stream(seed: int, n: int) -> np.ndarray:
    """``n`` uniforms in the open interval (0, 1) from a Philox stream."""
    bits = np.random.Philox(seed).random_raw(n)
    return ((bits >> np.uint64(11)).astype(float) + 0.5) * 2.0**-53


@dataclass(frozen=True)
class SampleSet:
    """A measurement record x_1..x_n taken at one hidden phase difference.

    ``true_theta_prime`` is kept for evaluation only; inference functions
    take ``values`` and never see it.
    """

    values: np.ndarray
    true_theta_prime: float
    seed: int
    amp: float = math.nan
    squeeze: float = math.nan
    n: int = field(init=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise DomainError("a sample set needs at least one value")
        if not np.all(np.isfinite(v)):
            raise DomainError("sample values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "n", int(v.size))

    def header(self) -> str:
        return (
            f"# amp={self.amp!r},squeeze={self.squeeze!r},"
            f"theta_prime={self.true_theta_prime!r},seed={self.seed},n={self.n}"
        )

    def to_csv(self, path) -> None:
        write_samples(self, path)


def draw_samples(model: StateModel, theta_prime: float, n: int, seed: int) -> SampleSet:
    """Draw ``n`` independent quadrature outcomes at phase difference ``theta_prime``."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if int(seed) != seed or not 0 <= seed <= _SEED_MAX:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    dens = quadrature_density(model, theta_prime)
    x = dens.mean + dens.std * ndtri(uniform_stream(int(seed), int(n)))
    return SampleSet(x, float(theta_prime), int(seed), model.amp, model.squeeze)


def sample_moments(samples) -> tuple[float, float]:
    """Arithmetic mean and unbiased standard deviation of a record.

    Accepts a :class:`SampleSet` or a plain sequence of values.
    """
    v = np.asarray(samples.values if isinstance(samples, SampleSet) else samples, dtype=float)
    if v.size < 2:
        raise DomainError("standard deviation needs at least two samples")
    return float(np.mean(v)), float(np.std(v, ddof=1))


def write_samples(samples: SampleSet, path) -> None:
    lines = [samples.header()]
    lines.extend(f"{x:.17g}" for x in samples.values)
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def _parse_header(line: str) -> dict[str, str]:
    body = line.lstrip("#").strip()
    out = {}
    for item in body.split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise SampleParseError(f"line 1: malformed header entry {item!r}")
        out[key.strip()] = value.strip()
    return out


def read_samples(path) -> SampleSet:
    """Load a record written by :func:`write_samples`.

    Raises
    ------
    DomainError
        If the header or a value line does not parse; the message names the line.
    """
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise SampleParseError("line 1: expected '# amp=...,squeeze=...,theta_prime=...,seed=...,n=...' header")
    meta = _parse_header(lines[0])
    values = []
    for lineno, line in enumerate(lines[1:], start=2):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            x = float(s)
        except ValueError:
            raise SampleParseError(f"line {lineno}: cannot parse {s!r} as a number") from None
        if not math.isfinite(x):
            raise SampleParseError(f"line {lineno}: non-finite value {s!r}")
        values.append(x)
    if not values:
        raise SampleParseError("no sample values found")
    try:
        n_declared = int(meta.get("n", len(values)))
        samples = SampleSet(
            np.array(values),
            float(meta.get("theta_prime", "nan")),
            int(meta.get("seed", 0)),
            float(meta.get("amp", "nan")),
            float(meta.get("squeeze", "nan")),
        )
    except ValueError as exc:
        raise SampleParseError(f"line 1: bad header value ({exc})") from None
    if n_declared != samples.n:
        raise SampleParseError(f"header declares n={n_declared} but {samples.n} values were read")
    return samples
