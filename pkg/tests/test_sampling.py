import math

import numpy as np
import pytest
from scipy.special import ndtr

from quadphase.exceptions import DomainError
from quadphase.sampling import SampleParseError, SampleSet, draw_samples, read_samples, sample_moments
from quadphase.states import StateModel


def test_highly_squeezed_vacuum_is_tight():
    s = draw_samples(StateModel(amp=0.0, squeeze=10.0), 0.0, 5, seed=3)
    # std = e^-10 / sqrt(2) ~ 3.2e-5, so 0.001 is ~30 sigma
    assert np.all(np.abs(s.values) < 1e-3)


def test_clt_mean():
    n = 10_000
    s = draw_samples(StateModel(amp=3.0), 0.0, n, seed=5)
    assert abs(np.mean(s.values) - math.sqrt(2) * 3.0) < 5 * (1 / math.sqrt(2)) / math.sqrt(n)


def test_same_seed_same_record():
    m = StateModel(amp=1.2, squeeze=0.3)
    a = draw_samples(m, 0.9, 500, seed=42)
    b = draw_samples(m, 0.9, 500, seed=42)
    assert np.array_equal(a.values, b.values)
    c = draw_samples(m, 0.9, 500, seed=43)
    assert not np.array_equal(a.values, c.values)


def test_prefix_stability():
    # a longer record extends a shorter one drawn with the same seed
    m = StateModel(amp=1.0)
    short = draw_samples(m, 1.0, 100, seed=9).values
    long = draw_samples(m, 1.0, 1000, seed=9).values
    assert np.array_equal(short, long[:100])


def test_draw_samples_domain():
    with pytest.raises(DomainError):
        draw_samples(StateModel(), 0.0, 0, seed=1)
    with pytest.raises(DomainError):
        draw_samples(StateModel(), 0.0, 10, seed=-1)


@pytest.mark.parametrize(
    "values, expected",
    [([1, 1, 1], (1.0, 0.0)), ([0, 2], (1.0, math.sqrt(2))), ([-1, 0, 1], (0.0, 1.0))],
)
def test_sample_moments(values, expected):
    mean, std = sample_moments(values)
    assert mean == pytest.approx(expected[0], abs=1e-15)
    assert std == pytest.approx(expected[1], abs=1e-15)


def test_sample_moments_needs_two():
    with pytest.raises(DomainError):
        sample_moments([1.0])


def test_ks_statistic_below_critical_value():
    n = 100_000
    model = StateModel(amp=1.0)
    crit = 1.63 / math.sqrt(n)
    ecdf_hi = np.arange(1, n + 1) / n
    ecdf_lo = np.arange(0, n) / n
    passed = 0
    for seed in range(100):
        x = np.sort(draw_samples(model, 1.0, n, seed).values)
        cdf = ndtr((x - math.sqrt(2) * math.cos(1.0)) * math.sqrt(2))
        d = max(np.max(ecdf_hi - cdf), np.max(cdf - ecdf_lo))
        passed += d < crit
    assert passed >= 95


def test_csv_round_trip(tmp_path):
    s = draw_samples(StateModel(amp=1.5, squeeze=0.2), 1.1, 50, seed=2)
    path = tmp_path / "rec.csv"
    s.to_csv(path)
    text = path.read_text()
    assert text.splitlines()[0] == "# amp=1.5,squeeze=0.2,theta_prime=1.1,seed=2,n=50"
    assert "\r" not in text
    back = read_samples(path)
    assert np.array_equal(back.values, s.values)
    assert (back.n, back.seed, back.true_theta_prime) == (50, 2, 1.1)


def test_csv_parse_errors_name_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("# amp=1,squeeze=0,theta_prime=0,seed=0,n=3\n0.1\nabc\n0.3\n")
    with pytest.raises(SampleParseError, match="line 3"):
        read_samples(path)
    path.write_text("0.1\n0.2\n")
    with pytest.raises(SampleParseError, match="line 1"):
        read_samples(path)
    path.write_text("# amp=1,squeeze=0,theta_prime=0,seed=0,n=5\n0.1\n")
    with pytest.raises(SampleParseError, match="n=5"):
        read_samples(path)


def test_sample_set_immutable():
    s = SampleSet([1.0, 2.0], 0.0, 0)
    with pytest.raises(ValueError):
        s.values[0] = 3.0
    with pytest.raises(DomainError):
        SampleSet([], 0.0, 0)
    with pytest.raises(DomainError):
        SampleSet([1.0, math.nan], 0.0, 0)
