"""Quantile correctness, monotonicity, range, and mixed-mode determinism."""

import numpy as np
import pytest
from scipy import special

from disco.distributions import (
    SETTINGS,
    InputDistribution,
    quantile,
    resolve_mixed,
    setting_from_index,
    transform,
)
from disco.sampling import SamplerKind, SamplerMethod, generate


def _beta_quantile_bisect(a, b, u, tol=1e-12):
    """Independent inversion: bisection on the regularized incomplete beta."""
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if special.betainc(a, b, mid) < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_uniform_identity():
    assert quantile(setting_from_index(1), 0.3) == pytest.approx(0.3, abs=1e-15)


def test_beta_2_8_median():
    dist = setting_from_index(4)
    assert (dist.p1, dist.p2) == (2.0, 8.0)
    got = quantile(dist, 0.5)
    assert got == pytest.approx(0.1796, abs=5e-5)
    assert got == pytest.approx(_beta_quantile_bisect(2.0, 8.0, 0.5), abs=1e-9)


@pytest.mark.parametrize("a,b", [(8.0, 2.0), (2.0, 8.0), (2.0, 0.8), (0.8, 2.0)])
@pytest.mark.parametrize("u", [0.01, 0.25, 0.5, 0.9, 0.999])
def test_beta_quantiles_match_bisection(a, b, u):
    got = quantile(InputDistribution("beta", a, b), u)
    assert got == pytest.approx(_beta_quantile_bisect(a, b, u), abs=1e-9)


def test_logitnormal_median_is_half():
    assert quantile(setting_from_index(7), 0.5) == pytest.approx(0.5, abs=1e-12)


def test_normal_median_is_center():
    assert quantile(setting_from_index(2), 0.5) == pytest.approx(0.5, abs=1e-12)


def test_normal_quantile_level():
    # 0.5 + 0.15 * z_{0.975}; well inside [0, 1] so the clamp is inactive
    z = special.ndtri(0.975)
    assert quantile(setting_from_index(2), 0.975) == pytest.approx(
        0.5 + 0.15 * z, abs=1e-9
    )


@pytest.mark.parametrize("idx", range(1, 8))
def test_quantile_monotone_and_in_unit_interval(idx):
    dist = setting_from_index(idx)
    u = np.linspace(0.0, 1.0, 513)
    v = quantile(dist, u)
    assert np.isfinite(v).all()
    assert (np.diff(v) >= -1e-12).all()
    assert ((v >= 0.0) & (v <= 1.0)).all()


def test_boundaries_stay_finite():
    for idx in range(1, 8):
        dist = setting_from_index(idx)
        assert np.isfinite(quantile(dist, 0.0))
        assert np.isfinite(quantile(dist, 1.0))


def test_guard_rejects_out_of_range():
    with pytest.raises(ValueError):
        quantile(setting_from_index(1), -0.01)
    with pytest.raises(ValueError):
        quantile(setting_from_index(3), 1.01)
    with pytest.raises(ValueError):
        quantile(setting_from_index(2), float("nan"))


def test_mixed_requires_resolution():
    with pytest.raises(ValueError):
        quantile(setting_from_index(8), 0.5)


def test_transform_uniform_is_identity():
    m = np.random.default_rng(0).random((7, 3))
    out = transform(m, setting_from_index(1))
    assert np.array_equal(out, m)
    assert out is not m


def test_transform_normal_center():
    out = transform(np.full((1, 2), 0.5), setting_from_index(2))
    assert out == pytest.approx(np.full((1, 2), 0.5), abs=1e-12)


def test_beta_8_2_mean_via_sobol():
    # Beta(8, 2) has mean 0.8; a 10^4-point quasi-random column should land close.
    u = generate(SamplerKind(SamplerMethod.SOBOL, seed=0), 10_000, 1)
    v = transform(u, setting_from_index(3))
    assert v.mean() == pytest.approx(0.8, abs=0.01)


def test_mixed_deterministic_per_column():
    m = np.random.default_rng(1).random((50, 4))
    a = transform(m, setting_from_index(8), seed=7)
    b = transform(m, setting_from_index(8), seed=7)
    assert np.array_equal(a, b)
    c = transform(m, setting_from_index(8), seed=8)
    assert not np.array_equal(a, c)
    for col in range(4):
        assert resolve_mixed(7, col) == resolve_mixed(7, col)
        assert resolve_mixed(7, col).family != "mixed"


def test_mixed_range():
    m = np.random.default_rng(2).random((200, 6))
    out = transform(m, setting_from_index(8), seed=3)
    assert ((out >= 0.0) & (out <= 1.0)).all()


def test_setting_index_validation():
    with pytest.raises(ValueError):
        setting_from_index(0)
    with pytest.raises(ValueError):
        setting_from_index(9)
    assert len(SETTINGS) == 8


def test_distribution_parameter_validation():
    with pytest.raises(ValueError):
        InputDistribution("beta", 0.0, 1.0)
    with pytest.raises(ValueError):
        InputDistribution("normal", 0.5, 0.0)
    with pytest.raises(ValueError):
        InputDistribution("gamma", 1.0, 1.0)
