"""Fading distribution and scenario bookkeeping checks.

Distribution reference values are frozen 30-digit evaluations; the cdf/pdf
consistency checks integrate with scipy.integrate.quad directly so they do
not share a code path with the package quadrature wrapper.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from swiptsched.channel import (
    FadingParams,
    Scenario,
    cdf_gain,
    dbm_to_watt,
    normalized_cdf,
    normalized_pdf,
    pdf_gain,
    sample_gain,
    sample_gains,
    watt_to_dbm,
)

RICEAN6_CDF = {0.2: 0.022699567068568930, 1.0: 0.55443011425665135, 3.0: 0.99820495778311850}
RICEAN6_PDF = {0.2: 0.23902338887894438, 1.0: 0.75390585556269207, 3.0: 0.0062634133136926911}


def scenario4():
    users = tuple(FadingParams(omega=n * 1e-5) for n in range(1, 5))
    return Scenario(users=users, tx_power_w=1.0, noise_power_w=1e-13, eta=0.5)


def test_dbm_watt_round_trip():
    assert dbm_to_watt(0.0) == pytest.approx(1e-3, rel=1e-15)
    assert dbm_to_watt(30.0) == pytest.approx(1.0, rel=1e-15)
    assert dbm_to_watt(-96.0) == pytest.approx(10.0 ** (-12.6), rel=1e-15)
    for dbm in (-96.0, -30.0, 0.0, 17.0):
        assert watt_to_dbm(dbm_to_watt(dbm)) == pytest.approx(dbm, abs=1e-12)


def test_fading_params_validation():
    with pytest.raises(ValueError):
        FadingParams(omega=0.0)
    with pytest.raises(ValueError):
        FadingParams(omega=-1e-5)
    with pytest.raises(ValueError):
        FadingParams(omega=1e-5, k_factor=-0.5)
    with pytest.raises((ValueError, TypeError)):
        FadingParams(omega=math.nan)


def test_scenario_accessors():
    sc = scenario4()
    assert sc.n_users == 4
    assert sc.user(1).omega == pytest.approx(1e-5)
    assert sc.user(4).omega == pytest.approx(4e-5)
    assert sc.avg_snr(3) == pytest.approx(1.0 * 3e-5 / 1e-13, rel=1e-15)
    assert sc.shared_k_factor() == 0.0


def test_scenario_user_index_bounds():
    sc = scenario4()
    for bad in (0, 5, -1):
        with pytest.raises(ValueError):
            sc.user(bad)


def test_scenario_validation():
    users = (FadingParams(1e-5),)
    with pytest.raises(ValueError):
        Scenario(users=(), tx_power_w=1.0, noise_power_w=1e-13, eta=0.5)
    with pytest.raises(ValueError):
        Scenario(users=users, tx_power_w=0.0, noise_power_w=1e-13, eta=0.5)
    with pytest.raises(ValueError):
        Scenario(users=users, tx_power_w=1.0, noise_power_w=-1e-13, eta=0.5)
    with pytest.raises(ValueError):
        Scenario(users=users, tx_power_w=1.0, noise_power_w=1e-13, eta=1.2)


def test_shared_k_factor_rejects_mixed_k():
    users = (FadingParams(1e-5, 0.0), FadingParams(2e-5, 6.0))
    sc = Scenario(users=users, tx_power_w=1.0, noise_power_w=1e-13, eta=0.5)
    with pytest.raises(ValueError):
        sc.shared_k_factor()


def test_rayleigh_reduces_to_exponential():
    for x in (0.0, 0.3, 1.0, 4.0):
        assert normalized_pdf(0.0, x) == math.exp(-x)
        assert normalized_cdf(0.0, x) == pytest.approx(-math.expm1(-x), rel=1e-15)


def test_ricean_reference_values():
    for x, want in RICEAN6_CDF.items():
        assert normalized_cdf(6.0, x) == pytest.approx(want, rel=5e-13)
    for x, want in RICEAN6_PDF.items():
        assert normalized_pdf(6.0, x) == pytest.approx(want, rel=1e-13)


def test_distribution_edges():
    for k in (0.0, 2.0, 6.0):
        assert normalized_cdf(k, 0.0) == 0.0
        assert 0.999 < normalized_cdf(k, 60.0) <= 1.0


def test_pdf_survives_large_k_and_x():
    # the naive e^(-K) I0(2 sqrt(K(K+1) x)) product overflows long before
    # this; the scaled evaluation must not
    v = normalized_pdf(500.0, 1.0)
    assert math.isfinite(v) and v > 1.0
    assert normalized_pdf(500.0, 700.0) == 0.0 or normalized_pdf(500.0, 700.0) < 1e-300


def test_gain_functions_scale_by_omega():
    params = FadingParams(omega=3e-5, k_factor=6.0)
    for h in (1e-6, 3e-5, 9e-5):
        x = h / params.omega
        assert pdf_gain(params, h) == pytest.approx(
            normalized_pdf(6.0, x) / params.omega, rel=1e-14
        )
        assert cdf_gain(params, h) == pytest.approx(
            normalized_cdf(6.0, x), rel=1e-14
        )


@pytest.mark.parametrize("k", [0.0, 1.0, 6.0, 15.0])
def test_pdf_integrates_to_one(k):
    total, err = quad(lambda x: normalized_pdf(k, x), 0.0, 60.0, limit=200)
    assert abs(total - 1.0) <= max(1e-9, 10.0 * err)


@pytest.mark.parametrize("k", [0.0, 6.0])
def test_cdf_matches_pdf_integral(k):
    for upper in (0.4, 1.0, 2.5):
        total, err = quad(lambda x: normalized_pdf(k, x), 0.0, upper, limit=200)
        assert normalized_cdf(k, upper) == pytest.approx(total, abs=max(1e-10, 10 * err))


def test_pdf_mean_is_one():
    for k in (0.0, 6.0):
        mean, err = quad(lambda x: x * normalized_pdf(k, x), 0.0, 80.0, limit=300)
        assert mean == pytest.approx(1.0, abs=max(1e-8, 10 * err))


@pytest.mark.parametrize(
    "k,var",
    [
        (0.0, 1.0),
        # Var X = (2K + 1) / (K + 1)^2 for the unit-mean gain
        (6.0, 13.0 / 49.0),
    ],
)
def test_sampling_moments(k, var):
    params = FadingParams(omega=2e-5, k_factor=k)
    rng = np.random.default_rng(2024)
    draws = sample_gains(params, rng, 200_000)
    assert draws.shape == (200_000,)
    assert draws.min() >= 0.0
    assert draws.mean() == pytest.approx(params.omega, rel=0.01)
    assert draws.var() == pytest.approx(var * params.omega**2, rel=0.05)


def test_sampling_matches_cdf():
    params = FadingParams(omega=1.0, k_factor=6.0)
    rng = np.random.default_rng(7)
    n = 200_000
    draws = sample_gains(params, rng, n)
    for x in (0.5, 1.0, 2.0):
        p = cdf_gain(params, x)
        sigma = math.sqrt(p * (1.0 - p) / n)
        assert (draws <= x).mean() == pytest.approx(p, abs=5.0 * sigma)


def test_sample_gain_scalar_and_determinism():
    params = FadingParams(omega=1e-5, k_factor=6.0)
    a = sample_gain(params, np.random.default_rng(42))
    b = sample_gain(params, np.random.default_rng(42))
    assert isinstance(a, float)
    assert a == b
    c = sample_gains(params, np.random.default_rng(42), (2, 3))
    assert c.shape == (2, 3)
