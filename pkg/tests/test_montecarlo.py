"""Sampling, mixture simulation, and the verification harness."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bentcable.bends import expbc_family, make_family, smm_family
from bentcable.distributions import (
    Biweight,
    Cauchy,
    Epanechnikov,
    ExponentiatedUniform,
    Logistic,
    Normal,
    NonStandardT2,
    SkewNormal,
    Uniform,
)
from bentcable.errors import NonIntegrableThresholdError
from bentcable.model import Bend, ParamVector, eta
from bentcable.montecarlo import (
    SimSpec,
    sample_threshold,
    simulate_mixture,
    synthetic_dataset,
    verify_conditions,
    verify_expected_max,
    verify_expected_modulus,
    verify_route_equivalences,
)

SAMPLED = [
    Uniform(0.3, 1.2),
    Epanechnikov(-0.5, 0.8),
    Biweight(0.1, 1.5),
    Logistic(0.4, 0.7),
    Normal(-0.2, 1.1),
    SkewNormal(0.3, 0.9, 1.8),
    SkewNormal(0.0, 1.0, -2.5),
    NonStandardT2(0.2, 1.3),
    ExponentiatedUniform(0.5, 0.9, 2.7),
    Cauchy(0.0, 1.0),
]


def _ks_distance(draws, dist):
    draws = np.sort(draws)
    n = draws.size
    cdf = dist.cdf(draws)
    upper = np.max(np.abs(np.arange(1, n + 1) / n - cdf))
    lower = np.max(np.abs(np.arange(0, n) / n - cdf))
    return max(upper, lower)


@pytest.mark.parametrize("dist", SAMPLED, ids=[d.kind + str(i) for i, d in enumerate(SAMPLED)])
def test_sampler_matches_cdf_by_ks(dist):
    n = 100_000
    draws = sample_threshold(dist, n, seed=101)
    assert _ks_distance(draws, dist) < 1.63 / math.sqrt(n)


def test_uniform_sample_mean_within_clt_band():
    n = 100_000
    draws = sample_threshold(Uniform(0.0, 1.0), n, seed=3)
    band = 3.0 * (2.0 / math.sqrt(12.0)) / math.sqrt(n)
    assert abs(draws.mean()) < band


def test_skew_normal_zero_slant_sampler_is_normal():
    n = 10_000
    draws = sample_threshold(SkewNormal(0.0, 1.0, 0.0), n, seed=17)
    assert _ks_distance(draws, Normal(0.0, 1.0)) < 1.63 / math.sqrt(n)


def test_epanechnikov_samples_stay_in_support():
    dist = Epanechnikov(0.2, 0.7)
    draws = sample_threshold(dist, 50_000, seed=23)
    lo, hi = dist.support()
    assert draws.min() >= lo and draws.max() <= hi


def test_sampler_is_deterministic():
    a = sample_threshold(Normal(0.0, 1.0), 100, seed=9)
    b = sample_threshold(Normal(0.0, 1.0), 100, seed=9)
    assert np.array_equal(a, b)


# ---------------------------------------------------------------------------
# mixture simulation
# ---------------------------------------------------------------------------


def _two_phase(bend_location=0.0, bend_scale=1.0):
    params = ParamVector(0.5, 0.8, (-1.7,), (Bend(bend_location, bend_scale),), 1.0)
    fam = smm_family(Uniform(bend_location, bend_scale))
    return params, fam


def test_mixture_below_support_follows_first_phase_exactly():
    params, fam = _two_phase()
    xs = np.array([-5.0, -3.0, -2.0, -1.5])
    data = simulate_mixture(SimSpec(fam, params, xs, m_subunits=500, seed=1))
    assert_allclose(data.ys, params.alpha1 + params.beta1 * xs, rtol=0, atol=1e-14)


def test_mixture_at_change_point_splits_phases_evenly():
    params, fam = _two_phase()
    m = 100_000
    xs = np.array([-3.0, -2.0, 0.0, 3.0])
    data = simulate_mixture(SimSpec(fam, params, xs, m_subunits=m, seed=2))
    # at tau the switched fraction is Binomial(m, 1/2); the bend term is
    # (x - tau) * fraction = 0, so the mean equals the phase average exactly,
    # which is also the midpoint (g_l(tau) + g_{l+1}(tau)) / 2
    assert data.ys[2] == pytest.approx(params.alpha1, abs=1e-12)


def test_mixture_midzone_matches_curve_within_binomial_band():
    params, fam = _two_phase()
    m = 100_000
    xs = np.linspace(-0.9, 0.9, 13)
    data = simulate_mixture(SimSpec(fam, params, xs, m_subunits=m, seed=4))
    curve = eta(params, fam, xs)
    frac = fam.dist.cdf(xs)
    se = np.abs(params.deltas[0] * xs) * np.sqrt(frac * (1 - frac) / m)
    assert np.all(np.abs(data.ys - curve) <= 4.0 * se + 1e-12)


def test_mixture_noise_and_determinism():
    params, fam = _two_phase()
    spec = SimSpec(fam, params, np.linspace(-2, 2, 9), m_subunits=100, noise_sd=0.3, seed=8)
    a = simulate_mixture(spec)
    b = simulate_mixture(spec)
    assert np.array_equal(a.ys, b.ys)


def test_synthetic_dataset_zero_noise_is_exact_curve():
    fam = make_family("N-BC", 0.0, 1.0)
    params = ParamVector(1.0, -0.5, (2.0,), (Bend(0.0, 1.0),), 1.0)
    xs = np.linspace(-3, 3, 21)
    data = synthetic_dataset(fam, params, xs, noise_sd=0.0)
    assert_allclose(data.ys, eta(params, fam, xs), rtol=1e-14)


# ---------------------------------------------------------------------------
# expectation checks
# ---------------------------------------------------------------------------


def test_expected_max_uniform_at_change_point():
    check = verify_expected_max(Uniform(0.0, 1.0), n_draws=200_000, seed=5)
    assert check.passed
    fam = expbc_family(Uniform(0.0, 1.0))
    assert fam.smooth_max(0.0) == pytest.approx(0.25)


def test_expected_max_logistic_softplus_value():
    check = verify_expected_max(Logistic(0.0, 1.0), n_draws=200_000, seed=6)
    assert check.passed
    fam = expbc_family(Logistic(0.0, 1.0))
    assert fam.smooth_max(0.0) == pytest.approx(math.log(2.0))


def test_expected_max_far_field_asymptote():
    fam = expbc_family(Normal(0.0, 1.0))
    x = 50.0
    assert fam.smooth_max(x) == pytest.approx(x, rel=1e-12)


def test_expected_max_rejects_cauchy():
    with pytest.raises(NonIntegrableThresholdError):
        verify_expected_max(Cauchy(0.0, 1.0), n_draws=100)


def test_expected_modulus_normal_half_normal_oracle():
    check = verify_expected_modulus(Normal(0.0, 1.0), n_draws=200_000, seed=7)
    assert check.passed
    dist = Normal(0.0, 1.0)
    closed = 0.0 - 2.0 * dist.lower_partial_expectation(0.0)
    assert closed == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-12)


def test_expected_modulus_symmetric_value_is_twice_partial_expectation():
    dist = Epanechnikov(0.0, 1.0)
    closed = -2.0 * dist.lower_partial_expectation(0.0)
    check = verify_expected_modulus(dist, np.array([0.0]), n_draws=200_000, seed=8)
    assert check.passed
    assert closed == pytest.approx(2.0 * 3.0 / 16.0)


# ---------------------------------------------------------------------------
# condition reports
# ---------------------------------------------------------------------------


def test_tanh_satisfies_all_transitional_conditions():
    report = verify_conditions(make_family("Tanh", 0.0, 1.0))
    assert all(c.passed for c in report.checks)
    assert report.ok


def test_hyp_satisfies_hyperbolic_conditions_and_fails_finiteness():
    report = verify_conditions(make_family("Hyp", 0.0, 1.0))
    by_name = {c.name: c for c in report.checks}
    divergence = next(c for name, c in by_name.items() if "(h.2)" in name)
    assert divergence.passed  # diverging means condition (iii) fails, as required
    assert report.ok
    assert all(c.passed for c in report.checks)


def test_cauchy_mixture_fails_reattachment_with_pi_residual():
    fam = smm_family(Cauchy(0.0, 1.0), allow_nonintegrable=True)
    report = verify_conditions(fam)
    reattach = next(c for c in report.checks if "(i)" in c.name)
    assert not reattach.passed
    assert not reattach.expect_pass
    assert abs(reattach.residual - 1.0 / math.pi) < 1e-3
    assert report.ok  # the failure is the expected outcome


def test_lch_expected_failures_are_marked():
    report = verify_conditions(make_family("Lch", 0.0, 1.0))
    assert report.ok
    failed = [c for c in report.checks if not c.passed]
    assert failed and all(not c.expect_pass for c in failed)
    reattach = next(c for c in report.checks if "(h.1/i)" in c.name)
    assert reattach.residual == pytest.approx(0.5 * math.log(2.0), rel=1e-6)


def test_route_equivalence_suite_passes():
    report = verify_route_equivalences()
    assert report.ok and all(c.passed for c in report.checks)
    assert len(report.checks) == 8
