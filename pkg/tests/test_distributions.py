"""Threshold distribution catalog: closed forms against independent oracles."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

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
    make_distribution,
)
from bentcable.errors import NonIntegrableThresholdError, ParameterDomainError

ALL_KINDS = [
    Uniform(0.3, 1.2),
    Epanechnikov(-0.5, 0.8),
    Biweight(0.1, 1.5),
    Logistic(0.4, 0.7),
    Normal(-0.2, 1.1),
    SkewNormal(0.3, 0.9, 1.8),
    SkewNormal(-0.1, 1.2, -2.5),
    NonStandardT2(0.2, 1.3),
    ExponentiatedUniform(0.5, 0.9, 2.7),
    ExponentiatedUniform(-0.3, 1.1, 1.6),
]

INTEGRABLE = ALL_KINDS  # Cauchy handled separately


def _ids(dists):
    return [f"{d.kind}" + (f"[{d.shape:g}]" if d.shape is not None else "") for d in dists]


# ---------------------------------------------------------------------------
# spot values
# ---------------------------------------------------------------------------


def test_uniform_cdf_at_center():
    assert Uniform(0.0, 1.0).cdf(0.0) == 0.5


def test_epanechnikov_cdf_at_support_edge():
    assert Epanechnikov(0.0, 1.0).cdf(1.0) == 1.0


def test_logistic_cdf_closed_form_and_quadrature():
    dist = Logistic(0.0, 1.0)
    expected = 1.0 / (1.0 + math.exp(-1.0))
    assert_allclose(dist.cdf(1.0), expected, rtol=1e-14)
    quad, _ = integrate.quad(dist.pdf, -np.inf, 1.0)
    assert_allclose(dist.cdf(1.0), quad, atol=1e-10)


def test_biweight_density_peak():
    assert_allclose(Biweight(0.0, 1.0).pdf(0.0), 15.0 / 16.0, rtol=1e-15)


def test_normal_density_peak():
    assert_allclose(Normal(0.0, 1.0).pdf(0.0), 1.0 / math.sqrt(2 * math.pi), rtol=1e-15)


def test_skew_normal_with_zero_slant_is_normal_peak():
    assert_allclose(
        SkewNormal(0.0, 1.0, 0.0).pdf(0.0), 1.0 / math.sqrt(2 * math.pi), rtol=1e-15
    )


def test_uniform_partial_expectation_at_center():
    # oracle: int_{-1}^{0} t * (1/2) dt = -1/4
    dist = Uniform(0.0, 1.0)
    assert_allclose(dist.lower_partial_expectation(0.0), -0.25, rtol=1e-15)
    quad, _ = integrate.quad(lambda t: t * dist.pdf(t), -1.0, 0.0)
    assert_allclose(quad, -0.25, atol=1e-12)


def test_normal_partial_expectation_at_center_with_mc_band():
    dist = Normal(0.0, 1.0)
    expected = -1.0 / math.sqrt(2 * math.pi)
    assert_allclose(dist.lower_partial_expectation(0.0), expected, rtol=1e-14)
    rng = np.random.default_rng(42)
    draws = rng.normal(0.0, 1.0, 10**6)
    vals = np.where(draws <= 0.0, draws, 0.0)
    se = vals.std() / 1000.0
    assert abs(vals.mean() - expected) < 3.0 * se


def test_partial_expectation_vanishes_at_infinity():
    for dist in INTEGRABLE:
        far = dist.mean() + 1e7 * dist.x_scale
        assert abs(dist.lower_partial_expectation(far)) < 1e-6
        assert abs(dist.lower_partial_expectation(-far)) < 1e-6


# ---------------------------------------------------------------------------
# catalog-wide properties
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("dist", ALL_KINDS + [Cauchy(0.2, 1.0)], ids=_ids(ALL_KINDS) + ["cauchy"])
def test_cdf_monotone_on_wide_grid(dist):
    grid = dist.location + np.linspace(-10, 10, 10_000) * dist.x_scale
    values = dist.cdf(grid)
    # non-decreasing up to one ulp of roundoff in the Owen's T tail
    assert np.all(np.diff(values) >= -1e-15)
    assert np.all((values >= 0.0) & (values <= 1.0))
    # limits at infinity (translated-t and Cauchy tails decay only like 1/x)
    assert dist.cdf(dist.location - 1e8 * dist.x_scale) <= 1e-6
    assert dist.cdf(dist.location + 1e8 * dist.x_scale) >= 1.0 - 1e-6


@pytest.mark.parametrize("dist", ALL_KINDS + [Cauchy(0.2, 1.0)], ids=_ids(ALL_KINDS) + ["cauchy"])
def test_cdf_derivative_matches_pdf(dist):
    h = 1e-5 * dist.x_scale
    grid = dist.location + np.linspace(-10, 10, 2001) * dist.x_scale
    if dist.bounded:
        lo, hi = dist.support()
        # the density may jump at the support edges; keep clear of them
        grid = grid[(np.abs(grid - lo) > 10 * h) & (np.abs(grid - hi) > 10 * h)]
    fd = (dist.cdf(grid + h) - dist.cdf(grid - h)) / (2.0 * h)
    pdf = dist.pdf(grid)
    assert_allclose(fd, pdf, rtol=1e-6, atol=1e-9 / dist.x_scale)


@pytest.mark.parametrize("dist", INTEGRABLE, ids=_ids(INTEGRABLE))
def test_pdf_integrates_to_one(dist):
    lo, hi = dist.support()
    total, _ = integrate.quad(dist.pdf, lo, hi, limit=200)
    assert_allclose(total, 1.0, atol=1e-8)


@pytest.mark.parametrize("dist", INTEGRABLE, ids=_ids(INTEGRABLE))
def test_partial_expectation_nonpositive_and_matches_quadrature(dist):
    tau = dist.mean()
    lo, _ = dist.support()
    for x in tau + np.array([-2.0, -0.5, 0.0, 0.4, 1.7]) * dist.x_scale:
        val = dist.lower_partial_expectation(x)
        assert val <= 1e-12
        quad, _ = integrate.quad(lambda t: (t - tau) * dist.pdf(t), lo, x, limit=200)
        assert_allclose(val, quad, atol=5e-9)


@pytest.mark.parametrize("dist", INTEGRABLE, ids=_ids(INTEGRABLE))
def test_partial_expectation_derivative(dist):
    # d/dx L(x) = (x - tau) f(x)
    tau = dist.mean()
    h = 1e-6 * dist.x_scale
    grid = tau + np.linspace(-0.9, 0.9, 41) * dist.x_scale
    fd = (
        dist.lower_partial_expectation(grid + h) - dist.lower_partial_expectation(grid - h)
    ) / (2.0 * h)
    target = (grid - tau) * dist.pdf(grid)
    assert_allclose(fd, target, rtol=2e-6, atol=1e-8 * dist.x_scale)


@pytest.mark.parametrize(
    "dist", [d for d in ALL_KINDS if d.bounded], ids=_ids([d for d in ALL_KINDS if d.bounded])
)
def test_bounded_support_cdf_exact_at_edges(dist):
    lo, hi = dist.support()
    assert dist.cdf(lo) == 0.0
    assert dist.cdf(hi) == 1.0


def test_mean_is_location_for_symmetric_kinds():
    for dist in (Uniform(0.7, 2.0), Logistic(0.7, 2.0), Normal(0.7, 2.0), NonStandardT2(0.7, 2.0)):
        assert dist.mean() == 0.7


def test_skew_normal_mean_matches_quadrature():
    dist = SkewNormal(0.4, 1.3, -2.1)
    quad, _ = integrate.quad(lambda t: t * dist.pdf(t), -np.inf, np.inf)
    assert_allclose(dist.mean(), quad, atol=1e-9)


def test_exponentiated_uniform_mean_matches_quadrature():
    dist = ExponentiatedUniform(0.4, 1.3, 2.6)
    lo, hi = dist.support()
    quad, _ = integrate.quad(lambda t: t * dist.pdf(t), lo, hi)
    assert_allclose(dist.mean(), quad, atol=1e-10)
    assert dist.support() == (0.4 - 1.6 * 1.3, 0.4 + 1.3)


def test_skew_normal_zero_slant_equals_normal_on_grid():
    sn = SkewNormal(0.2, 1.4, 0.0)
    norm = Normal(0.2, 1.4)
    grid = 0.2 + np.linspace(-8, 8, 401) * 1.4
    assert_allclose(sn.cdf(grid), norm.cdf(grid), atol=1e-9)
    assert_allclose(sn.pdf(grid), norm.pdf(grid), atol=1e-9)
    assert_allclose(
        sn.lower_partial_expectation(grid), norm.lower_partial_expectation(grid), atol=1e-9
    )


def test_skew_normal_closed_forms_match_quadrature():
    dist = SkewNormal(0.1, 0.8, 2.2)
    for x in (-1.5, -0.2, 0.1, 0.6, 2.0):
        cdf_quad, _ = integrate.quad(dist.pdf, -np.inf, x)
        assert_allclose(dist.cdf(x), cdf_quad, atol=1e-10)


@pytest.mark.parametrize("dist", INTEGRABLE, ids=_ids(INTEGRABLE))
def test_quantile_inverts_cdf(dist):
    for p in (0.025, 0.2, 0.5, 0.8, 0.975):
        assert_allclose(dist.cdf(dist.quantile(p)), p, atol=1e-9)


def test_normal_quantiles():
    dist = Normal(0.0, 1.0)
    assert_allclose(dist.quantile(0.975), 1.959963984540054, rtol=1e-12)
    assert_allclose(dist.quantile(0.025), -1.959963984540054, rtol=1e-12)


# ---------------------------------------------------------------------------
# parameter domain and the Cauchy counterexample
# ---------------------------------------------------------------------------


def test_invalid_scale_rejected():
    with pytest.raises(ParameterDomainError):
        Normal(0.0, -1.0)
    with pytest.raises(ParameterDomainError):
        Uniform(0.0, 0.0)


def test_exponentiated_uniform_needs_k_above_one():
    with pytest.raises(ParameterDomainError):
        ExponentiatedUniform(0.0, 1.0, 1.0)
    with pytest.raises(ParameterDomainError):
        ExponentiatedUniform(0.0, 1.0, 0.5)


def test_cauchy_rejects_expectations_but_keeps_cdf():
    dist = Cauchy(0.0, 1.0)
    assert_allclose(dist.cdf(0.0), 0.5, rtol=1e-15)
    assert dist.pdf(0.0) == pytest.approx(1.0 / math.pi)
    with pytest.raises(NonIntegrableThresholdError):
        dist.mean()
    with pytest.raises(NonIntegrableThresholdError):
        dist.lower_partial_expectation(0.0)


def test_cauchy_tail_limit_is_minus_one_over_pi():
    dist = Cauchy(0.0, 1.0)
    value = -1e6 * dist.cdf(-1e6)
    assert abs(value - (-1.0 / math.pi)) < 1e-3


def test_make_distribution_registry():
    dist = make_distribution("skew-normal", 0.1, 0.9, shape=1.5)
    assert isinstance(dist, SkewNormal) and dist.lam == 1.5
    with pytest.raises(ParameterDomainError):
        make_distribution("normal", 0.0, 1.0, shape=2.0)
    with pytest.raises(ParameterDomainError):
        make_distribution("pareto", 0.0, 1.0)
