"""Estimation: profiled OLS, grid initialisation, genetic fit, deviance."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bentcable.bends import make_family
from bentcable.errors import (
    InsufficientDataError,
    ParameterDomainError,
    SingularDesignError,
)
from bentcable.estimation import (
    Dataset,
    GAConfig,
    deviance_surface,
    design_matrix,
    fit,
    grid_init,
    loglik,
    n_free_params,
    profile_ols,
    search_box,
)
from bentcable.model import Bend, ParamVector, eta
from bentcable.montecarlo import synthetic_dataset

QUICK_GA = GAConfig(min_generations=600, max_generations=4000, stagnation_window=200, seed=11)


def _bc_dataset(n=100, sigma=0.01, seed=5, tau=1.0, zeta=0.8):
    rng = np.random.default_rng(seed)
    xs = np.sort(rng.uniform(-4.0, 6.0, n))
    params = ParamVector(1.0, 0.5, (-1.3,), (Bend(tau, zeta),), 1.0)
    fam = make_family("BC", tau, zeta)
    ys = eta(params, fam, xs) + sigma * rng.standard_normal(n)
    return Dataset(xs, ys), params, fam


# ---------------------------------------------------------------------------
# dataset
# ---------------------------------------------------------------------------


def test_dataset_validation():
    with pytest.raises(InsufficientDataError):
        Dataset(np.array([0.0, 1.0, 2.0]), np.array([0.0, 1.0, 2.0]))
    with pytest.raises(ParameterDomainError):
        Dataset(np.ones(5), np.ones(5))
    with pytest.raises(ParameterDomainError):
        Dataset(np.arange(5.0), np.array([0.0, 1.0, np.nan, 3.0, 4.0]))


def test_replicate_groups_by_exact_equality():
    data = Dataset(np.array([1.0, 2.0, 1.0, 3.0, 2.0, 2.0]), np.arange(6.0))
    groups = data.replicate_groups()
    assert [g.size for g in groups] == [2, 3, 1]
    assert sorted(data.xs[g[0]] for g in groups) == [1.0, 2.0, 3.0]


def test_fingerprint_distinguishes_data():
    a = Dataset(np.arange(5.0), np.arange(5.0))
    b = Dataset(np.arange(5.0), np.arange(5.0) + 1e-12)
    assert a.fingerprint() != b.fingerprint()
    assert a.fingerprint() == Dataset(np.arange(5.0), np.arange(5.0)).fingerprint()


# ---------------------------------------------------------------------------
# loglik
# ---------------------------------------------------------------------------


def test_loglik_perfect_fit_two_points():
    xs = np.array([0.0, 1.0, 2.0, 3.0])
    params = ParamVector(1.0, 0.5, (0.2,), (Bend(1.5, 0.3),), sigma2=1.0)
    fam = make_family("BC", 1.5, 0.3)
    ys = eta(params, fam, xs)
    data = Dataset(xs, ys)
    n = data.n
    assert loglik(data, fam, params) == pytest.approx(-0.5 * n * math.log(2 * math.pi))


def test_loglik_matches_per_point_density_product():
    rng = np.random.default_rng(2)
    xs = np.linspace(-2, 2, 12)
    params = ParamVector(0.3, -0.8, (1.4,), (Bend(0.2, 0.5),), sigma2=0.37)
    fam = make_family("BC", 0.2, 0.5)
    ys = eta(params, fam, xs) + rng.standard_normal(12)
    data = Dataset(xs, ys)

    def normal_density(y, mu, s2):
        return math.exp(-((y - mu) ** 2) / (2 * s2)) / math.sqrt(2 * math.pi * s2)

    oracle = sum(
        math.log(normal_density(y, eta(params, fam, x), params.sigma2))
        for x, y in zip(xs, ys)
    )
    assert loglik(data, fam, params) == pytest.approx(oracle, rel=1e-12)


# ---------------------------------------------------------------------------
# profiled OLS
# ---------------------------------------------------------------------------


def test_profile_ols_noiseless_recovery():
    data, params, fam = _bc_dataset(sigma=0.0)
    prof = profile_ols(data, fam, params.bends)
    assert_allclose(prof.coeffs, [1.0, 0.5, -1.3], atol=1e-10)
    assert prof.sigma2 < 1e-12


def test_profile_ols_degenerate_bend_column():
    data, _, fam = _bc_dataset()
    # bend entirely below the data range: its ramp column equals x - tau,
    # collinear with the intercept and slope columns
    with pytest.raises(SingularDesignError):
        profile_ols(data, fam, (Bend(-10.0, 0.5),))


def test_profile_ols_against_zooming_grid_oracle():
    rng = np.random.default_rng(9)
    xs = np.array([-2.0, -1.0, 0.0, 1.0, 2.0, 3.0])
    fam = make_family("BC", 0.5, 0.7)
    params = ParamVector(0.4, -0.6, (1.1,), (Bend(0.5, 0.7),), 1.0)
    ys = eta(params, fam, xs) + 0.3 * rng.standard_normal(6)
    data = Dataset(xs, ys)
    prof = profile_ols(data, fam, params.bends)

    # independent oracle: zooming dense grid over (alpha, beta, delta)
    col = fam.smooth_max(xs)
    center = np.zeros(3)
    width = 8.0
    best = None
    for _ in range(10):
        axes = [np.linspace(c - width, c + width, 21) for c in center]
        aa, bb, dd = np.meshgrid(*axes, indexing="ij")
        resid = (
            ys[None, None, None, :]
            - aa[..., None]
            - bb[..., None] * xs[None, None, None, :]
            - dd[..., None] * col[None, None, None, :]
        )
        rss = np.sum(resid**2, axis=-1)
        idx = np.unravel_index(np.argmin(rss), rss.shape)
        center = np.array([aa[idx], bb[idx], dd[idx]])
        width /= 5.0
    assert_allclose(prof.coeffs, center, atol=1e-4)


def test_profile_ols_beats_random_perturbations():
    data, params, fam = _bc_dataset(sigma=0.3, seed=8)
    prof = profile_ols(data, fam, params.bends)
    rng = np.random.default_rng(1)
    design = design_matrix(data, fam, params.bends)
    for _ in range(50):
        other = prof.coeffs + 0.01 * rng.standard_normal(3)
        rss_other = float(np.sum((data.ys - design @ other) ** 2))
        assert prof.sigma2 * data.n <= rss_other + 1e-12


def test_profile_ols_residuals_orthogonal_to_design():
    data, params, fam = _bc_dataset(sigma=0.25, seed=3)
    prof = profile_ols(data, fam, params.bends)
    design = design_matrix(data, fam, params.bends)
    resid = data.ys - design @ prof.coeffs
    assert np.max(np.abs(design.T @ resid)) < 1e-8 * data.n


# ---------------------------------------------------------------------------
# grid initialisation and search box
# ---------------------------------------------------------------------------


def test_grid_init_finds_sharp_kink():
    rng = np.random.default_rng(4)
    xs = np.linspace(0.0, 10.0, 120)
    params = ParamVector(1.0, 0.2, (1.9,), (Bend(3.0, 0.05),), 1.0)
    fam = make_family("BC", 3.0, 0.05)
    ys = eta(params, fam, xs) + 0.01 * rng.standard_normal(xs.size)
    init = grid_init(Dataset(xs, ys), fam)
    grid_step = 10.0 / 99.0
    assert abs(init.bends[0].location - 3.0) <= grid_step + 1e-9


def test_grid_init_tie_broken_by_lowest_index():
    # constant response: every well-conditioned candidate attains the same
    # (perfect) likelihood, so the first one wins
    xs = np.linspace(0.0, 10.0, 40)
    ys = np.full(40, 2.5)
    init = grid_init(Dataset(xs, ys), make_family("BC"))
    expected = next(
        t
        for t in np.linspace(0.0, 10.0, 100)
        if np.linalg.cond(np.column_stack([np.ones(40), xs, np.maximum(xs - t, 0.0)]))
        <= 1e12
    )
    assert init.bends[0].location == pytest.approx(expected)


def test_grid_init_scale_is_half_percent_of_range():
    xs = np.linspace(0.0, 10.0, 50)
    ys = np.abs(xs - 4.0)
    init = grid_init(Dataset(xs, ys), make_family("BC"))
    assert init.bends[0].scale == pytest.approx(0.05)


def test_search_box_follows_protocol():
    data, _, fam = _bc_dataset()
    init = grid_init(data, fam)
    box = search_box(data, fam, init)
    span = data.x_range
    tau0 = init.bends[0].location
    assert box.location == pytest.approx((tau0 - 0.2 * span, tau0 + 0.2 * span))
    assert box.scale == pytest.approx((0.005 * span, 0.2 * span))
    assert box.shape is None
    # linear boxes are +-5.2 |c| with a floor for coefficients near zero
    for (lo, hi), c in zip(box.linear, (init.alpha1, init.beta1, init.deltas[0])):
        width = max(abs(c), 0.1 * float(np.ptp(data.ys))) * 5.2
        assert (lo, hi) == pytest.approx((c - width, c + width))


def test_search_box_shape_bounds():
    data, _, _ = _bc_dataset()
    sn = make_family("SN-BC")
    box = search_box(data, sn, grid_init(data, sn))
    assert box.shape == (-30.0, 30.0)


# ---------------------------------------------------------------------------
# genetic fit
# ---------------------------------------------------------------------------


def test_fit_recovers_bend_parameters_within_two_percent():
    data, params, fam = _bc_dataset(n=100, sigma=0.01, seed=5)
    result = fit(data, fam, QUICK_GA)
    assert result.params.bends[0].location == pytest.approx(1.0, rel=0.02, abs=0.02)
    assert result.params.bends[0].scale == pytest.approx(0.8, rel=0.02)


def test_fit_noiseless_rss_vanishes():
    data, params, fam = _bc_dataset(n=60, sigma=0.0, seed=6)
    result = fit(data, fam, QUICK_GA)
    rss = result.params.sigma2 * data.n
    assert rss < 1e-10


def test_fit_is_deterministic_given_seed():
    data, _, fam = _bc_dataset(n=50, sigma=0.05, seed=7)
    cfg = GAConfig(min_generations=300, max_generations=2000, stagnation_window=150, seed=123)
    a = fit(data, fam, cfg)
    b = fit(data, fam, cfg)
    assert a.loglik == b.loglik
    assert a.params == b.params
    assert np.array_equal(a.trace, b.trace)


def test_fit_trace_is_monotone_and_beats_refined_init():
    data, _, fam = _bc_dataset(n=80, sigma=0.05, seed=10)
    result = fit(data, fam, QUICK_GA)
    assert np.all(np.diff(result.trace) >= 0.0)
    init = grid_init(data, fam)
    refined = profile_ols(data, fam, init.bends)
    assert result.loglik >= refined.loglik - 1e-12


def test_fit_aic_identity():
    data, _, fam = _bc_dataset(n=50, sigma=0.05, seed=12)
    result = fit(data, fam, QUICK_GA)
    assert result.aic == pytest.approx(2 * result.n_free_params - 2 * result.loglik, rel=1e-12)
    assert result.n_free_params == 6  # alpha, beta, delta, tau, zeta, sigma2
    assert n_free_params(make_family("SN-BC")) == 7


def test_fit_insufficient_data_rejected():
    xs = np.linspace(0, 1, 5)
    data = Dataset(xs, xs**2)
    with pytest.raises(InsufficientDataError):
        fit(data, make_family("BC"), QUICK_GA)


def test_ga_config_validation():
    with pytest.raises(ParameterDomainError):
        GAConfig(population=5)
    with pytest.raises(ParameterDomainError):
        GAConfig(crossover_rate=1.5)
    with pytest.raises(ParameterDomainError):
        GAConfig(min_generations=100, max_generations=50)


def test_loglik_continuous_across_zone_edge_lines():
    # profiled loglik in (tau, zeta) straddling x_i = tau +- zeta lines
    data, params, fam = _bc_dataset(n=40, sigma=0.1, seed=13)
    x_i = data.xs[17]
    zeta = 0.6
    eps = np.array([1e-4, 1e-5, 1e-6, 1e-7])
    base = profile_ols(data, fam, (Bend(x_i - zeta, zeta),)).loglik
    gaps = []
    for e in eps:
        left = profile_ols(data, fam, (Bend(x_i - zeta - e, zeta),)).loglik
        right = profile_ols(data, fam, (Bend(x_i - zeta + e, zeta),)).loglik
        gaps.append(max(abs(left - base), abs(right - base)))
    gaps = np.array(gaps)
    # differences shrink proportionally with the step
    assert np.all(gaps[1:] <= gaps[:-1] + 1e-12)
    assert gaps[-1] < 1e-5


# ---------------------------------------------------------------------------
# deviance surface
# ---------------------------------------------------------------------------


def test_deviance_surface_properties():
    data, params, fam = _bc_dataset(n=80, sigma=0.05, seed=21)
    result = fit(data, fam, QUICK_GA)
    surface = deviance_surface(data, fam, result, grid=(40, 40))
    assert surface.deviance.shape == (40, 40)
    finite = surface.deviance[np.isfinite(surface.deviance)]
    assert finite.size == 1600  # no singular nodes on this box
    assert np.all(finite <= 1e-8)
    i, j, _ = surface.max_node()
    # the best node hugs the optimum within one grid cell
    loc_step = surface.locations[1] - surface.locations[0]
    sc_step = surface.scales[1] - surface.scales[0]
    loc_hat, sc_hat = surface.optimum
    assert abs(surface.locations[i] - loc_hat) <= loc_step + 1e-12
    assert abs(surface.scales[j] - sc_hat) <= sc_step + 1e-12

    # a grid whose centre node sits exactly at the optimum scores ~0 there
    centered = deviance_surface(
        data,
        fam,
        result,
        grid=(41, 41),
        box=((loc_hat - 0.1, loc_hat + 0.1), (sc_hat - 0.05, sc_hat + 0.05)),
    )
    _, _, top = centered.max_node()
    assert -1e-6 < top <= 1e-8


def test_deviance_surface_marks_singular_nodes_missing():
    data, params, fam = _bc_dataset(n=80, sigma=0.05, seed=22)
    result = fit(data, fam, QUICK_GA)
    box = ((data.xs.min() - 20.0, data.xs.max() + 20.0), (0.01, 0.5))
    surface = deviance_surface(data, fam, result, grid=(10, 4), box=box)
    assert np.isnan(surface.deviance).any()
    finite = surface.deviance[np.isfinite(surface.deviance)]
    assert np.all(finite <= 1e-8)
