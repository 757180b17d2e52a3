"""Maximum-likelihood fitting of smooth piecewise-linear models.

The likelihood is Gaussian with common variance, so for fixed bend
parameters the linear coefficients solve ordinary least squares exactly and
``sigma^2`` profiles out as RSS/n.  Fitting therefore reduces to a search
over the two or three nonlinear bend parameters, done here with a seeded
genetic algorithm started from a deterministic grid search.

Every fitness evaluation is one profiled OLS solve; the design matrix is

    [1, x_i, T(x_i)]     with T the family's smooth_max column,

factorised by a rank-revealing SVD (condition number above 1e12 marks the
node singular rather than propagating garbage coefficients).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bends import BentFamily
from .errors import (
    FitFailureError,
    InsufficientDataError,
    ParameterDomainError,
    SingularDesignError,
)
from .model import Bend, ParamVector, eta

_LOG_2PI = math.log(2.0 * math.pi)
_SIGMA2_FLOOR = 1e-300  # keeps profiled logliks finite and ordered at RSS ~ 0
_COND_LIMIT = 1e12


@dataclass(frozen=True)
class Dataset:
    """Paired observations with replicate grouping by exact x equality."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or ys.ndim != 1 or xs.shape != ys.shape:
            raise ParameterDomainError("xs and ys must be 1-D arrays of equal length")
        if xs.size < 4:
            raise InsufficientDataError(f"need at least 4 observations, got {xs.size}")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ParameterDomainError("observations must be finite")
        if np.all(xs == xs[0]):
            raise ParameterDomainError("xs must not all be equal")
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return self.xs.size

    @property
    def x_range(self) -> float:
        return float(self.xs.max() - self.xs.min())

    def replicate_groups(self):
        """Indices grouped by exact x value, in increasing x order."""
        order = np.argsort(self.xs, kind="stable")
        groups = []
        start = 0
        xs_sorted = self.xs[order]
        for i in range(1, self.n + 1):
            if i == self.n or xs_sorted[i] != xs_sorted[start]:
                groups.append(order[start:i])
                start = i
        return groups

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(self.xs.tobytes())
        digest.update(self.ys.tobytes())
        return digest.hexdigest()


@dataclass(frozen=True)
class GAConfig:
    """Genetic-algorithm settings.

    The defaults mirror the estimation protocol: 100 chromosomes, a hard
    floor of 5000 generations, then stop once the best fitness improves by
    less than ``stagnation_tol`` over ``stagnation_window`` generations.
    """

    population: int = 100
    min_generations: int = 5000
    max_generations: int = 25_000
    elitism: int = 2
    crossover_rate: float = 0.9
    mutation_rate: float = 0.1
    mutation_step: float = 0.05  # fraction of each gene's search-box width
    tournament: int = 3
    seed: int = 0
    stagnation_window: int = 500
    stagnation_tol: float = 1e-10

    def __post_init__(self):
        if self.population < 10:
            raise ParameterDomainError("population must be at least 10")
        for rate in (self.crossover_rate, self.mutation_rate):
            if not 0.0 < rate < 1.0:
                raise ParameterDomainError("rates must lie in (0, 1)")
        if self.elitism < 1 or self.elitism >= self.population:
            raise ParameterDomainError("elitism must be in [1, population)")
        if self.min_generations < 1 or self.max_generations < self.min_generations:
            raise ParameterDomainError("need max_generations >= min_generations >= 1")


@dataclass(frozen=True)
class SearchBox:
    """Per-gene bounds of the bend-parameter search.

    ``linear`` records the nominal boxes for (alpha, beta, delta) for
    provenance; the linear coefficients are profiled out and never searched.
    """

    location: tuple
    scale: tuple
    shape: Optional[tuple]
    linear: tuple

    def gene_bounds(self):
        bounds = [self.location, self.scale]
        if self.shape is not None:
            bounds.append(self.shape)
        return np.array(bounds, dtype=float)


@dataclass(frozen=True)
class OlsProfile:
    """Profiled OLS solution at fixed bend parameters."""

    coeffs: np.ndarray  # (alpha1, beta1, delta_1, ..., delta_{D-1})
    sigma2: float
    loglik: float
    cond: float


@dataclass(frozen=True)
class FitResult:
    """Maximum-likelihood fit of one family on one dataset."""

    params: ParamVector
    family: BentFamily  # bend parameters bound at the estimates
    loglik: float
    aic: float
    n_free_params: int
    converged: bool
    generations: int
    trace: np.ndarray  # best fitness per generation
    dataset_fingerprint: str
    n_obs: int
    search_box: SearchBox
    seed: int


def n_free_params(family: BentFamily, n_phases: int = 2) -> int:
    """Free parameter count including sigma^2."""
    per_bend = 2 + (1 if family.shape is not None else 0)
    return (n_phases + 1) + per_bend * (n_phases - 1) + 1


def loglik(data: Dataset, family: BentFamily, params: ParamVector) -> float:
    """Gaussian log-likelihood of ``params`` (sigma2 taken from the vector)."""
    resid = data.ys - eta(params, family, data.xs)
    n = data.n
    return float(
        -0.5 * n * _LOG_2PI
        - 0.5 * n * math.log(params.sigma2)
        - 0.5 * float(resid @ resid) / params.sigma2
    )


def _profiled_loglik(n: int, rss: float, yty: float) -> float:
    # Below the float cancellation noise of the normal equations every fit is
    # 'perfect'; collapsing such RSS values to zero makes ties well-defined
    # (the grid search then resolves them by lowest candidate index).
    if rss <= 32.0 * np.finfo(float).eps * yty:
        rss = 0.0
    sigma2 = max(rss / n, _SIGMA2_FLOOR)
    return -0.5 * n * (_LOG_2PI + math.log(sigma2) + 1.0)


def _svd_solve_batch(designs: np.ndarray, ys: np.ndarray):
    """Least squares for a (m, n, p) stack of designs against one y.

    Returns (coeffs (m, p), rss (m,), cond (m,), ok (m,)); ``ok`` is False
    where the condition number exceeds the 1e12 rank threshold.
    """
    u, s, vt = np.linalg.svd(designs, full_matrices=False)
    smin = s[:, -1]
    smax = s[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(smin > 0, smax / smin, np.inf)
    ok = cond <= _COND_LIMIT
    proj = np.einsum("mnp,n->mp", u, ys)
    safe_s = np.where(s > 0, s, 1.0)
    coeffs = np.einsum("mpq,mp->mq", vt, proj / safe_s)
    yty = float(ys @ ys)
    rss = np.maximum(yty - np.einsum("mp,mp->m", proj, proj), 0.0)
    return coeffs, rss, cond, ok


def design_matrix(data: Dataset, family: BentFamily, bends) -> np.ndarray:
    """n x (D + 1) design with one smooth ramp column per bend."""
    cols = [np.ones(data.n), data.xs]
    for b in bends:
        bound = family.with_params(location=b.location, scale=b.scale, shape=b.shape)
        cols.append(bound.smooth_max(data.xs))
    return np.column_stack(cols)


def profile_ols(data: Dataset, family: BentFamily, bends) -> OlsProfile:
    """Exact linear-coefficient solve at fixed bend parameters.

    Raises :class:`SingularDesignError` when the design is rank deficient,
    e.g. when a bounded bend sits entirely outside the data range and its
    ramp column vanishes.
    """
    bends = tuple(bends)
    design = design_matrix(data, family, bends)
    coeffs, rss, cond, ok = _svd_solve_batch(design[None, :, :], data.ys)
    if not bool(ok[0]):
        raise SingularDesignError(
            f"design condition number {float(cond[0]):.3e} exceeds {_COND_LIMIT:.0e}"
        )
    rss0 = float(rss[0])
    return OlsProfile(
        coeffs=coeffs[0],
        sigma2=rss0 / data.n,
        loglik=_profiled_loglik(data.n, rss0, float(data.ys @ data.ys)),
        cond=float(cond[0]),
    )


def _abrupt_column(xs: np.ndarray, tau: float) -> np.ndarray:
    return np.maximum(xs - tau, 0.0)


def grid_init(data: Dataset, family: BentFamily) -> ParamVector:
    """Deterministic starting point: 100-candidate grid search for tau.

    Fits the abrupt model by OLS at each candidate, keeps the best
    log-likelihood (ties broken by lowest candidate index), and starts the
    smoothing scale at 0.005 times the x range.
    """
    xs, ys = data.xs, data.ys
    taus = np.linspace(xs.min(), xs.max(), 100)
    designs = np.empty((taus.size, data.n, 3))
    designs[:, :, 0] = 1.0
    designs[:, :, 1] = xs
    designs[:, :, 2] = np.maximum(xs[None, :] - taus[:, None], 0.0)
    coeffs, rss, _, ok = _svd_solve_batch(designs, ys)
    if not np.any(ok):
        raise FitFailureError("all grid candidates produced singular designs")
    yty = float(ys @ ys)
    logliks = np.array(
        [_profiled_loglik(data.n, float(r), yty) if good else -np.inf for r, good in zip(rss, ok)]
    )
    best = int(np.argmax(logliks))  # argmax returns the lowest index on ties
    alpha0, beta0, delta0 = (float(c) for c in coeffs[best])
    scale0 = 0.005 * data.x_range
    shape0 = None
    if family.shape is not None:
        shape0 = 0.0 if family.name == "SN-BC" else 2.0
    return ParamVector(
        alpha1=alpha0,
        beta1=beta0,
        deltas=(delta0,),
        bends=(Bend(float(taus[best]), scale0, shape0),),
        sigma2=max(float(rss[best]) / data.n, _SIGMA2_FLOOR),
    )


def search_box(data: Dataset, family: BentFamily, init: ParamVector) -> SearchBox:
    """Bend-parameter search box around the grid-search initialiser.

    tau ranges over +-0.2 of the x range, the scale over [0.005, 0.2] of
    the x range, the slant over [-30, 30]; the bend exponent k (G-BC) over
    [1.05, 8].  Linear boxes use +-5.2 |c0| widened by a floor of 0.1 times
    the y range so a coefficient initialised at zero still gets a box.
    """
    span = data.x_range
    tau0 = init.bends[0].location
    location = (tau0 - 0.2 * span, tau0 + 0.2 * span)
    scale = (0.005 * span, 0.2 * span)
    shape = None
    if family.shape is not None:
        shape = (-30.0, 30.0) if family.name == "SN-BC" else (1.05, 8.0)
    yfloor = 0.1 * float(np.ptp(data.ys))
    linear = tuple(
        (c - 5.2 * max(abs(c), yfloor), c + 5.2 * max(abs(c), yfloor))
        for c in (init.alpha1, init.beta1, init.deltas[0])
    )
    return SearchBox(location=location, scale=scale, shape=shape, linear=linear)


def _bend_columns(family: BentFamily, xs: np.ndarray, genes: np.ndarray) -> np.ndarray:
    has_shape = genes.shape[1] == 3
    cols = np.empty((genes.shape[0], xs.size))
    for i, g in enumerate(genes):
        bound = family.with_params(
            location=g[0], scale=g[1], shape=g[2] if has_shape else None
        )
        cols[i] = bound.smooth_max(xs)
    return cols


def _fitness(data: Dataset, family: BentFamily, genes: np.ndarray) -> np.ndarray:
    m = genes.shape[0]
    designs = np.empty((m, data.n, 3))
    designs[:, :, 0] = 1.0
    designs[:, :, 1] = data.xs
    designs[:, :, 2] = _bend_columns(family, data.xs, genes)
    _, rss, _, ok = _svd_solve_batch(designs, data.ys)
    yty = float(data.ys @ data.ys)
    out = np.full(m, -np.inf)
    for i in range(m):
        if ok[i]:
            out[i] = _profiled_loglik(data.n, float(rss[i]), yty)
    return out


def _reflect(values: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    width = hi - lo
    folded = np.mod(values - lo, 2.0 * width)
    return lo + width - np.abs(folded - width)


def fit(data: Dataset, family: BentFamily, cfg: Optional[GAConfig] = None) -> FitResult:
    """Maximum-likelihood fit by genetic search over the bend parameters.

    The starting population holds five replicates of the grid-search
    initialiser plus uniform draws from the search box.  Selection is by
    tournament, crossover mixes genes uniformly, mutation adds Gaussian
    steps scaled to the box width and reflects at its boundaries; two
    elites survive unchanged each generation, so the best fitness is
    monotone.  Results are a pure function of (data, family, config).
    """
    cfg = cfg or GAConfig()
    p_free = n_free_params(family)
    if data.n < p_free + 1:
        raise InsufficientDataError(
            f"{family.name} has {p_free} free parameters; need at least "
            f"{p_free + 1} observations, got {data.n}"
        )
    init = grid_init(data, family)
    box = search_box(data, family, init)
    bounds = box.gene_bounds()
    lo, hi = bounds[:, 0], bounds[:, 1]
    n_genes = bounds.shape[0]

    init_genes = [init.bends[0].location, init.bends[0].scale]
    if n_genes == 3:
        init_genes.append(init.bends[0].shape)
    init_genes = np.clip(np.array(init_genes, dtype=float), lo, hi)

    rng = np.random.default_rng(cfg.seed)
    pop = np.empty((cfg.population, n_genes))
    n_seeded = min(5, cfg.population)
    pop[:n_seeded] = init_genes
    pop[n_seeded:] = rng.uniform(lo, hi, size=(cfg.population - n_seeded, n_genes))

    fitness = _fitness(data, family, pop)
    if not np.any(np.isfinite(fitness)):
        raise FitFailureError("every starting candidate produced a singular design")

    trace = []
    generation = 0
    converged = False
    n_children = cfg.population - cfg.elitism
    # Multi-scale mutation: each event draws its step from three log-spaced
    # scales below the base width fraction, so the search both explores the
    # box and resolves optima to the precision nested-model tests need.
    base_step = cfg.mutation_step * (hi - lo)
    step_scales = np.array([1.0, 0.1, 0.01])

    while generation < cfg.max_generations:
        generation += 1
        order = np.argsort(-fitness, kind="stable")
        elites = pop[order[: cfg.elitism]]
        elite_fit = fitness[order[: cfg.elitism]]

        # tournament selection of two parents per child
        contenders = rng.integers(0, cfg.population, size=(2, n_children, cfg.tournament))
        winners = np.take_along_axis(
            contenders,
            np.argmax(fitness[contenders], axis=-1)[..., None],
            axis=-1,
        )[..., 0]
        pa, pb = pop[winners[0]], pop[winners[1]]

        do_cross = rng.random(n_children) < cfg.crossover_rate
        from_b = rng.random((n_children, n_genes)) < 0.5
        children = np.where(do_cross[:, None] & from_b, pb, pa)

        mutate = rng.random((n_children, n_genes)) < cfg.mutation_rate
        scale_pick = step_scales[rng.integers(0, step_scales.size, size=(n_children, n_genes))]
        noise = rng.standard_normal((n_children, n_genes)) * base_step * scale_pick
        children = _reflect(np.where(mutate, children + noise, children), lo, hi)

        child_fit = _fitness(data, family, children)
        pop = np.vstack([elites, children])
        fitness = np.concatenate([elite_fit, child_fit])

        best = float(fitness.max())
        trace.append(best)
        if generation >= cfg.min_generations and generation >= cfg.stagnation_window:
            if best - trace[-cfg.stagnation_window] < cfg.stagnation_tol:
                converged = True
                break

    best_idx = int(np.argmax(fitness))
    best_genes = pop[best_idx]
    shape_hat = float(best_genes[2]) if n_genes == 3 else None
    bend_hat = Bend(float(best_genes[0]), float(best_genes[1]), shape_hat)
    profile = profile_ols(data, family, (bend_hat,))
    params = ParamVector(
        alpha1=float(profile.coeffs[0]),
        beta1=float(profile.coeffs[1]),
        deltas=(float(profile.coeffs[2]),),
        bends=(bend_hat,),
        sigma2=max(profile.sigma2, _SIGMA2_FLOOR),
    )
    aic = 2.0 * p_free - 2.0 * profile.loglik
    fitted_family = family.with_params(
        location=bend_hat.location, scale=bend_hat.scale, shape=bend_hat.shape
    )
    return FitResult(
        params=params,
        family=fitted_family,
        loglik=profile.loglik,
        aic=aic,
        n_free_params=p_free,
        converged=converged,
        generations=generation,
        trace=np.asarray(trace),
        dataset_fingerprint=data.fingerprint(),
        n_obs=data.n,
        search_box=box,
        seed=cfg.seed,
    )


@dataclass(frozen=True)
class DevianceSurface:
    """Profiled deviance drop D(tau, scale) <= 0 over a rectangular grid.

    ``deviance[i, j]`` corresponds to ``locations[i]`` and ``scales[j]``;
    singular nodes are NaN.  The location axis is the family's own location
    parameter (xi for SN-BC) with any shape parameter held at its estimate.
    """

    locations: np.ndarray
    scales: np.ndarray
    deviance: np.ndarray
    fitted_loglik: float
    family_name: str
    optimum: tuple

    def max_node(self):
        """(i, j, value) of the largest finite deviance node."""
        masked = np.where(np.isnan(self.deviance), -np.inf, self.deviance)
        flat = int(np.argmax(masked))
        i, j = np.unravel_index(flat, self.deviance.shape)
        return int(i), int(j), float(self.deviance[i, j])


def deviance_surface(
    data: Dataset,
    family: BentFamily,
    fit_result: FitResult,
    grid=(40, 40),
    box: Optional[tuple] = None,
) -> DevianceSurface:
    """Deviance drop relative to the ML optimum on a location x scale grid.

    At each node the linear coefficients are re-profiled by OLS, so
    ``D = -2 [loglik_hat - loglik_node]`` is non-positive up to roundoff.
    The grid defaults to the genetic-algorithm search box.
    """
    n_loc, n_scale = grid
    if box is None:
        loc_lo, loc_hi = fit_result.search_box.location
        sc_lo, sc_hi = fit_result.search_box.scale
    else:
        (loc_lo, loc_hi), (sc_lo, sc_hi) = box
    locations = np.linspace(loc_lo, loc_hi, n_loc)
    scales = np.linspace(sc_lo, sc_hi, n_scale)
    shape_hat = fit_result.params.bends[0].shape

    genes = np.empty((n_loc * n_scale, 3 if shape_hat is not None else 2))
    mesh_loc, mesh_scale = np.meshgrid(locations, scales, indexing="ij")
    genes[:, 0] = mesh_loc.ravel()
    genes[:, 1] = mesh_scale.ravel()
    if shape_hat is not None:
        genes[:, 2] = shape_hat
    logliks = _fitness(data, family, genes)
    dev = np.where(
        np.isfinite(logliks),
        -2.0 * (fit_result.loglik - logliks),
        np.nan,
    ).reshape(n_loc, n_scale)
    return DevianceSurface(
        locations=locations,
        scales=scales,
        deviance=dev,
        fitted_loglik=fit_result.loglik,
        family_name=family.name,
        optimum=(fit_result.params.bends[0].location, fit_result.params.bends[0].scale),
    )
