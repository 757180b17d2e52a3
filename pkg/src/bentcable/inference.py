"""Model comparison and diagnostics for fitted bent-cable models.

Covers the four classical instruments: AIC relative likelihoods for
comparing non-nested families, the likelihood-ratio test for nested ones
(notably SN-BC against N-BC, i.e. bend asymmetry), chi-square confidence
regions read off the deviance surface, and the F lack-of-fit test that
replicated designs make possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import (
    DatasetMismatchError,
    InsufficientReplicationError,
    OptimizationFailureError,
    ParameterDomainError,
)
from .estimation import Dataset, DevianceSurface, FitResult
from .model import eta

#: The chi-square(2) approximation behind deviance-surface regions is known
#: to under-cover when the surface is far from parabolic; every region
#: result carries this caveat.
REGION_CAVEAT = (
    "chi-square approximation; coverage can be poor unless the deviance "
    "surface is regular and parabolic"
)


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    loglik: float
    aic: float
    relative_likelihood: float


@dataclass(frozen=True)
class ComparisonTable:
    """Per-model evidence weights, sorted by AIC (best first)."""

    rows: tuple

    def __iter__(self):
        return iter(self.rows)

    def best(self) -> ComparisonRow:
        return self.rows[0]


def compare(fits) -> ComparisonTable:
    """Relative likelihoods exp((AIC_min - AIC_m)/2) across fits.

    All fits must come from the same dataset; the minimum-AIC model scores
    exactly 1.
    """
    fits = list(fits)
    if len(fits) < 2:
        raise ParameterDomainError("need at least two fits to compare")
    prints = {f.dataset_fingerprint for f in fits}
    if len(prints) != 1:
        raise DatasetMismatchError("fits were computed on different datasets")
    aic_min = min(f.aic for f in fits)
    rows = [
        ComparisonRow(
            name=f.family.name,
            loglik=f.loglik,
            aic=f.aic,
            relative_likelihood=math.exp((aic_min - f.aic) / 2.0),
        )
        for f in fits
    ]
    rows.sort(key=lambda r: r.aic)
    return ComparisonTable(tuple(rows))


@dataclass(frozen=True)
class LrtResult:
    statistic: float
    df: int
    p_value: float


def lrt(full: FitResult, nested: FitResult, df: int | None = None) -> LrtResult:
    """Likelihood-ratio test of a nested fit against the full one.

    The statistic 2*(loglik_full - loglik_nested) is referred to the
    chi-square upper tail with ``df`` degrees of freedom (defaults to the
    parameter-count difference).  A nested fit beating the full one by more
    than 1e-6 means the full optimisation failed and is reported as such.
    """
    if full.dataset_fingerprint != nested.dataset_fingerprint:
        raise DatasetMismatchError("LRT fits were computed on different datasets")
    if df is None:
        df = full.n_free_params - nested.n_free_params
    if df < 1 or nested.n_free_params >= full.n_free_params:
        raise ParameterDomainError("nested model must have fewer free parameters")
    statistic = 2.0 * (full.loglik - nested.loglik)
    if statistic < -1e-6:
        raise OptimizationFailureError(
            f"nested fit beats the full fit by {-statistic/2:.3e} in log-likelihood; "
            "rerun the full optimisation"
        )
    statistic = max(statistic, 0.0)
    return LrtResult(
        statistic=statistic,
        df=int(df),
        p_value=float(stats.chi2.sf(statistic, df)),
    )


@dataclass(frozen=True)
class ConfidenceRegion:
    """Deviance-surface nodes consistent with the data at the given level."""

    mask: np.ndarray  # boolean, same shape as the surface
    threshold: float  # nodes with deviance above this are inside
    level: float
    caveat: str


def confidence_region(surface: DevianceSurface, level: float = 0.95) -> ConfidenceRegion:
    """Approximate joint region for (location, scale) from the deviance drop.

    A node is inside when ``D > -chi2_2.ppf(level)`` (the familiar -5.99 at
    95%).  NaN (singular) nodes are outside.
    """
    if not 0.0 < level < 1.0:
        raise ParameterDomainError("confidence level must be in (0, 1)")
    threshold = -float(stats.chi2.ppf(level, 2))
    with np.errstate(invalid="ignore"):
        mask = surface.deviance > threshold
    mask = np.where(np.isnan(surface.deviance), False, mask)
    return ConfidenceRegion(mask=mask, threshold=threshold, level=level, caveat=REGION_CAVEAT)


@dataclass(frozen=True)
class LackOfFitResult:
    statistic: float
    df_lof: int
    df_pe: int
    p_value: float
    ss_lack_of_fit: float
    ss_pure_error: float


def lack_of_fit(data: Dataset, fit_result: FitResult) -> LackOfFitResult:
    """F test splitting the residual sum of squares at replicated x values.

    Pure error comes from within-group spread around group means (groups are
    exact x ties); what remains of the RSS is lack of fit, compared by
    ``F = [SS_lof/(g - p)] / [SS_pe/(n - g)]`` with ``g`` distinct x values
    and ``p`` mean-function parameters.
    """
    if data.fingerprint() != fit_result.dataset_fingerprint:
        raise DatasetMismatchError("fit does not belong to this dataset")
    groups = data.replicate_groups()
    g = len(groups)
    n = data.n
    p = fit_result.n_free_params - 1  # mean-function parameters only
    if n == g:
        raise InsufficientReplicationError(
            "lack-of-fit needs replicated x values (every x is unique)"
        )
    if g <= p:
        raise InsufficientReplicationError(
            f"need more distinct x values ({g}) than mean parameters ({p})"
        )
    fitted = eta(fit_result.params, fit_result.family, data.xs)
    ss_pe = 0.0
    ss_lof = 0.0
    for idx in groups:
        group_y = data.ys[idx]
        mean_y = float(group_y.mean())
        ss_pe += float(np.sum((group_y - mean_y) ** 2))
        # fitted value is shared within a group (identical x)
        ss_lof += idx.size * (mean_y - float(fitted[idx[0]])) ** 2
    df_lof = g - p
    df_pe = n - g
    statistic = (ss_lof / df_lof) / (ss_pe / df_pe)
    return LackOfFitResult(
        statistic=float(statistic),
        df_lof=int(df_lof),
        df_pe=int(df_pe),
        p_value=float(stats.f.sf(statistic, df_lof, df_pe)),
        ss_lack_of_fit=float(ss_lof),
        ss_pure_error=float(ss_pe),
    )


def transition_zone(fit_result: FitResult, quantile_lo: float = 0.025, quantile_hi: float = 0.975):
    """Fitted phase-transition interval.

    Bounded-support families return their exact support; unbounded ones
    return the requested quantile band of the fitted threshold distribution.
    """
    return fit_result.family.transition_zone(quantile_lo, quantile_hi)
