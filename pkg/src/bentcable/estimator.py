"""Scikit-learn style front end for bent-cable regression."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, column_or_1d

from .bends import FAMILY_TABLE, make_family
from .errors import ParameterDomainError
from .estimation import Dataset, GAConfig, fit
from .inference import transition_zone
from .model import eta


def _as_x_column(X) -> np.ndarray:
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ParameterDomainError(
                f"bent-cable regression is single-predictor; got {X.shape[1]} columns"
            )
        X = X[:, 0]
    return X


class BentCableRegressor(BaseEstimator, RegressorMixin):
    """Smooth piecewise-linear regression with a random-threshold bend.

    Fits ``y = alpha + beta x + delta * bend(x) + noise`` by maximum
    likelihood, searching the bend parameters with a seeded genetic
    algorithm while the linear coefficients are profiled out exactly.

    Parameters
    ----------
    family : str
        Catalog name: "BC", "G-BC", "E-BC", "Q-BC", "Q-BC-hyp", "N-BC",
        "SN-BC", "Tanh", "Lne", "Lch" or "Hyp".
    population, min_generations, max_generations, seed :
        Genetic-algorithm budget and reproducibility controls.

    Attributes
    ----------
    result_ : FitResult
        Full fit record (parameters, trace, search box).
    params_ : ParamVector
        Maximum-likelihood parameters.
    loglik_, aic_ : float
    transition_zone_ : tuple
        Fitted phase-transition interval (exact for bounded bends,
        2.5/97.5 percent quantiles otherwise).

    Examples
    --------
    >>> reg = BentCableRegressor(family="BC", seed=1).fit(x[:, None], y)
    >>> reg.predict(x_new[:, None])
    """

    def __init__(
        self,
        family: str = "BC",
        population: int = 100,
        min_generations: int = 5000,
        max_generations: int = 25_000,
        seed: int = 0,
    ):
        self.family = family
        self.population = population
        self.min_generations = min_generations
        self.max_generations = max_generations
        self.seed = seed

    def fit(self, X, y):
        if self.family not in FAMILY_TABLE:
            raise ParameterDomainError(
                f"unknown family {self.family!r}; choose from {sorted(FAMILY_TABLE)}"
            )
        xs = _as_x_column(X)
        ys = column_or_1d(y, dtype=float)
        data = Dataset(xs, ys)
        cfg = GAConfig(
            population=self.population,
            min_generations=self.min_generations,
            max_generations=self.max_generations,
            seed=self.seed,
        )
        result = fit(data, make_family(self.family), cfg)
        self.result_ = result
        self.params_ = result.params
        self.family_ = result.family
        self.loglik_ = result.loglik
        self.aic_ = result.aic
        self.transition_zone_ = transition_zone(result)
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        xs = _as_x_column(X)
        return eta(self.params_, self.family_, xs)
