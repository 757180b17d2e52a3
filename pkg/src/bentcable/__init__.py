"""Smooth piecewise-linear regression with random-threshold bent cables.

A unified family of models that join straight-line regimes through smooth
bends.  Every bend encodes a threshold distribution: mixture-weighted bends
are transitional (they pass through the regime intersection), expectation
bends are hyperbolic (they hug the regimes like asymptotes), and the
classical models of the literature are particular threshold choices.
"""

from .bends import (
    FAMILY_TABLE,
    BentFamily,
    classify_shape,
    corrected_transitional,
    expbc_family,
    lch_shift,
    make_family,
    smm_family,
)
from .distributions import (
    DISTRIBUTIONS,
    Biweight,
    Cauchy,
    Epanechnikov,
    ExponentiatedUniform,
    Logistic,
    Normal,
    NonStandardT2,
    SkewNormal,
    ThresholdDistribution,
    Uniform,
    make_distribution,
)
from .errors import BentCableError
from .estimation import (
    Dataset,
    DevianceSurface,
    FitResult,
    GAConfig,
    deviance_surface,
    fit,
    grid_init,
    loglik,
    profile_ols,
    search_box,
)
from .estimator import BentCableRegressor
from .inference import (
    compare,
    confidence_region,
    lack_of_fit,
    lrt,
    transition_zone,
)
from .model import (
    Bend,
    ParamVector,
    SignFormParams,
    eta,
    eta_abrupt,
    eta_sign_form,
    from_sign_form,
    to_sign_form,
)
from .montecarlo import (
    SimSpec,
    run_verification,
    sample_threshold,
    simulate_mixture,
    synthetic_dataset,
    verify_conditions,
    verify_expected_max,
    verify_expected_modulus,
)

__all__ = [
    "BentCableError",
    "BentCableRegressor",
    "BentFamily",
    "Bend",
    "Biweight",
    "Cauchy",
    "DISTRIBUTIONS",
    "Dataset",
    "DevianceSurface",
    "Epanechnikov",
    "ExponentiatedUniform",
    "FAMILY_TABLE",
    "FitResult",
    "GAConfig",
    "Logistic",
    "NonStandardT2",
    "Normal",
    "ParamVector",
    "SignFormParams",
    "SimSpec",
    "SkewNormal",
    "ThresholdDistribution",
    "Uniform",
    "classify_shape",
    "compare",
    "confidence_region",
    "corrected_transitional",
    "deviance_surface",
    "eta",
    "eta_abrupt",
    "eta_sign_form",
    "expbc_family",
    "fit",
    "from_sign_form",
    "grid_init",
    "lack_of_fit",
    "lch_shift",
    "loglik",
    "lrt",
    "make_distribution",
    "make_family",
    "profile_ols",
    "run_verification",
    "sample_threshold",
    "search_box",
    "simulate_mixture",
    "smm_family",
    "synthetic_dataset",
    "to_sign_form",
    "transition_zone",
    "verify_conditions",
    "verify_expected_max",
    "verify_expected_modulus",
]
