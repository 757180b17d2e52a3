"""Smooth replacements for the max / sign operators of piecewise-linear models.

A *bent family* bundles a named model (BC, E-BC, Tanh, ...) with the route
used to build its bend and, for all but one family, the threshold
distribution that the bend encodes:

* ``extbc`` - a polynomial ``psi*`` patched over the transition zone
  ``[tau - zeta, tau + zeta]`` under matching value/derivative conditions at
  the edges;
* ``smm``   - the mixture form ``(x - tau) * F_T(x)``, obtained by letting
  each sub-unit switch regime at its own random threshold ``T``;
* ``expbc`` - the marginalised form ``E[u(x - T)] = (x - tau) F_T(x) - L(x)``
  with ``L`` the lower partial expectation, which bends like a hyperbola
  instead of bulging through the regime intersection.

The same named family can admit several routes (the admitted combinations
are fixed; see ``FAMILY_TABLE``), and the routes provably agree whenever
they coexist; the test suite re-derives those equalities numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Optional

import numpy as np

from .distributions import (
    Biweight,
    Epanechnikov,
    ExponentiatedUniform,
    Logistic,
    Normal,
    NonStandardT2,
    SkewNormal,
    ThresholdDistribution,
    Uniform,
)
from .errors import (
    NonIntegrableThresholdError,
    ParameterDomainError,
    RemovableSingularityError,
    RouteError,
)

ROUTE_EXTBC = "extbc"
ROUTE_SMM = "smm"
ROUTE_EXPBC = "expbc"

TRANSITIONAL = "transitional"
HYPERBOLIC = "hyperbolic"

#: name -> (shape class, admitted routes, threshold distribution kind).
#: ``Lch`` is the vertically shifted Lne and carries no distribution of its
#: own; ``Q-BC-hyp`` is the corrected (de-bulged) version of Q-BC.
FAMILY_TABLE = {
    "Tanh": (TRANSITIONAL, (ROUTE_SMM,), "logistic"),
    "Lne": (HYPERBOLIC, (ROUTE_EXPBC,), "logistic"),
    "Lch": (HYPERBOLIC, (ROUTE_EXPBC,), None),
    "Hyp": (HYPERBOLIC, (ROUTE_EXPBC,), "t2"),
    "BC": (HYPERBOLIC, (ROUTE_EXTBC, ROUTE_EXPBC), "uniform"),
    "G-BC": (HYPERBOLIC, (ROUTE_EXPBC,), "exponentiated-uniform"),
    "E-BC": (HYPERBOLIC, (ROUTE_EXTBC, ROUTE_EXPBC), "epanechnikov"),
    "Q-BC": (TRANSITIONAL, (ROUTE_EXTBC, ROUTE_SMM), "biweight"),
    "Q-BC-hyp": (HYPERBOLIC, (ROUTE_EXPBC,), "biweight"),
    "N-BC": (HYPERBOLIC, (ROUTE_EXPBC,), "normal"),
    "SN-BC": (HYPERBOLIC, (ROUTE_EXPBC,), "skew-normal"),
}

#: Canonical expbc-routed family for each distribution kind, used when a
#: transitional family is corrected into its hyperbolic twin.
_EXPBC_CANONICAL = {
    "uniform": "BC",
    "epanechnikov": "E-BC",
    "biweight": "Q-BC-hyp",
    "logistic": "Lne",
    "normal": "N-BC",
    "skew-normal": "SN-BC",
    "t2": "Hyp",
    "exponentiated-uniform": "G-BC",
}

_DIST_CLS = {
    "uniform": Uniform,
    "epanechnikov": Epanechnikov,
    "biweight": Biweight,
    "logistic": Logistic,
    "normal": Normal,
    "skew-normal": SkewNormal,
    "t2": NonStandardT2,
    "exponentiated-uniform": ExponentiatedUniform,
}


def _softplus(z):
    return np.logaddexp(0.0, z)


@dataclass(frozen=True)
class BentFamily:
    """A named smooth piecewise-linear construction with bound parameters.

    Attributes
    ----------
    name : str
        Catalog name ("BC", "Tanh", ...) or a generic label such as
        ``"SMM[normal]"`` for route-over-distribution constructions.
    route : str
        The construction route of this instance; one of ``extbc``, ``smm``,
        ``expbc``.
    location, scale, shape : float
        Family-level parameters: the change-point ``tau`` (location ``xi``
        for SN-BC), the smoothing half-width or dispersion, and the extra
        shape parameter (``lam`` for SN-BC, ``k`` for G-BC) when present.
    dist : ThresholdDistribution or None
        The encoded threshold distribution; absent only for Lch.
    """

    name: str
    route: str
    location: float
    scale: float
    shape: Optional[float] = None
    dist: Optional[ThresholdDistribution] = None

    _ROUTES: ClassVar[tuple] = (ROUTE_EXTBC, ROUTE_SMM, ROUTE_EXPBC)

    # -- structure -----------------------------------------------------------

    @property
    def admitted_routes(self) -> tuple:
        if self.name in FAMILY_TABLE:
            return FAMILY_TABLE[self.name][1]
        return (self.route,)

    def admits(self, route: str) -> bool:
        return route in self.admitted_routes

    @property
    def change_point(self) -> float:
        """The regime intersection tau = E[T] (location itself for Lch)."""
        if self.dist is None:
            return self.location
        if not self.dist.integrable:
            return self.dist.location
        return self.dist.mean()

    @property
    def bounded(self) -> bool:
        return self.dist is not None and self.dist.bounded

    def transition_zone(self, quantile_lo: float = 0.025, quantile_hi: float = 0.975):
        """x-interval where the bend departs from the straight regimes.

        Exact support bounds for bounded thresholds, the requested quantile
        band otherwise.
        """
        if not (0.0 < quantile_lo < quantile_hi < 1.0):
            raise ParameterDomainError("quantile bounds must satisfy 0 < lo < hi < 1")
        if self.dist is None:
            base = Logistic(self.location, self.scale / 2.0)
            return (base.quantile(quantile_lo), base.quantile(quantile_hi))
        if self.bounded:
            return self.dist.support()
        return (self.dist.quantile(quantile_lo), self.dist.quantile(quantile_hi))

    def with_params(self, location=None, scale=None, shape=None):
        """Rebind the bend parameters, preserving name and route."""
        if self.name in FAMILY_TABLE:
            return make_family(
                self.name,
                location=self.location if location is None else float(location),
                scale=self.scale if scale is None else float(scale),
                shape=self.shape if shape is None else float(shape),
                route=self.route,
                dist_kind=None if self.dist is None else self.dist.kind,
            )
        new_dist = self.dist.with_params(location=location, scale=scale, shape=shape)
        if self.route == ROUTE_SMM:
            return smm_family(new_dist, allow_nonintegrable=not new_dist.integrable)
        return expbc_family(new_dist)

    # -- bend evaluation -------------------------------------------------------

    def smooth_max(self, x):
        """Smooth stand-in for ``max(x - tau, 0)``; the model's bend column.

        Continuous in ``x``; equals ``x - tau`` above the transition zone and
        ``0`` below it (exactly for bounded supports, asymptotically
        otherwise).  For expbc-routed families its first two derivatives are
        the threshold CDF and PDF.
        """
        x_arr = np.asarray(x, dtype=float)
        scalar = x_arr.ndim == 0
        out = self._smooth_max_impl(x_arr)
        return float(out) if scalar else out

    def _smooth_max_impl(self, x):
        if self.name == "Lch":
            # (lch(s) + s)/2 with lch(s) = lne(s; g/2) - g log 2
            g = self.scale
            s = x - self.location
            return 0.5 * g * (_softplus(2.0 * s / g) - math.log(2.0))
        if self.route == ROUTE_EXTBC:
            return self._extbc_u(x)
        tau = self.change_point
        s = x - tau
        if self.route == ROUTE_SMM:
            return s * self.dist.cdf(x)
        if self.route == ROUTE_EXPBC:
            if not self.dist.integrable:
                raise NonIntegrableThresholdError(
                    "expected-bend construction needs an integrable threshold"
                )
            if self.name == "Hyp":
                # (s + sqrt(s^2 + g))/2 with a cancellation-free negative branch
                g = self.scale
                r = np.sqrt(np.square(s) + g)
                return np.where(s >= 0.0, 0.5 * (s + r), 0.5 * g / (r - s))
            if self.name == "Lne":
                return self.scale * _softplus(s / self.scale)
            return s * self.dist.cdf(x) - self.dist.lower_partial_expectation(x)
        raise RouteError(f"unknown route {self.route!r}")

    def _extbc_u(self, x):
        tau, zeta = self.location, self.scale
        raw = np.asarray(x) - tau
        s = np.clip(raw, -zeta, zeta)
        if self.name == "BC":
            core = np.square(s + zeta) / (4.0 * zeta)
        elif self.name == "E-BC":
            core = (
                -(s**4) / (16.0 * zeta**3)
                + 3.0 * np.square(s) / (8.0 * zeta)
                + s / 2.0
                + 3.0 * zeta / 16.0
            )
        elif self.name == "Q-BC":
            core = (
                s / 2.0
                + 15.0 * np.square(s) / (16.0 * zeta)
                - 5.0 * s**4 / (8.0 * zeta**3)
                + 3.0 * s**6 / (16.0 * zeta**5)
            )
        else:
            raise RouteError(f"{self.name} has no polynomial bend form")
        # exact ramp outside and at the zone edges (the polynomial only
        # cancels to roundoff there)
        return np.where(raw <= -zeta, 0.0, np.where(raw >= zeta, raw, core))

    def transitional_fn(self, x):
        """trn(x - tau) = 2 F_T(x) - 1 in [-1, 1]; smm-routed families only."""
        if not self.admits(ROUTE_SMM):
            raise RouteError(
                f"{self.name} is hyperbolic; it has no transitional function"
            )
        x_arr = np.asarray(x, dtype=float)
        scalar = x_arr.ndim == 0
        if self.name == "Tanh":
            out = np.tanh((x_arr - self.location) / self.scale)
        else:
            out = 2.0 * self.dist.cdf(x_arr) - 1.0
        return float(out) if scalar else out

    def hyperbolic_fn(self, x):
        """hyp(x - tau) with |hyp| >= 1; expbc-routed families only.

        Diverges at the change-point by construction; evaluating there raises
        and the caller should use ``smooth_max`` (whose value is the
        continuous product ``(x - tau) * hyp / 2`` shifted back to ``u``).
        """
        if not self.admits(ROUTE_EXPBC):
            raise RouteError(
                f"{self.name} is transitional; it has no hyperbolic factor"
            )
        x_arr = np.asarray(x, dtype=float)
        scalar = x_arr.ndim == 0
        tau = self.change_point
        s = x_arr - tau
        if np.any(s == 0.0):
            raise RemovableSingularityError(
                "hyp(x - tau) has a removable singularity at the change-point; "
                "evaluate smooth_max instead"
            )
        if self.name == "Hyp":
            out = np.sqrt(np.square(s) + self.scale) / s
        elif self.name == "Lch":
            g = self.scale
            modulus = 0.5 * g * _softplus(2.0 * s / g) + 0.5 * g * _softplus(
                -2.0 * s / g
            ) - g * math.log(2.0)
            out = modulus / s
        else:
            cdfs = self.dist.cdf(x_arr)
            lpe = self.dist.lower_partial_expectation(x_arr)
            out = 2.0 * cdfs - 1.0 - 2.0 * lpe / s
        return float(out) if scalar else out


def classify_shape(family: BentFamily) -> str:
    """Return ``"transitional"`` or ``"hyperbolic"`` from the static catalog."""
    if family.name in FAMILY_TABLE:
        return FAMILY_TABLE[family.name][0]
    return TRANSITIONAL if family.route == ROUTE_SMM else HYPERBOLIC


def lch_shift(gamma_star: float) -> float:
    """Vertical displacement d = -gamma* log 2 relating Lch to Lne.

    Pointwise, ``lch(x; gamma*) = lne(x; gamma*/2) + d``: the
    log-hyperbolic-cosine bend is the log-exponential one pulled down until
    it touches the regime intersection.
    """
    if not gamma_star > 0:
        raise ParameterDomainError("gamma* must be positive")
    return -gamma_star * math.log(2.0)


def _family_scale_to_dist(name: str, scale: float) -> float:
    # Tanh's gamma is twice the logistic dispersion it encodes.
    return scale / 2.0 if name == "Tanh" else scale


def make_family(
    name: str,
    location: float = 0.0,
    scale: float = 1.0,
    shape: Optional[float] = None,
    route: Optional[str] = None,
    dist_kind: Optional[str] = None,
) -> BentFamily:
    """Build a catalog family, or a generic route-over-distribution one.

    Catalog names take the literature parameterisation: ``location`` is the
    change-point ``tau`` (``xi`` for SN-BC), ``scale`` the published
    smoothing parameter, ``shape`` the slant ``lam`` (SN-BC) or exponent
    ``k`` (G-BC).
    """
    if scale <= 0 or not np.isfinite(scale):
        raise ParameterDomainError(f"scale must be positive, got {scale}")
    if name not in FAMILY_TABLE:
        raise ParameterDomainError(
            f"unknown family {name!r}; choose from {sorted(FAMILY_TABLE)}"
        )
    shape_cls, routes, kind = FAMILY_TABLE[name]
    if dist_kind is not None and kind is not None and dist_kind != kind:
        raise ParameterDomainError(f"{name} is tied to the {kind} threshold")
    if route is None:
        route = routes[0]
    if route not in routes:
        raise RouteError(f"{name} admits routes {routes}, not {route!r}")

    if kind is None:  # Lch
        if shape is not None:
            raise ParameterDomainError("Lch has no shape parameter")
        return BentFamily(name, route, float(location), float(scale), None, None)

    cls = _DIST_CLS[kind]
    dist_scale = _family_scale_to_dist(name, float(scale))
    if cls is SkewNormal:
        lam = 0.0 if shape is None else float(shape)
        dist = SkewNormal(float(location), dist_scale, lam)
        return BentFamily(name, route, float(location), float(scale), lam, dist)
    if cls is ExponentiatedUniform:
        k = 2.0 if shape is None else float(shape)
        dist = ExponentiatedUniform(float(location), dist_scale, k)
        return BentFamily(name, route, float(location), float(scale), k, dist)
    if shape is not None:
        raise ParameterDomainError(f"{name} has no shape parameter")
    dist = cls(float(location), dist_scale)
    return BentFamily(name, route, float(location), float(scale), None, dist)


def smm_family(dist: ThresholdDistribution, allow_nonintegrable: bool = False) -> BentFamily:
    """Mixture-route family over an arbitrary threshold distribution.

    Non-integrable thresholds are rejected: their mixture curve never
    reattaches to the linear regimes.  ``allow_nonintegrable`` exists solely
    so the verification harness can demonstrate that failure.
    """
    if not dist.integrable and not allow_nonintegrable:
        raise NonIntegrableThresholdError(
            f"{dist.kind} threshold is not integrable; "
            "its state mixture has no valid transitional shape"
        )
    loc = dist.location if not dist.integrable else dist.mean()
    return BentFamily(
        f"SMM[{dist.kind}]", ROUTE_SMM, loc, dist.scale, dist.shape, dist
    )


def expbc_family(dist: ThresholdDistribution) -> BentFamily:
    """Expected-bend family over an arbitrary integrable distribution."""
    if not dist.integrable:
        raise NonIntegrableThresholdError(
            f"{dist.kind} threshold is not integrable; E[u(x - T)] diverges"
        )
    return BentFamily(
        f"ExpBC[{dist.kind}]", ROUTE_EXPBC, dist.mean(), dist.scale, dist.shape, dist
    )


def corrected_transitional(family: BentFamily) -> BentFamily:
    """Hyperbolic (expected-bend) twin of a transitional family.

    Subtracting the correction factor ``2 L(x) / (x - tau)`` from the
    transitional function removes the bulge while keeping the same threshold
    distribution.  Already-hyperbolic families are returned unchanged.
    """
    if family.dist is None:
        return family
    if not family.dist.integrable:
        raise NonIntegrableThresholdError(
            "cannot correct a family with a non-integrable threshold"
        )
    if family.route == ROUTE_EXPBC:
        return family
    target = _EXPBC_CANONICAL.get(family.dist.kind)
    if target is None:
        return expbc_family(family.dist)
    return make_family(
        target,
        location=family.dist.location,
        scale=family.dist.scale,
        shape=family.dist.shape,
    )
