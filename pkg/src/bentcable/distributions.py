"""Threshold distribution catalog.

Each distribution models the random location ``T`` at which a unit switches
from one linear regime to the next.  Three quantities drive everything built
on top of them:

* ``pdf`` / ``cdf`` - the usual density and distribution function,
* ``lower_partial_expectation`` - the tail integral

      L(x) = integral_{-inf}^{x} (t - tau) dF_T(t),

  where ``tau = E[T]``.  ``L(x) <= 0`` everywhere and vanishes at both
  infinities exactly when ``T`` is integrable; it is the correction that
  turns a transitional (mixture-weighted) bend into a hyperbolic one.

All distributions are immutable value objects; the methods are pure and
accept scalars or numpy arrays.  Cauchy is deliberately included as a
non-integrable counterexample: its ``cdf``/``pdf`` work, but every
expectation-based operation raises :class:`NonIntegrableThresholdError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import ClassVar

import numpy as np
from scipy import optimize, special

from .errors import NonIntegrableThresholdError, ParameterDomainError

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _phi(z):
    """Standard normal density."""
    return np.exp(-0.5 * np.square(z)) / _SQRT_2PI


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _maybe_scalar(arr, scalar):
    return float(arr) if scalar else arr


@dataclass(frozen=True)
class ThresholdDistribution:
    """Base class for threshold distributions.

    Parameters
    ----------
    location : float
        Location parameter.  For every kind except the skew normal this is
        the mean ``tau`` (the change-point); for the skew normal it is the
        usual location ``xi`` and the mean is derived.
    scale : float
        Positive scale parameter: the half-width ``zeta`` for bounded
        supports, the dispersion ``gamma`` otherwise.
    """

    location: float
    scale: float

    kind: ClassVar[str] = ""
    bounded: ClassVar[bool] = False
    integrable: ClassVar[bool] = True

    def __post_init__(self):
        if not np.isfinite(self.location):
            raise ParameterDomainError("location must be finite")
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise ParameterDomainError(f"scale must be positive, got {self.scale}")

    # -- parameter handling -------------------------------------------------

    @property
    def shape(self):
        """Shape parameter; ``None`` for kinds that have none."""
        return None

    def with_params(self, location=None, scale=None, shape=None):
        """Return a copy with some parameters rebound."""
        if shape is not None:
            raise ParameterDomainError(f"{self.kind} has no shape parameter")
        return replace(
            self,
            location=self.location if location is None else float(location),
            scale=self.scale if scale is None else float(scale),
        )

    def mean(self) -> float:
        """E[T]; equals the change-point ``tau``."""
        return self.location

    @property
    def x_scale(self) -> float:
        """Characteristic length along the x axis (used for probe grids)."""
        return self.scale

    def support(self):
        """(lower, upper) support bounds; infinite for unbounded kinds."""
        return (-math.inf, math.inf)

    # -- distribution functions ---------------------------------------------

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def lower_partial_expectation(self, x):
        """integral_{-inf}^{x} (t - tau) dF_T(t); non-positive everywhere."""
        raise NotImplementedError

    def quantile(self, p: float) -> float:
        raise NotImplementedError

    def _check_prob(self, p):
        if not 0.0 < p < 1.0:
            raise ParameterDomainError(f"quantile level must be in (0, 1), got {p}")


class _BoundedMixin:
    """Common support handling for kinds living on [tau - zeta, tau + zeta]."""

    bounded: ClassVar[bool] = True

    def support(self):
        return (self.location - self.scale, self.location + self.scale)


@dataclass(frozen=True)
class Uniform(_BoundedMixin, ThresholdDistribution):
    """Uniform threshold on [tau - zeta, tau + zeta]."""

    kind: ClassVar[str] = "uniform"

    def pdf(self, x):
        s, scalar = _as_float_array(x)
        s = s - self.location
        out = np.where(np.abs(s) <= self.scale, 1.0 / (2.0 * self.scale), 0.0)
        return _maybe_scalar(out, scalar)

    def cdf(self, x):
        s, scalar = _as_float_array(x)
        s = s - self.location
        out = np.clip((s + self.scale) / (2.0 * self.scale), 0.0, 1.0)
        return _maybe_scalar(out, scalar)

    def lower_partial_expectation(self, x):
        s, scalar = _as_float_array(x)
        s = np.clip(s - self.location, -self.scale, self.scale)
        out = (np.square(s) - self.scale**2) / (4.0 * self.scale)
        return _maybe_scalar(out, scalar)

    def quantile(self, p):
        self._check_prob(p)
        return self.location + self.scale * (2.0 * p - 1.0)


@dataclass(frozen=True)
class Epanechnikov(_BoundedMixin, ThresholdDistribution):
    """Parabolic-density threshold on [tau - zeta, tau + zeta]."""

    kind: ClassVar[str] = "epanechnikov"

    def pdf(self, x):
        s, scalar = _as_float_array(x)
        s = s - self.location
        z = self.scale
        out = np.where(np.abs(s) <= z, 3.0 * (z**2 - np.square(s)) / (4.0 * z**3), 0.0)
        return _maybe_scalar(out, scalar)

    def cdf(self, x):
        s, scalar = _as_float_array(x)
        s = np.clip(s - self.location, -self.scale, self.scale)
        z = self.scale
        out = -(s**3) / (4.0 * z**3) + 3.0 * s / (4.0 * z) + 0.5
        return _maybe_scalar(np.clip(out, 0.0, 1.0), scalar)

    def lower_partial_expectation(self, x):
        s, scalar = _as_float_array(x)
        s = np.clip(s - self.location, -self.scale, self.scale)
        z = self.scale
        out = -3.0 * np.square(z**2 - np.square(s)) / (16.0 * z**3)
        return _maybe_scalar(out, scalar)

    def quantile(self, p):
        self._check_prob(p)
        lo, hi = self.support()
        return optimize.brentq(lambda t: self.cdf(t) - p, lo, hi, xtol=1e-14)


@dataclass(frozen=True)
class Biweight(_BoundedMixin, ThresholdDistribution):
    """Biweight (quartic kernel) threshold on [tau - zeta, tau + zeta]."""

    kind: ClassVar[str] = "biweight"

    def pdf(self, x):
        s, scalar = _as_float_array(x)
        s = s - self.location
        z = self.scale
        out = np.where(
            np.abs(s) <= z,
            15.0 * np.square(z**2 - np.square(s)) / (16.0 * z**5),
            0.0,
        )
        return _maybe_scalar(out, scalar)

    def cdf(self, x):
        s, scalar = _as_float_array(x)
        s = np.clip(s - self.location, -self.scale, self.scale)
        z = self.scale
        out = 0.5 + 15.0 * s / (16.0 * z) - 5.0 * s**3 / (8.0 * z**3) + 3.0 * s**5 / (16.0 * z**5)
        return _maybe_scalar(np.clip(out, 0.0, 1.0), scalar)

    def lower_partial_expectation(self, x):
        s, scalar = _as_float_array(x)
        s = np.clip(s - self.location, -self.scale, self.scale)
        z = self.scale
        out = -5.0 * (z**2 - np.square(s)) ** 3 / (32.0 * z**5)
        return _maybe_scalar(out, scalar)

    def quantile(self, p):
        self._check_prob(p)
        lo, hi = self.support()
        return optimize.brentq(lambda t: self.cdf(t) - p, lo, hi, xtol=1e-14)


@dataclass(frozen=True)
class Logistic(ThresholdDistribution):
    """Logistic threshold with mean tau and scale gamma.

    ``cdf(x) = 1 / (1 + exp(-(x - tau) / gamma))``.
    """

    kind: ClassVar[str] = "logistic"

    def pdf(self, x):
        s, scalar = _as_float_array(x)
        z = (s - self.location) / self.scale
        p = special.expit(z)
        out = p * (1.0 - p) / self.scale
        return _maybe_scalar(out, scalar)

    def cdf(self, x):
        s, scalar = _as_float_array(x)
        out = special.expit((s - self.location) / self.scale)
        return _maybe_scalar(out, scalar)

    def lower_partial_expectation(self, x):
        # L(x) = s*(F(x) - 1) - gamma*softplus(-s/gamma); both terms decay
        # exponentially on the right and cancel to O(exp(s/gamma)) on the left.
        s, scalar = _as_float_array(x)
        s = s - self.location
        z = s / self.scale
        out = -s * special.expit(-z) - self.scale * np.logaddexp(0.0, -z)
        return _maybe_scalar(out, scalar)

    def quantile(self, p):
        self._check_prob(p)
        return self.location + self.scale * math.log(p / (1.0 - p))


@dataclass(frozen=True)
class Normal(ThresholdDistribution):
    """Gaussian threshold with mean tau and standard deviation gamma."""

    kind: ClassVar[str] = "normal"

    def pdf(self, x):
        s, scalar = _as_float_array(x)
        out = _phi((s - self.location) / self.scale) / self.scale
        return _maybe_scalar(out, scalar)

    def cdf(self, x):
        s, scalar = _as_float_array(x)
        out = special.ndtr((s - self.location) / self.scale)
        return _maybe_scalar(out, scalar)

    def lower_partial_expectation(self, x):
        s, scalar = _as_float_array(x)
        out = -self.scale * _phi((s - self.location) / self.scale)
        return _maybe_scalar(out, scalar)

    def quantile(self, p):
        self._check_prob(p)
        return self.location + self.scale * float(special.ndtri(p))


@dataclass(frozen=True)
class SkewNormal(ThresholdDistribution):
    """Skew-normal threshold with location xi, scale gamma, and slant lam.

    The change-point is the mean,

        tau = xi + gamma * delta * sqrt(2/pi),   delta = lam / sqrt(1 + lam^2),

    so the distribution still centres the phase transition at ``tau`` while
    ``lam`` tilts how fast units switch on either side.  ``lam = 0`` reduces
    exactly to :class:`Normal`.
    """

    lam: float = 0.0

    kind: ClassVar[str] = "skew-normal"

    def __post_init__(self):
        super().__post_init__()
        if not np.isfinite(self.lam):
            raise ParameterDomainError("slant parameter must be finite")

    @property
    def shape(self):
        return self.lam

    def with_params(self, location=None, scale=None, shape=None):
        return replace(
            self,
            location=self.location if location is None else float(location),
            scale=self.scale if scale is None else float(scale),
            lam=self.lam if shape is None else float(shape),
        )

    @property
    def delta(self) -> float:
        return self.lam / math.sqrt(1.0 + self.lam**2)

    def mean(self) -> float:
        return self.location + self.scale * self.delta * math.sqrt(2.0 / math.pi)

    def pdf(self, x):
        s, scalar = _as_float_array(x)
        u = (s - self.location) / self.scale
        out = 2.0 / self.scale * _phi(u) * special.ndtr(self.lam * u)
        return _maybe_scalar(out, scalar)

    def cdf(self, x):
        s, scalar = _as_float_array(x)
        u = (s - self.location) / self.scale
        out = special.ndtr(u) - 2.0 * special.owens_t(u, self.lam)
        return _maybe_scalar(np.clip(out, 0.0, 1.0), scalar)

    def lower_partial_expectation(self, x):
        # Closed form from integrating u * 2*phi(u)*Phi(lam*u) by parts:
        #   int_{-inf}^{u0} u f_Z(u) du
        #       = -2 phi(u0) Phi(lam u0) + delta sqrt(2/pi) Phi(u0 sqrt(1+lam^2))
        s, scalar = _as_float_array(x)
        u0 = (s - self.location) / self.scale
        m = self.delta * math.sqrt(2.0 / math.pi)
        partial_first_moment = -2.0 * _phi(u0) * special.ndtr(self.lam * u0) + m * special.ndtr(
            u0 * math.sqrt(1.0 + self.lam**2)
        )
        fz = special.ndtr(u0) - 2.0 * special.owens_t(u0, self.lam)
        out = self.scale * (partial_first_moment - m * fz)
        return _maybe_scalar(np.minimum(out, 0.0), scalar)

    def quantile(self, p):
        self._check_prob(p)
        lo = self.location - 16.0 * self.scale
        hi = self.location + 16.0 * self.scale
        return optimize.brentq(lambda t: self.cdf(t) - p, lo, hi, xtol=1e-13)


@dataclass(frozen=True)
class NonStandardT2(ThresholdDistribution):
    """Student-t threshold with 2 degrees of freedom and squared-length scale.

    Parameterised so that ``cdf(x) = (1 + s/sqrt(s^2 + gamma))/2`` with
    ``s = x - tau``; the stored ``scale`` is ``gamma = 2*sigma^2`` where
    ``sigma`` is the conventional t scale.  The mean exists (barely), the
    variance does not, so the induced bend has the slowest admissible tails.
    """

    kind: ClassVar[str] = "t2"

    @property
    def x_scale(self) -> float:
        return math.sqrt(self.scale)

    def pdf(self, x):
        s, scalar = _as_float_array(x)
        s = s - self.location
        out = 0.5 * self.scale * np.power(np.square(s) + self.scale, -1.5)
        return _maybe_scalar(out, scalar)

    def cdf(self, x):
        s, scalar = _as_float_array(x)
        s = s - self.location
        out = 0.5 * (1.0 + s / np.sqrt(np.square(s) + self.scale))
        return _maybe_scalar(out, scalar)

    def lower_partial_expectation(self, x):
        s, scalar = _as_float_array(x)
        s = s - self.location
        out = -0.5 * self.scale / np.sqrt(np.square(s) + self.scale)
        return _maybe_scalar(out, scalar)

    def quantile(self, p):
        self._check_prob(p)
        return self.location + math.sqrt(self.scale) * (2.0 * p - 1.0) / (
            2.0 * math.sqrt(p * (1.0 - p))
        )


@dataclass(frozen=True)
class ExponentiatedUniform(ThresholdDistribution):
    """Power-law threshold on the asymmetric interval (z1, z2].

    ``cdf(x) = ((x - z1) / (z2 - z1))**(k - 1)`` with ``z1 = tau - (k-1)*zeta``
    and ``z2 = tau + zeta``; ``k > 1`` keeps the induced bend continuously
    differentiable and ``k = 2`` recovers the uniform case.  The stored
    ``location`` is the mean ``tau``.
    """

    k: float = 2.0

    kind: ClassVar[str] = "exponentiated-uniform"
    bounded: ClassVar[bool] = True

    def __post_init__(self):
        super().__post_init__()
        if not (np.isfinite(self.k) and self.k > 1.0):
            raise ParameterDomainError(f"exponent k must exceed 1, got {self.k}")

    @property
    def shape(self):
        return self.k

    def with_params(self, location=None, scale=None, shape=None):
        return replace(
            self,
            location=self.location if location is None else float(location),
            scale=self.scale if scale is None else float(scale),
            k=self.k if shape is None else float(shape),
        )

    @property
    def x_scale(self) -> float:
        return self.k * self.scale

    def support(self):
        z1 = self.location - (self.k - 1.0) * self.scale
        z2 = self.location + self.scale
        return (z1, z2)

    def _unit(self, x):
        z1, z2 = self.support()
        return (np.asarray(x, dtype=float) - z1) / (z2 - z1)

    def pdf(self, x):
        s, scalar = _as_float_array(x)
        b = self._unit(s)
        inside = (b > 0.0) & (b <= 1.0)
        width = self.k * self.scale
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = (self.k - 1.0) / width * np.power(np.where(inside, b, 1.0), self.k - 2.0)
        out = np.where(inside, dens, 0.0)
        return _maybe_scalar(out, scalar)

    def cdf(self, x):
        s, scalar = _as_float_array(x)
        b = np.clip(self._unit(s), 0.0, 1.0)
        out = np.power(b, self.k - 1.0)
        return _maybe_scalar(out, scalar)

    def lower_partial_expectation(self, x):
        s, scalar = _as_float_array(x)
        b = np.clip(self._unit(s), 0.0, 1.0)
        out = (self.k - 1.0) * self.scale * np.power(b, self.k - 1.0) * (b - 1.0)
        return _maybe_scalar(out, scalar)

    def quantile(self, p):
        self._check_prob(p)
        z1, z2 = self.support()
        return z1 + (z2 - z1) * p ** (1.0 / (self.k - 1.0))


@dataclass(frozen=True)
class Cauchy(ThresholdDistribution):
    """Cauchy threshold: the canonical counterexample.

    Its CDF is a perfectly smooth sigmoid, yet ``x * F(x)`` tends to
    ``-scale/pi`` instead of zero, so no valid smooth piecewise-linear
    approximation exists.  Expectation-based operations therefore raise.
    """

    kind: ClassVar[str] = "cauchy"
    integrable: ClassVar[bool] = False

    def pdf(self, x):
        s, scalar = _as_float_array(x)
        s = s - self.location
        out = self.scale / (math.pi * (np.square(s) + self.scale**2))
        return _maybe_scalar(out, scalar)

    def cdf(self, x):
        s, scalar = _as_float_array(x)
        s = s - self.location
        out = np.arctan(s / self.scale) / math.pi + 0.5
        return _maybe_scalar(out, scalar)

    def mean(self):
        raise NonIntegrableThresholdError("a Cauchy threshold has no mean")

    def lower_partial_expectation(self, x):
        raise NonIntegrableThresholdError(
            "partial expectations of a Cauchy threshold diverge; "
            "no valid smooth approximation exists for this distribution"
        )

    def quantile(self, p):
        self._check_prob(p)
        return self.location + self.scale * math.tan(math.pi * (p - 0.5))


#: Registry of constructible kinds, keyed by their ``kind`` string.
DISTRIBUTIONS = {
    cls.kind: cls
    for cls in (
        Uniform,
        Epanechnikov,
        Biweight,
        Logistic,
        Normal,
        SkewNormal,
        NonStandardT2,
        ExponentiatedUniform,
        Cauchy,
    )
}


def make_distribution(kind: str, location: float, scale: float, shape=None):
    """Build a distribution by kind name; ``shape`` only where meaningful."""
    try:
        cls = DISTRIBUTIONS[kind]
    except KeyError:
        raise ParameterDomainError(
            f"unknown threshold distribution {kind!r}; "
            f"choose from {sorted(DISTRIBUTIONS)}"
        ) from None
    if cls is SkewNormal:
        return SkewNormal(location, scale, 0.0 if shape is None else float(shape))
    if cls is ExponentiatedUniform:
        return ExponentiatedUniform(location, scale, 2.0 if shape is None else float(shape))
    if shape is not None:
        raise ParameterDomainError(f"{kind} has no shape parameter")
    return cls(location, scale)
