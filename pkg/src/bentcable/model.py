"""Regression mean assembly for D >= 2 smoothly joined linear phases.

The additive form

    eta(x) = alpha1 + beta1 * x + sum_l delta_l * u_l(x - tau_l)

joins ``D`` straight regimes through ``D - 1`` bends, one per change-point,
where ``u_l`` is either the exact ramp ``max(x - tau_l, 0)`` (abrupt model)
or a family's ``smooth_max``.  ``delta_l`` is the slope change between
regimes ``l`` and ``l+1``; no prior knowledge of concavities is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .bends import BentFamily
from .errors import ParameterDomainError, ZoneOverlapError


@dataclass(frozen=True)
class Bend:
    """Bent parameters of one change-point.

    ``location`` is the change-point ``tau`` for every family except SN-BC,
    where it is the skew-normal location ``xi``; ``shape`` is the slant
    ``lam`` (SN-BC) or exponent ``k`` (G-BC) when the family has one.
    """

    location: float
    scale: float
    shape: Optional[float] = None

    def __post_init__(self):
        if not np.isfinite(self.location):
            raise ParameterDomainError("bend location must be finite")
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise ParameterDomainError("bend scale must be positive")


@dataclass(frozen=True)
class ParamVector:
    """Full parameter set of a D-phase model.

    ``deltas`` and ``bends`` have length ``D - 1``; ``sigma2`` is the error
    variance of the Gaussian observation model.
    """

    alpha1: float
    beta1: float
    deltas: tuple
    bends: tuple
    sigma2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        object.__setattr__(self, "bends", tuple(self.bends))
        if len(self.deltas) != len(self.bends) or not self.bends:
            raise ParameterDomainError(
                "need one delta and one bend per change-point (D >= 2)"
            )
        if not (np.isfinite(self.sigma2) and self.sigma2 > 0):
            raise ParameterDomainError("sigma2 must be positive")

    @property
    def n_phases(self) -> int:
        return len(self.deltas) + 1

    def slopes(self) -> tuple:
        """Per-phase slopes (beta_1, ..., beta_D)."""
        return tuple(self.beta1 + float(np.sum(self.deltas[:l])) for l in range(self.n_phases))

    def with_linear(self, alpha1, beta1, deltas, sigma2=None):
        return replace(
            self,
            alpha1=float(alpha1),
            beta1=float(beta1),
            deltas=tuple(float(d) for d in deltas),
            sigma2=self.sigma2 if sigma2 is None else float(sigma2),
        )


def phase_families(params: ParamVector, family: BentFamily) -> tuple:
    """Bind each bend's parameters to the family, validating the layout.

    Change-points must be strictly increasing and, for bounded-support
    families, adjacent transition zones must not overlap (the route
    equivalences only hold for disjoint smoothing neighbourhoods).
    """
    bound = tuple(
        family.with_params(location=b.location, scale=b.scale, shape=b.shape)
        for b in params.bends
    )
    taus = [f.change_point for f in bound]
    if any(t2 <= t1 for t1, t2 in zip(taus, taus[1:])):
        raise ParameterDomainError("change-point locations must strictly increase")
    if family.bounded:
        for left, right in zip(bound, bound[1:]):
            if left.dist.support()[1] >= right.dist.support()[0]:
                raise ZoneOverlapError(
                    "adjacent transition zones overlap: "
                    f"{left.dist.support()} vs {right.dist.support()}"
                )
    return bound


def eta(params: ParamVector, family: BentFamily, x):
    """Smooth model mean at ``x``."""
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    out = params.alpha1 + params.beta1 * x_arr
    for delta, bend_family in zip(params.deltas, phase_families(params, family)):
        out = out + delta * bend_family.smooth_max(x_arr)
    return float(out) if scalar else out


def eta_abrupt(params: ParamVector, x, family: Optional[BentFamily] = None):
    """Piecewise-linear mean with exact kinks.

    Without ``family``, bend locations are taken as the change-points; pass
    the family for parameterisations whose location is not the mean (SN-BC).
    """
    if family is not None:
        taus = [f.change_point for f in phase_families(params, family)]
    else:
        taus = [b.location for b in params.bends]
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    out = params.alpha1 + params.beta1 * x_arr
    for delta, tau in zip(params.deltas, taus):
        out = out + delta * np.maximum(x_arr - tau, 0.0)
    return float(out) if scalar else out


@dataclass(frozen=True)
class SignFormParams:
    """Two-phase parameters in the sign formulation.

    ``eta(x) = theta0 + theta1 (x - tau) + theta2 (x - tau) sgn(x - tau)``
    with ``theta0 = alpha1 + beta1 tau``, ``theta1 = (beta1 + beta2)/2`` and
    ``theta2 = (beta2 - beta1)/2``; the sign of ``theta2`` is the concavity.
    """

    theta0: float
    theta1: float
    theta2: float
    tau: float


def to_sign_form(params: ParamVector, family: Optional[BentFamily] = None) -> SignFormParams:
    """Reparameterise a two-phase model into the sign formulation."""
    if params.n_phases != 2:
        raise ParameterDomainError("the sign formulation is defined for D = 2 only")
    if family is not None:
        tau = phase_families(params, family)[0].change_point
    else:
        tau = params.bends[0].location
    delta = params.deltas[0]
    return SignFormParams(
        theta0=params.alpha1 + params.beta1 * tau,
        theta1=params.beta1 + delta / 2.0,
        theta2=delta / 2.0,
        tau=tau,
    )


def from_sign_form(sf: SignFormParams, bends, sigma2: float = 1.0) -> ParamVector:
    """Inverse of :func:`to_sign_form`; ``bends`` supplies the bend parameters."""
    beta1 = sf.theta1 - sf.theta2
    delta = 2.0 * sf.theta2
    alpha1 = sf.theta0 - beta1 * sf.tau
    return ParamVector(alpha1, beta1, (delta,), tuple(bends), sigma2)


def eta_sign_form(sf: SignFormParams, family: BentFamily, x):
    """Sign-formulation mean with the family's smooth sign replacement.

    Uses the identity ``s * trn_or_hyp(s) = 2 * smooth_max(x) - s`` so the
    removable singularity of hyperbolic factors never surfaces.
    """
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    s = x_arr - sf.tau
    smoothed_abs = 2.0 * family.smooth_max(x_arr) - s
    out = sf.theta0 + sf.theta1 * s + sf.theta2 * smoothed_abs
    return float(out) if scalar else out
