"""The algebra of conical-averagedness constants.

A certificate is just a positive number theta: theta < 1 is classical
averagedness, theta = 1 nonexpansiveness, theta > 1 the strictly conical
regime.  The rules here transform certificates under relaxation, convex
combination and composition, each guarded by the exact hypotheses under
which the transformed certificate is known to hold.  No nonexpansive
factor is ever materialized; the oracle module samples the defining
inequality when a certificate needs semantic checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CompositionError, ParameterError

# inputs are user-specified exact-ish rationals; boundary comparisons absolute
ONE_TOL = 1e-12


@dataclass(frozen=True)
class ConicalCert:
    """Claim that a map is conically theta-averaged."""

    theta: float

    def __post_init__(self):
        if not (np.isfinite(self.theta) and self.theta > 0):
            raise ParameterError(f"conical constant must be positive, got {self.theta}")


@dataclass(frozen=True)
class ScaledConicalCert:
    """Claim that omega*T is conically theta-averaged (omega != 0)."""

    omega: float
    theta: float

    def __post_init__(self):
        if not (np.isfinite(self.omega) and self.omega != 0):
            raise ParameterError(f"scaling must be nonzero, got {self.omega}")
        if not (np.isfinite(self.theta) and self.theta > 0):
            raise ParameterError(f"conical constant must be positive, got {self.theta}")


def _check_positive(name, value):
    if not (np.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be positive, got {value}")


def relax(theta: float, lam: float) -> float:
    """Certificate of the relaxation (1-lam)*Id + lam*T: lam*theta."""
    _check_positive("theta", theta)
    _check_positive("lam", lam)
    return lam * theta


def convex_combination(thetas, weights) -> float:
    """Certificate of sum_i w_i T_i: the weighted mean sum_i w_i theta_i."""
    thetas = [float(t) for t in thetas]
    weights = [float(w) for w in weights]
    if len(thetas) != len(weights) or not thetas:
        raise ParameterError("thetas and weights must be nonempty lists of equal length")
    for t in thetas:
        _check_positive("theta", t)
    for w in weights:
        _check_positive("weight", w)
    if abs(sum(weights) - 1.0) > ONE_TOL:
        raise ParameterError(f"weights must sum to 1 within {ONE_TOL}, got {sum(weights)}")
    return sum(w * t for w, t in zip(weights, thetas))


def _is_one(theta: float) -> bool:
    return abs(theta - 1.0) <= ONE_TOL


def compose2(theta1: float, theta2: float) -> float:
    """Certificate of a two-map composition.

    Requires theta1 = theta2 = 1 (then the composition is nonexpansive) or
    theta1*theta2 < 1 (then the certified constant is
    (theta1 + theta2 - 2*theta1*theta2) / (1 - theta1*theta2)).
    The boundary theta1*theta2 = 1 with unequal factors carries no
    certificate and is rejected.
    """
    _check_positive("theta1", theta1)
    _check_positive("theta2", theta2)
    if _is_one(theta1) and _is_one(theta2):
        return 1.0
    p = theta1 * theta2
    if p >= 1.0 - ONE_TOL:
        raise CompositionError(
            f"composition not covered: theta1*theta2 = {p} >= 1 and not both equal to 1"
        )
    return (theta1 + theta2 - 2.0 * p) / (1.0 - p)


def compose_scaled(c1: ScaledConicalCert, c2: ScaledConicalCert) -> ScaledConicalCert:
    """Certificate of the scaled composition: constants multiply, thetas compose.

    Order-independent: T2 T1 and T1 T2 receive the same certificate.
    """
    return ScaledConicalCert(c1.omega * c2.omega, compose2(c1.theta, c2.theta))


class ComposeManyResult(NamedTuple):
    theta: float
    nonexpansive_only: bool


def compose_many(thetas) -> ComposeManyResult:
    """Certificate of an m-fold composition, checked in the given order.

    With every theta_i <= 1 and some theta_i = 1 only nonexpansiveness is
    certified (``nonexpansive_only`` is set and theta is 1).  Otherwise all
    theta_i must differ from 1 and each prefix must satisfy the chain
    condition theta_k < 1 + 1/sum_{i<k} theta_i/(1-theta_i); the result is
    theta = 1/(1 + 1/sum_i theta_i/(1-theta_i)).

    The chain condition is order-sensitive; no permutation search is done
    here (see :func:`conical.oracle.find_admissible_order`).
    """
    thetas = [float(t) for t in thetas]
    if len(thetas) < 2:
        raise ParameterError("need at least two certificates to compose")
    for t in thetas:
        _check_positive("theta", t)
    if any(_is_one(t) for t in thetas):
        if max(thetas) <= 1.0 + ONE_TOL:
            return ComposeManyResult(1.0, True)
        raise CompositionError(
            "composition not covered: mixes a factor equal to 1 with a factor above 1"
        )
    ratios = [t / (1.0 - t) for t in thetas]
    partial = ratios[0]
    for k in range(1, len(thetas)):
        # partial is never 0 along an admissible chain
        bound = 1.0 + 1.0 / partial
        if not thetas[k] < bound:
            raise CompositionError(
                f"chain condition violated at position {k + 1}: "
                f"theta = {thetas[k]} >= {bound}"
            )
        partial += ratios[k]
    if partial == 0.0:
        raise CompositionError("degenerate chain: certificate ratios cancel exactly")
    return ComposeManyResult(1.0 / (1.0 + 1.0 / partial), False)


def firmly_nonexpansive_shift(lam: float) -> float:
    """Certificate of Id - lam*T for firmly nonexpansive T: lam/2."""
    _check_positive("lam", lam)
    return lam / 2.0
