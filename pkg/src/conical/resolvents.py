"""Resolvents, proximity operators, and the certificates they inherit.

Every resolvent here is closed-form: linear solves for affine-type
operators and componentwise formulas for the prox catalog.  Preconditions
come from the operator's monotonicity certificates: an alpha-monotone
operator needs 1 + gamma*alpha > 0, an alpha-comonotone one needs
gamma + alpha > 0; either suffices for single-valuedness.
"""

from __future__ import annotations

import warnings

import numpy as np

from .calculus import ConicalCert, ScaledConicalCert
from .errors import ParameterError
from .operators import (
    Affine,
    BoxIndicator,
    FunctionSpec,
    GradQuadratic,
    L1,
    OperatorSpec,
    Quadratic,
    ScaledIdentity,
    Subdifferential,
    WeaklyConvexL1,
    certify_comonotone,
    certify_monotone,
    _check_dim,
)

# below this margin the weakly convex prox is numerically delicate
WEAK_PROX_MARGIN = 1e-6


def _soft_threshold(x, t):
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def _solve_shifted(M: np.ndarray, gamma: float, b: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Solve (I + gamma*M) y = x - gamma*b for x of shape (..., n)."""
    n = M.shape[0]
    A = np.eye(n) + gamma * M
    rhs = x - gamma * b
    try:
        flat = rhs.reshape(-1, n)
        y = np.linalg.solve(A, flat.T).T
    except np.linalg.LinAlgError as exc:
        raise ParameterError(f"singular resolvent system (I + gamma*M): {exc}") from exc
    return y.reshape(x.shape)


def check_resolvent_params(op: OperatorSpec, gamma: float) -> None:
    """Raise unless some certificate makes the resolvent single-valued.

    Accepts the operator when 1 + gamma*alpha > 0 for its monotone
    constant or gamma + alpha > 0 for its comonotone constant.
    """
    if not (np.isfinite(gamma) and gamma > 0):
        raise ParameterError(f"gamma must be positive, got {gamma}")
    mono = certify_monotone(op)
    if 1.0 + gamma * mono > 0.0:
        return
    co = certify_comonotone(op)
    if co is not None and gamma + co > 0.0:
        return
    parts = [f"1 + gamma*alpha = {1.0 + gamma * mono} <= 0 (alpha = {mono} monotone)"]
    if co is not None:
        parts.append(f"gamma + alpha = {gamma + co} <= 0 (alpha = {co} comonotone)")
    raise ParameterError("resolvent undefined at gamma = %s: %s" % (gamma, "; ".join(parts)))


def resolvent(op: OperatorSpec, gamma: float, x) -> np.ndarray:
    """Evaluate (Id + gamma*op)^{-1} at x (shape (..., n))."""
    check_resolvent_params(op, gamma)
    x = np.asarray(x, dtype=float)
    _check_dim(x, op.dim, "resolvent argument")
    if isinstance(op, ScaledIdentity):
        return x / (1.0 + gamma * op.a)
    if isinstance(op, Affine):
        return _solve_shifted(op.M, gamma, op.b, x)
    if isinstance(op, GradQuadratic):
        return _solve_shifted(op.Q, gamma, op.c, x)
    if isinstance(op, Subdifferential):
        return prox(op.f, gamma, x)
    raise TypeError(f"unknown operator spec {type(op).__name__}")


def prox(f: FunctionSpec, gamma: float, x) -> np.ndarray:
    """Proximity operator argmin_z f(z) + ||z - x||^2 / (2*gamma).

    Well-defined (unique minimizer, full domain) whenever
    1 + gamma * f.alpha_convex > 0.
    """
    if not (np.isfinite(gamma) and gamma > 0):
        raise ParameterError(f"gamma must be positive, got {gamma}")
    margin = 1.0 + gamma * f.alpha_convex
    if margin <= 0.0:
        raise ParameterError(
            f"prox undefined: 1 + gamma*alpha = {margin} <= 0 "
            f"(gamma = {gamma}, alpha = {f.alpha_convex})"
        )
    x = np.asarray(x, dtype=float)
    _check_dim(x, f.dim, "prox argument")
    if isinstance(f, Quadratic):
        return _solve_shifted(f.Q, gamma, f.b, x)
    if isinstance(f, L1):
        return _soft_threshold(x, gamma * f.weight)
    if isinstance(f, WeaklyConvexL1):
        if margin < WEAK_PROX_MARGIN:
            warnings.warn(
                f"weakly convex prox close to its breakdown: 1 - gamma*rho = {margin}",
                RuntimeWarning,
                stacklevel=2,
            )
        return _soft_threshold(x, gamma * f.weight) / margin
    if isinstance(f, BoxIndicator):
        return np.clip(x, f.lo, f.hi)
    raise TypeError(f"unknown function spec {type(f).__name__}")


def relaxed_resolvent(op: OperatorSpec, gamma: float, lam: float, x) -> np.ndarray:
    """(1 - lam) x + lam * resolvent(op, gamma, x) with lam >= 0."""
    if not (np.isfinite(lam) and lam >= 0):
        raise ParameterError(f"lam must be nonnegative, got {lam}")
    x = np.asarray(x, dtype=float)
    return (1.0 - lam) * x + lam * resolvent(op, gamma, x)


def reflected_resolvent(op: OperatorSpec, gamma: float, x) -> np.ndarray:
    """The relaxed resolvent at lam = 2."""
    return relaxed_resolvent(op, gamma, 2.0, x)


def cert_resolvent_comonotone(alpha: float, gamma: float, lam: float = 1.0) -> ConicalCert:
    """Certificate of (1-lam)Id + lam*J for an alpha-comonotone operator.

    Valid for gamma + alpha > 0; the constant is lam*gamma / (2*(gamma+alpha)).
    lam = 1 gives the resolvent itself.
    """
    if not (np.isfinite(gamma) and gamma > 0):
        raise ParameterError(f"gamma must be positive, got {gamma}")
    if not (np.isfinite(lam) and lam > 0):
        raise ParameterError(f"lam must be positive, got {lam}")
    if gamma + alpha <= 0:
        raise ParameterError(f"gamma + alpha = {gamma + alpha} must be positive")
    return ConicalCert(lam * gamma / (2.0 * (gamma + alpha)))


def cert_resolvent_monotone(alpha: float, gamma: float, lam: float) -> ScaledConicalCert:
    """Certificate of the scaled relaxed resolvent of an alpha-monotone operator.

    For lam > 1 and 1 + gamma*alpha > 0, the map R = (1-lam)Id + lam*J
    satisfies: (1/(1-lam)) R is conically lam / (2*(lam-1)*(1+gamma*alpha))
    averaged.  The certificate describes the scaled map, not R itself.
    """
    if not (np.isfinite(gamma) and gamma > 0):
        raise ParameterError(f"gamma must be positive, got {gamma}")
    if 1.0 + gamma * alpha <= 0:
        raise ParameterError(f"1 + gamma*alpha = {1.0 + gamma * alpha} must be positive")
    if not (np.isfinite(lam) and lam > 1):
        raise ParameterError(f"lam must exceed 1, got {lam}")
    theta = lam / (2.0 * (lam - 1.0) * (1.0 + gamma * alpha))
    return ScaledConicalCert(1.0 / (1.0 - lam), theta)


def cert_forward_step(beta: float, gamma: float) -> ConicalCert:
    """Certificate of Id - gamma*B for a beta-cocoercive B: gamma/(2*beta)."""
    if not (np.isfinite(beta) and beta > 0):
        raise ParameterError(f"beta must be positive, got {beta}")
    if not (np.isfinite(gamma) and gamma > 0):
        raise ParameterError(f"gamma must be positive, got {gamma}")
    return ConicalCert(gamma / (2.0 * beta))


def comonotone_graph_inequality(alpha: float, gamma: float, x, y, a, b) -> float:
    """Slack of the resolvent-graph inequality for alpha-comonotone operators.

    For (x, a) and (y, b) input/output pairs of J with parameter gamma,
    returns (gamma+2*alpha)<x-y, a-b> - alpha||x-y||^2 - (gamma+alpha)||a-b||^2,
    which is nonnegative exactly when the underlying operator is
    alpha-comonotone.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not (x.shape == y.shape == a.shape == b.shape):
        raise ParameterError("all four points must share one shape")
    dx = x - y
    da = a - b
    return float(
        (gamma + 2.0 * alpha) * np.dot(dx, da)
        - alpha * np.dot(dx, dx)
        - (gamma + alpha) * np.dot(da, da)
    )
