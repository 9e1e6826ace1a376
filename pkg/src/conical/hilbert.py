"""Finite-dimensional inner-product primitives and two norm identities.

Everything here works on plain 1-D float arrays.  The two residual
functions measure how far a (sigma, tau, s, t) tuple is from satisfying
the algebraic identities used throughout the certificate calculus; in
exact arithmetic both residuals are zero for every admissible input.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, ParameterError

# scale-aware guard for the sigma + tau ~ 0 exclusion of the second identity
SUM_EPS = 1e-14


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Validate ``x`` as a finite 1-D float vector of length >= 1."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError(f"expected a 1-D vector with at least one entry, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    if dim is not None and v.size != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {v.size}")
    return v


def inner(a, b) -> float:
    """Euclidean inner product sum_i a_i b_i."""
    a = as_vector(a)
    b = as_vector(b, dim=a.size)
    return float(np.dot(a, b))


def norm(a) -> float:
    """Euclidean norm."""
    return float(np.linalg.norm(as_vector(a)))


def identity_residual(sigma: float, tau: float, s, t) -> float:
    """Residual of the expansion of ||sigma*s + tau*t||^2.

    Returns ``| ||sigma*s+tau*t||^2 - (sigma(sigma+tau)||s||^2
    + tau(sigma+tau)||t||^2 - sigma*tau*||s-t||^2) |``.
    """
    s = as_vector(s)
    t = as_vector(t, dim=s.size)
    lhs = np.dot(sigma * s + tau * t, sigma * s + tau * t)
    d = s - t
    rhs = (
        sigma * (sigma + tau) * np.dot(s, s)
        + tau * (sigma + tau) * np.dot(t, t)
        - sigma * tau * np.dot(d, d)
    )
    return float(abs(lhs - rhs))


def identity2_residual(sigma: float, tau: float, s, t) -> float:
    """Residual of the weighted-mean form of the norm identity.

    Requires sigma + tau bounded away from zero; the identity itself is
    undefined on that line.
    """
    s = as_vector(s)
    t = as_vector(t, dim=s.size)
    if abs(sigma + tau) <= SUM_EPS * (abs(sigma) + abs(tau) + 1.0):
        raise ParameterError(f"sigma + tau = {sigma + tau!r} is too close to zero")
    lhs = sigma * np.dot(s, s) + tau * np.dot(t, t)
    u = sigma * s + tau * t
    d = s - t
    rhs = np.dot(u, u) / (sigma + tau) + sigma * tau / (sigma + tau) * np.dot(d, d)
    return float(abs(lhs - rhs))
