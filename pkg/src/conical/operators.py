"""Operator and function catalog with generalized-monotonicity certificates.

Operators map R^n to R^n; every variant is single-valued except
:class:`Subdifferential`, which is reached only through its proximity
operator.  All ``evaluate``-style entry points are batch-aware: they accept
arrays of shape ``(..., n)`` and act on the last axis.

Certificates follow the sign convention alpha > 0 strong / cocoercive,
alpha = 0 plain monotone, alpha < 0 weak / cohypomonotone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, NotEvaluableError, ParameterError

# Returned as the comonotonicity constant of the zero operator, which is
# comonotone with every constant; downstream threshold formulas need a number.
COMONOTONE_CAP = 1e12

SYMMETRY_TOL = 1e-12


def _as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    return M


def _as_vec(v, dim=None) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    if dim is not None and v.size != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {v.size}")
    return v


def _check_symmetric(Q, name):
    if np.max(np.abs(Q - Q.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(Q))):
        raise ValueError(f"{name} must be symmetric within {SYMMETRY_TOL}")


@dataclass(frozen=True)
class MonotonicityCert:
    """Claim that an operator is alpha-monotone or alpha-comonotone."""

    kind: str  # "monotone" | "comonotone"
    alpha: float
    maximal: bool = True

    def __post_init__(self):
        if self.kind not in ("monotone", "comonotone"):
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        if not np.isfinite(self.alpha):
            raise ValueError("certificate constant must be finite")


# ---------------------------------------------------------------------------
# function catalog (the prox-friendly alpha-convex functions)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Quadratic:
    """f(x) = x'Qx/2 + b'x with symmetric Q; curvature is lambda_min(Q)."""

    Q: np.ndarray
    b: np.ndarray
    alpha_convex: float = field(init=False)

    def __post_init__(self):
        Q = _as_matrix(self.Q)
        _check_symmetric(Q, "Q")
        b = _as_vec(self.b, dim=Q.shape[0])
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "alpha_convex", float(np.linalg.eigvalsh(Q)[0]))

    @property
    def dim(self) -> int:
        return self.Q.shape[0]


@dataclass(frozen=True, eq=False)
class L1:
    """f(x) = weight * ||x||_1 (convex, curvature 0)."""

    weight: float
    alpha_convex: float = field(init=False, default=0.0)

    def __post_init__(self):
        if not (np.isfinite(self.weight) and self.weight >= 0):
            raise ValueError("weight must be a nonnegative finite number")

    @property
    def dim(self) -> None:
        return None


@dataclass(frozen=True, eq=False)
class WeaklyConvexL1:
    """f(x) = weight * ||x||_1 - (rho/2) ||x||^2, weakly convex with curvature -rho."""

    weight: float
    rho: float
    alpha_convex: float = field(init=False)

    def __post_init__(self):
        if not (np.isfinite(self.weight) and self.weight >= 0):
            raise ValueError("weight must be a nonnegative finite number")
        if not (np.isfinite(self.rho) and self.rho > 0):
            raise ValueError("rho must be a positive finite number")
        object.__setattr__(self, "alpha_convex", -float(self.rho))

    @property
    def dim(self) -> None:
        return None


@dataclass(frozen=True, eq=False)
class BoxIndicator:
    """Indicator of the box [lo, hi]: 0 inside, +inf outside (convex)."""

    lo: np.ndarray
    hi: np.ndarray
    alpha_convex: float = field(init=False, default=0.0)

    def __post_init__(self):
        lo = _as_vec(self.lo)
        hi = _as_vec(self.hi, dim=lo.size)
        if np.any(lo > hi):
            raise ValueError("box lower bounds must not exceed upper bounds")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size


FunctionSpec = Quadratic | L1 | WeaklyConvexL1 | BoxIndicator


def function_value(f: FunctionSpec, x) -> np.ndarray | float:
    """Evaluate f at x (extended real; +inf outside a box indicator).

    x may have shape (n,) or (..., n); the value has the leading shape.
    """
    x = np.asarray(x, dtype=float)
    _check_dim(x, f.dim, "function argument")
    if isinstance(f, Quadratic):
        val = 0.5 * np.einsum("...i,ij,...j", x, f.Q, x) + x @ f.b
    elif isinstance(f, L1):
        val = f.weight * np.sum(np.abs(x), axis=-1)
    elif isinstance(f, WeaklyConvexL1):
        val = f.weight * np.sum(np.abs(x), axis=-1) - 0.5 * f.rho * np.sum(x * x, axis=-1)
    elif isinstance(f, BoxIndicator):
        inside = np.all((x >= f.lo) & (x <= f.hi), axis=-1)
        val = np.where(inside, 0.0, np.inf)
    else:
        raise TypeError(f"unknown function spec {type(f).__name__}")
    return float(val) if np.ndim(val) == 0 else val


# ---------------------------------------------------------------------------
# operator catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Affine:
    """x -> Mx + b."""

    M: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        M = _as_matrix(self.M)
        b = _as_vec(self.b, dim=M.shape[0])
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return self.M.shape[0]


@dataclass(frozen=True, eq=False)
class ScaledIdentity:
    """x -> a*x, in any dimension (or a fixed one when ``dim`` is given)."""

    a: float
    dim: int | None = None

    def __post_init__(self):
        if not np.isfinite(self.a):
            raise ValueError("scale must be finite")
        if self.dim is not None and self.dim < 1:
            raise ValueError("dim must be >= 1")


@dataclass(frozen=True, eq=False)
class GradQuadratic:
    """x -> Qx + c, the gradient field of x'Qx/2 + c'x (Q symmetric)."""

    Q: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        Q = _as_matrix(self.Q)
        _check_symmetric(Q, "Q")
        c = _as_vec(self.c, dim=Q.shape[0])
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.Q.shape[0]


@dataclass(frozen=True, eq=False)
class Subdifferential:
    """Subdifferential of a catalog function; reachable only through prox."""

    f: FunctionSpec

    @property
    def dim(self) -> int | None:
        return self.f.dim


OperatorSpec = Affine | ScaledIdentity | GradQuadratic | Subdifferential


def _check_dim(x, dim, what):
    if x.shape[-1] < 1:
        raise DimensionMismatchError(f"{what} must have at least one entry")
    if dim is not None and x.shape[-1] != dim:
        raise DimensionMismatchError(f"{what} has dimension {x.shape[-1]}, expected {dim}")


def evaluate(op: OperatorSpec, x) -> np.ndarray:
    """Apply a pointwise-evaluable operator to x of shape (..., n)."""
    x = np.asarray(x, dtype=float)
    _check_dim(x, op.dim, "operator argument")
    if isinstance(op, Affine):
        return x @ op.M.T + op.b
    if isinstance(op, ScaledIdentity):
        return op.a * x
    if isinstance(op, GradQuadratic):
        return x @ op.Q.T + op.c
    if isinstance(op, Subdifferential):
        raise NotEvaluableError(
            "subdifferential operators are not pointwise-evaluable; use resolvent/prox"
        )
    raise TypeError(f"unknown operator spec {type(op).__name__}")


def certify_monotone(op: OperatorSpec) -> float:
    """Largest alpha for which the operator is alpha-monotone.

    Affine maps are tight at the smallest eigenvalue of the symmetric part;
    subdifferentials inherit the curvature of their function.
    """
    if isinstance(op, Affine):
        sym = 0.5 * (op.M + op.M.T)
        return float(np.linalg.eigvalsh(sym)[0])
    if isinstance(op, ScaledIdentity):
        return float(op.a)
    if isinstance(op, GradQuadratic):
        return float(np.linalg.eigvalsh(op.Q)[0])
    if isinstance(op, Subdifferential):
        return float(op.f.alpha_convex)
    raise TypeError(f"unknown operator spec {type(op).__name__}")


def certify_comonotone(op: OperatorSpec) -> float | None:
    """Analytic comonotonicity constant, or None when no certificate exists.

    Covered classes: scaled identities (1/a), gradient fields and symmetric
    affine maps with positive-semidefinite matrix (1/lambda_max).  The zero
    operator is comonotone with every constant and returns COMONOTONE_CAP.
    None is not a disproof, only the absence of a certified constant.
    """
    if isinstance(op, ScaledIdentity):
        if op.a == 0.0:
            return COMONOTONE_CAP
        return 1.0 / op.a
    if isinstance(op, (GradQuadratic, Affine)):
        M = op.Q if isinstance(op, GradQuadratic) else op.M
        if isinstance(op, Affine):
            if np.max(np.abs(M - M.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(M))):
                return None
            M = 0.5 * (M + M.T)
        evals = np.linalg.eigvalsh(M)
        lo, hi = float(evals[0]), float(evals[-1])
        if lo < -SYMMETRY_TOL * max(1.0, abs(hi)):
            return None
        if hi <= SYMMETRY_TOL:
            return COMONOTONE_CAP
        return 1.0 / hi
    if isinstance(op, Subdifferential):
        return None
    raise TypeError(f"unknown operator spec {type(op).__name__}")


def comonotone_constant(op: OperatorSpec) -> float:
    """Best available comonotonicity constant for algorithm builders.

    Falls back on plain monotonicity (constant 0) when the operator is
    alpha-monotone with alpha >= 0 but carries no sharper certificate;
    raises when the operator is only weakly monotone.
    """
    c = certify_comonotone(op)
    if c is not None:
        return c
    mono = certify_monotone(op)
    if mono >= 0.0:
        return 0.0
    raise ParameterError(
        f"{type(op).__name__} has no comonotonicity certificate "
        f"(monotone constant {mono} < 0)"
    )


def certs(op: OperatorSpec) -> tuple[MonotonicityCert, ...]:
    """Analytic certificates carried by a catalog operator.

    Maximality holds by construction: the pointwise-evaluable variants are
    continuous with full domain, and subdifferentials of alpha-convex
    functions are maximally alpha-monotone.
    """
    out = [MonotonicityCert("monotone", certify_monotone(op))]
    try:
        out.append(MonotonicityCert("comonotone", comonotone_constant(op)))
    except ParameterError:
        pass
    return tuple(out)
