"""Brute-force verifiers, independent of the closed-form code paths.

Sampling falsifiers check certified inequalities on random pairs with
scale-aware slack; grid oracles recover proximal points and solutions by
one-dimensional search; trace diagnostics test the o(1/sqrt(n)) residual
statistic.  Nothing here reuses a closed-form prox/resolvent formula for
the quantity it is checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .calculus import ONE_TOL, compose_many
from .errors import CompositionError, ParameterError
from .operators import (
    Affine,
    BoxIndicator,
    FunctionSpec,
    GradQuadratic,
    OperatorSpec,
    Quadratic,
    ScaledIdentity,
    Subdifferential,
    evaluate,
    function_value,
)
from .resolvents import prox

DEFAULT_BOX = 10.0
DEFAULT_SAMPLES = 10000
SLACK_TOL = 1e-9
GRID_POINTS = 10000
GOLDEN_TOL = 1e-8

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SampleReport:
    """Outcome of a sampled inequality check.

    ``worst_slack`` is the most negative normalized slack seen (slack
    divided by a per-pair scale); the verdict is "fail" exactly when it
    drops below -tol, in which case ``witness`` holds the offending pair.
    """

    n_samples: int
    worst_slack: float
    witness: tuple[np.ndarray, np.ndarray] | None
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _report(slacks, scales, X, Y, tol) -> SampleReport:
    normalized = slacks / scales
    i = int(np.argmin(normalized))
    worst = float(normalized[i])
    if worst < -tol:
        return SampleReport(len(slacks), worst, (X[i].copy(), Y[i].copy()), "fail")
    return SampleReport(len(slacks), worst, None, "pass")


def _sample_box(rng, n, dim, box):
    if np.isscalar(box):
        lo, hi = -float(box), float(box)
    else:
        lo, hi = float(box[0]), float(box[1])
    return rng.uniform(lo, hi, size=(n, dim))


def sample_conical_check(
    T,
    theta: float,
    dim: int,
    box=DEFAULT_BOX,
    n: int = DEFAULT_SAMPLES,
    tol: float = SLACK_TOL,
    seed: int = 0,
) -> SampleReport:
    """Sample the defining inequality of conical theta-averagedness.

    T must accept arrays of shape (m, dim).  For each sampled pair the
    slack of

        ||Tx-Ty||^2 <= ||x-y||^2 - ((1-theta)/theta) ||(Id-T)x-(Id-T)y||^2

    is recorded, normalized by 1 + the largest compared squared norm.  The
    algebraically equivalent inner-product form

        ||Tx-Ty||^2 + (1-2theta)||x-y||^2 <= 2(1-theta) <x-y, Tx-Ty>

    is evaluated as well; a verdict disagreement between the two forms
    indicates an implementation bug and raises.
    """
    if not (np.isfinite(theta) and theta > 0):
        raise ParameterError(f"theta must be positive, got {theta}")
    rng = np.random.default_rng(seed)
    X = _sample_box(rng, n, dim, box)
    Y = _sample_box(rng, n, dim, box)
    TX = np.asarray(T(X), dtype=float)
    TY = np.asarray(T(Y), dtype=float)

    d = X - Y
    td = TX - TY
    rd = d - td
    sq_d = np.sum(d * d, axis=-1)
    sq_td = np.sum(td * td, axis=-1)
    sq_rd = np.sum(rd * rd, axis=-1)
    ip = np.sum(d * td, axis=-1)

    scale = 1.0 + np.maximum(sq_d, np.maximum(sq_td, sq_rd))
    slack_sub = sq_d - (1.0 - theta) / theta * sq_rd - sq_td
    slack_ip = 2.0 * (1.0 - theta) * ip - sq_td - (1.0 - 2.0 * theta) * sq_d

    rep = _report(slack_sub, scale, X, Y, tol)
    rep_ip = _report(slack_ip, theta * scale, X, Y, tol)
    if rep.verdict != rep_ip.verdict:
        raise RuntimeError(
            "the two equivalent averagedness forms disagree "
            f"({rep.worst_slack} vs {rep_ip.worst_slack}); implementation bug"
        )
    return rep


def _graph_pairs(op: OperatorSpec, X, prox_gamma):
    """Points/values on the operator graph; prox-generated for subdifferentials."""
    if isinstance(op, Subdifferential):
        f = op.f
        if prox_gamma is None:
            a = f.alpha_convex
            prox_gamma = 1.0 if 1.0 + a > 0.5 else 0.5 / (-a)
        P = prox(f, prox_gamma, X)
        return P, (X - P) / prox_gamma
    return X, evaluate(op, X)


def sample_monotonicity_check(
    op: OperatorSpec,
    alpha: float,
    kind: str,
    dim: int | None = None,
    box=DEFAULT_BOX,
    n: int = DEFAULT_SAMPLES,
    tol: float = SLACK_TOL,
    seed: int = 0,
    prox_gamma: float | None = None,
) -> SampleReport:
    """Sample a monotone (<x-y,u-v> >= alpha||x-y||^2) or comonotone
    (>= alpha||u-v||^2) claim on graph pairs of the operator.

    Subdifferential variants are sampled through prox-generated graph
    pairs; everything else is evaluated pointwise.
    """
    if kind not in ("monotone", "comonotone"):
        raise ParameterError(f"unknown certificate kind {kind!r}")
    dim = dim if dim is not None else op.dim
    if dim is None:
        raise ParameterError("dimension undetermined; pass dim explicitly")
    rng = np.random.default_rng(seed)
    WX = _sample_box(rng, n, dim, box)
    WY = _sample_box(rng, n, dim, box)
    X, U = _graph_pairs(op, WX, prox_gamma)
    Y, V = _graph_pairs(op, WY, prox_gamma)

    dx = X - Y
    du = U - V
    sq_dx = np.sum(dx * dx, axis=-1)
    sq_du = np.sum(du * du, axis=-1)
    ip = np.sum(dx * du, axis=-1)
    slack = ip - alpha * (sq_dx if kind == "monotone" else sq_du)
    scale = 1.0 + np.maximum(sq_dx, sq_du)
    return _report(slack, scale, X, Y, tol)


def sample_alpha_convexity_check(
    f: FunctionSpec,
    alpha: float,
    dim: int | None = None,
    box=DEFAULT_BOX,
    n: int = DEFAULT_SAMPLES,
    tol: float = SLACK_TOL,
    seed: int = 0,
) -> SampleReport:
    """Sample the curvature inequality

        f((1-k)x + k y) + (alpha/2) k (1-k) ||x-y||^2
            <= (1-k) f(x) + k f(y)

    on random pairs and mixing weights.  Box indicators are sampled inside
    their box, where the inequality is finite.
    """
    dim = dim if dim is not None else f.dim
    if dim is None:
        raise ParameterError("dimension undetermined; pass dim explicitly")
    rng = np.random.default_rng(seed)
    if isinstance(f, BoxIndicator):
        X = f.lo + rng.uniform(0.0, 1.0, size=(n, dim)) * (f.hi - f.lo)
        Y = f.lo + rng.uniform(0.0, 1.0, size=(n, dim)) * (f.hi - f.lo)
    else:
        X = _sample_box(rng, n, dim, box)
        Y = _sample_box(rng, n, dim, box)
    K = rng.uniform(0.01, 0.99, size=n)
    mid = (1.0 - K)[:, None] * X + K[:, None] * Y
    fx = function_value(f, X)
    fy = function_value(f, Y)
    fm = function_value(f, mid)
    sq = np.sum((X - Y) ** 2, axis=-1)
    slack = (1.0 - K) * fx + K * fy - fm - 0.5 * alpha * K * (1.0 - K) * sq
    scale = 1.0 + np.abs(fx) + np.abs(fy) + sq
    return _report(slack, scale, X, Y, tol)


# ---------------------------------------------------------------------------
# grid oracles
# ---------------------------------------------------------------------------


def _golden_section(phi, a: float, b: float, tol: float = GOLDEN_TOL) -> float:
    while b - a > tol:
        c = b - _INVPHI * (b - a)
        d = a + _INVPHI * (b - a)
        if phi(c) <= phi(d):
            b = d
        else:
            a = c
    return 0.5 * (a + b)


def _minimize_coordinate(obj, base: np.ndarray, i: int, center: float, radius: float, grid_points: int):
    """Grid + golden-section minimum of obj along coordinate i of base.

    Returns (argmin, hit_boundary).
    """
    zs = np.linspace(center - radius, center + radius, grid_points)
    P = np.repeat(base[None, :], grid_points, axis=0)
    P[:, i] = zs
    vals = np.asarray(obj(P))
    j = int(np.argmin(vals))
    if not np.isfinite(vals[j]) or j == 0 or j == grid_points - 1:
        return zs[j], True

    point = base.copy()

    def phi(z):
        point[i] = z
        return float(obj(point[None, :])[0])

    return _golden_section(phi, zs[j - 1], zs[j + 1]), False


def _check_separable(f: FunctionSpec):
    if isinstance(f, Quadratic):
        off = f.Q - np.diag(np.diag(f.Q))
        if np.max(np.abs(off)) > 1e-12 * max(1.0, np.max(np.abs(f.Q))):
            raise ParameterError("quadratic function is not coordinate-separable")


def _domain_anchor(f: FunctionSpec, x: np.ndarray) -> np.ndarray:
    """A base point with finite f so coordinate slices carry information.

    The slice objective only shifts by a constant when the other
    coordinates move, so anchoring them inside the domain never changes a
    coordinatewise argmin.
    """
    if isinstance(f, BoxIndicator):
        return np.clip(x, f.lo, f.hi)
    return x


def brute_prox(
    f: FunctionSpec,
    gamma: float,
    x,
    grid_radius: float = DEFAULT_BOX,
    grid_points: int = GRID_POINTS,
) -> np.ndarray:
    """Proximal point by coordinatewise grid search + golden-section refinement.

    Independent of the closed-form prox: minimizes
    f(z) + ||z - x||^2 / (2*gamma) one coordinate at a time, which is exact
    for the separable catalog.  Widens the grid once if the minimizer lands
    on its edge, then errors.
    """
    if not (np.isfinite(gamma) and gamma > 0):
        raise ParameterError(f"gamma must be positive, got {gamma}")
    if 1.0 + gamma * f.alpha_convex <= 0:
        raise ParameterError(
            f"prox objective unbounded: 1 + gamma*alpha = {1.0 + gamma * f.alpha_convex} <= 0"
        )
    _check_separable(f)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ParameterError("brute_prox expects a single point")

    def obj(P):
        return function_value(f, P) + np.sum((P - x) ** 2, axis=-1) / (2.0 * gamma)

    base = _domain_anchor(f, x)
    out = np.empty_like(x)
    for i in range(x.size):
        z, boundary = _minimize_coordinate(obj, base, i, float(x[i]), grid_radius, grid_points)
        if boundary:
            z, boundary = _minimize_coordinate(
                obj, base, i, float(x[i]), 4.0 * grid_radius, grid_points
            )
            if boundary:
                raise ParameterError(
                    f"coordinate {i}: minimizer stayed on the grid boundary after widening"
                )
        out[i] = z
    return out


def _linear_parts(op: OperatorSpec, dim: int):
    """(M, b) with op(x) = Mx + b, or None for subdifferentials."""
    if isinstance(op, Affine):
        return op.M, op.b
    if isinstance(op, ScaledIdentity):
        return op.a * np.eye(dim), np.zeros(dim)
    if isinstance(op, GradQuadratic):
        return op.Q, op.c
    return None


def _diag_potential(op: OperatorSpec, dim: int):
    """Coordinatewise potential of a diagonal linear operator, or None."""
    parts = _linear_parts(op, dim)
    if parts is None:
        return None
    M, b = parts
    if np.max(np.abs(M - np.diag(np.diag(M)))) > 1e-12 * max(1.0, np.max(np.abs(M))):
        return None
    d = np.diag(M).copy()
    return lambda P: 0.5 * np.sum(d * P * P, axis=-1) + P @ b


def analytic_zero(
    A: OperatorSpec,
    B: OperatorSpec | None = None,
    dim: int | None = None,
    grid_radius: float = DEFAULT_BOX,
    grid_points: int = GRID_POINTS,
) -> np.ndarray | None:
    """Zero of A (+ B) for catalog combinations, or None when unknown.

    Linear combinations get a dense solve; combinations involving
    subdifferentials of separable functions (optionally plus a diagonal
    linear part) are minimized coordinatewise by grid + golden-section.
    Singular or non-separable systems return None rather than guessing.
    """
    for op in (A, B):
        if op is not None and op.dim is not None:
            if dim is not None and dim != op.dim:
                raise ParameterError("inconsistent dimensions")
            dim = op.dim
    if dim is None:
        raise ParameterError("dimension undetermined; pass dim explicitly")

    ops = [op for op in (A, B) if op is not None]
    linear = [_linear_parts(op, dim) for op in ops]
    if all(p is not None for p in linear):
        M = sum(p[0] for p in linear)
        b = sum(p[1] for p in linear)
        try:
            z = np.linalg.solve(M, -b)
        except np.linalg.LinAlgError:
            return None
        if np.linalg.norm(M @ z + b) > 1e-8 * (1.0 + np.linalg.norm(b)):
            return None
        return z

    # subdifferential pieces: minimize the separable sum of potentials
    terms = []
    base = np.zeros(dim)
    for op in ops:
        if isinstance(op, Subdifferential):
            _check_separable(op.f)
            terms.append(lambda P, f=op.f: function_value(f, P))
            base = _domain_anchor(op.f, base)
        else:
            pot = _diag_potential(op, dim)
            if pot is None:
                return None
            terms.append(pot)

    def obj(P):
        total = terms[0](P)
        for t in terms[1:]:
            total = total + t(P)
        return total

    out = np.empty(dim)
    for i in range(dim):
        radius = grid_radius
        for _ in range(3):
            z, boundary = _minimize_coordinate(obj, base, i, 0.0, radius, grid_points)
            if not boundary:
                break
            radius *= 4.0
        else:
            return None
        out[i] = z
    return out


# ---------------------------------------------------------------------------
# trace diagnostics and admissible-order search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RateReport:
    """Running-minimum statistic of sqrt(n) * r_n at the checkpoints."""

    checkpoints: tuple[int, ...]
    stats: tuple[float, ...]
    residual_monotone: bool
    passed: bool


def rate_check(trace, burn_in: int = 10, checkpoints=(100, 1000, 10000)) -> RateReport:
    """Check the o(1/sqrt(n)) residual statistic on a recorded trace.

    Passes when min_{m<=n} sqrt(m)*r_m strictly decreases across the
    checkpoints; a statistic at the floating-point floor counts as
    decreased (exactly convergent runs reach residual zero in finitely
    many steps, freezing the running minimum at 0).
    """
    checkpoints = tuple(int(c) for c in checkpoints)
    r = np.asarray(trace.residuals, dtype=float)
    if len(r) <= max(checkpoints):
        raise ParameterError(
            f"trace too short: {len(r) - 1} iterations < last checkpoint {max(checkpoints)}"
        )
    stats_all = np.sqrt(np.arange(1, len(r))) * r[1:]
    running = np.minimum.accumulate(stats_all)
    vals = tuple(float(running[c - 1]) for c in checkpoints)
    floor = 1e-14 * (1.0 + float(r[0]))
    passed = all(b < a or b <= floor for a, b in zip(vals, vals[1:]))

    tail = r[burn_in:]
    slack = 1e-12 * (1.0 + tail[:-1])
    residual_monotone = bool(np.all(np.diff(tail) <= slack)) if len(tail) > 1 else True
    return RateReport(checkpoints, vals, residual_monotone, passed)


def find_admissible_order(thetas, max_size: int = 8):
    """Brute-force search for an ordering that satisfies the chain condition.

    Returns a tuple of indices into ``thetas`` or None.  All constants must
    differ from 1.
    """
    thetas = [float(t) for t in thetas]
    if len(thetas) > max_size:
        raise ParameterError(f"at most {max_size} certificates supported, got {len(thetas)}")
    if any(abs(t - 1.0) <= ONE_TOL for t in thetas):
        raise ParameterError("ordering search requires every constant to differ from 1")
    for perm in itertools.permutations(range(len(thetas))):
        try:
            compose_many([thetas[i] for i in perm])
        except CompositionError:
            continue
        return perm
    return None
