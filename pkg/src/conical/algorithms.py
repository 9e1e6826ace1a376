"""Splitting algorithms driven by the Krasnosel'skii--Mann engine.

Three iteration maps are built here, each certified conically
(kappa/kappa_star)-averaged by the governing threshold:

* relaxed proximal point:     T = (1-kappa) Id + kappa J_{gamma A}
* relaxed forward-backward:   T = (1-kappa) Id + kappa J_{gamma A}(Id - gamma B)
* adaptive Douglas-Rachford:  T = (1-kappa) Id + kappa R2 R1 with
  R1 = (1-lam) Id + lam J_{gamma A}, R2 = (1-mu) Id + mu J_{delta B},
  lam = 1 + delta/gamma, mu = 1 + gamma/delta.

kappa < kappa_star makes the map averaged, so plain iteration converges
with o(1/sqrt(n)) residual decay.  The validators classify (gamma, delta)
feasibility in both the direct-inequality and interval forms, which agree
by construction and are cross-checked against each other in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .calculus import ConicalCert
from .errors import InfeasibleParametersError, ParameterError
from .operators import (
    FunctionSpec,
    OperatorSpec,
    Subdifferential,
    certify_monotone,
    comonotone_constant,
    evaluate,
)
from .resolvents import resolvent

_ZERO_TOL = 1e-14  # detection of the alpha + beta = 0 regime
_EQ_TOL = 1e-12  # equality constraints on user-supplied parameters
BOUNDARY_TOL = 1e-9  # scale-aware band separating feasible/boundary/infeasible

DIVERGENCE_BOUND = 1e12


# ---------------------------------------------------------------------------
# step sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantStep:
    """Constant relaxation lam_n = lam."""

    lam: float = 1.0


@dataclass(frozen=True)
class HarmonicTailStep:
    """lam_n = (1/theta) * (1 - c/(n+1)) with c in (0, 1].

    Admissible for every theta and satisfies the divergent-sum condition,
    but not the positive-liminf hypothesis behind the o(1/sqrt(n)) rate.
    """

    c: float


StepSequence = ConstantStep | HarmonicTailStep


class StepFlags(NamedTuple):
    admissible: bool
    message: str | None
    divergent_sum: bool
    rate_hypothesis: bool


def check_steps(steps: StepSequence, theta: float) -> StepFlags:
    """Classify a step sequence against the KM hypotheses for theta."""
    if not (np.isfinite(theta) and theta > 0):
        raise ParameterError(f"theta must be positive, got {theta}")
    if isinstance(steps, ConstantStep):
        lam = steps.lam
        cap = 1.0 / theta
        if lam < -_EQ_TOL or lam > cap * (1.0 + _EQ_TOL) + _EQ_TOL:
            return StepFlags(False, f"constant step {lam} outside [0, 1/theta] = [0, {cap}]", False, False)
        strict = _EQ_TOL < lam < cap - _EQ_TOL
        return StepFlags(True, None, strict, strict)
    if isinstance(steps, HarmonicTailStep):
        if not (0.0 < steps.c <= 1.0):
            raise ParameterError(f"harmonic tail parameter must lie in (0, 1], got {steps.c}")
        return StepFlags(True, None, True, False)
    raise TypeError(f"unknown step sequence {type(steps).__name__}")


def step_value(steps: StepSequence, theta: float, n: int) -> float:
    if isinstance(steps, ConstantStep):
        return steps.lam
    if isinstance(steps, HarmonicTailStep):
        return (1.0 / theta) * (1.0 - steps.c / (n + 1.0))
    raise TypeError(f"unknown step sequence {type(steps).__name__}")


# ---------------------------------------------------------------------------
# iteration trace and the KM engine
# ---------------------------------------------------------------------------


@dataclass
class IterationTrace:
    """Per-iteration diagnostics of a KM run.

    residuals[n] is ||x_n - T x_n||; fejer_gaps[n] (when a reference point
    was supplied) is ||x_{n+1} - ref|| - ||x_n - ref||; dist_to_solution[n]
    (when a solution was supplied) is the distance of the shadow of x_n to
    it.  Residual monotonicity is only guaranteed for admissible steps.
    """

    residuals: np.ndarray
    fejer_gaps: np.ndarray | None
    dist_to_solution: np.ndarray | None
    snapshots: list[tuple[int, np.ndarray]] | None
    x_final: np.ndarray
    status: str  # "converged" | "max_iter" | "diverged"
    iterations: int
    warnings: tuple[str, ...] = ()

    @property
    def rate_stats(self) -> np.ndarray:
        """sqrt(n) * r_n for each recorded residual."""
        return np.sqrt(np.arange(len(self.residuals))) * self.residuals

    @property
    def final_residual(self) -> float:
        return float(self.residuals[-1])


def km_run(
    T: Callable[[np.ndarray], np.ndarray],
    theta: float,
    x0,
    steps: StepSequence = ConstantStep(1.0),
    max_iter: int = 100000,
    tol: float | None = 1e-8,
    fejer_ref=None,
    solution=None,
    shadow_map: Callable[[np.ndarray], np.ndarray] | None = None,
    snapshot_stride: int | None = None,
    enforce_steps: bool = True,
) -> IterationTrace:
    """Run x_{n+1} = (1 - lam_n) x_n + lam_n T x_n and record diagnostics.

    Parameters
    ----------
    T : callable
        The certified map, full domain on R^n.
    theta : float
        Conical constant of T; bounds the admissible steps by 1/theta.
    x0 : array_like
        Starting point.
    steps : StepSequence
        Relaxations lam_n; rejected when outside [0, 1/theta] unless
        ``enforce_steps`` is False (divergence experiments).
    max_iter, tol :
        Stop when the residual ||x_n - T x_n|| falls to ``tol`` (skipped
        when ``tol`` is None) or after ``max_iter`` updates.
    fejer_ref, solution : array_like, optional
        A known fixed point for the Fejer gap column, and a known solution
        for the distance column (measured on the shadow of the iterate).
    shadow_map : callable, optional
        Solution recovery map applied before measuring the distance
        (identity when omitted).
    snapshot_stride : int, optional
        Record a copy of x_n every this many iterations.
    """
    x = np.array(x0, dtype=float)
    flags = check_steps(steps, theta)
    run_warnings: list[str] = []
    if not flags.admissible:
        if enforce_steps:
            raise ParameterError(flags.message)
        run_warnings.append(flags.message)
    elif not flags.divergent_sum:
        run_warnings.append("step sequence does not satisfy the divergent-sum condition; convergence not guaranteed")

    ref = None if fejer_ref is None else np.asarray(fejer_ref, dtype=float)
    sol = None if solution is None else np.asarray(solution, dtype=float)
    shadow_fn = shadow_map if shadow_map is not None else (lambda z: z)

    residuals: list[float] = []
    gaps: list[float] = []
    dists: list[float] = []
    snaps: list[tuple[int, np.ndarray]] | None = [] if snapshot_stride else None

    n = 0
    status = "max_iter"
    while True:
        tx = T(x)
        r = float(np.linalg.norm(x - tx))
        residuals.append(r)
        if sol is not None:
            dists.append(float(np.linalg.norm(shadow_fn(x) - sol)))
        if snaps is not None and n % snapshot_stride == 0:
            snaps.append((n, x.copy()))
        if tol is not None and r <= tol:
            status = "converged"
            break
        if n >= max_iter:
            status = "max_iter"
            break
        lam = step_value(steps, theta, n)
        x_next = (1.0 - lam) * x + lam * tx
        if ref is not None:
            gaps.append(float(np.linalg.norm(x_next - ref) - np.linalg.norm(x - ref)))
        n += 1
        x = x_next
        if not np.all(np.isfinite(x)) or np.linalg.norm(x) > DIVERGENCE_BOUND:
            status = "diverged"
            break

    return IterationTrace(
        residuals=np.asarray(residuals),
        fejer_gaps=np.asarray(gaps) if ref is not None else None,
        dist_to_solution=np.asarray(dists) if sol is not None else None,
        snapshots=snaps,
        x_final=x,
        status=status,
        iterations=n,
        warnings=tuple(run_warnings),
    )


# ---------------------------------------------------------------------------
# relaxation thresholds (kappa_star)
# ---------------------------------------------------------------------------


def rpp_kappa_star(alpha: float, gamma: float) -> float:
    """Threshold 2*(gamma+alpha)/gamma for the proximal point map.

    Requires gamma > max(0, -alpha) (A maximally alpha-comonotone).
    """
    if not (np.isfinite(gamma) and gamma > max(0.0, -alpha)):
        raise ParameterError(
            f"gamma = {gamma} must exceed max(0, -alpha) = {max(0.0, -alpha)}"
        )
    return 2.0 * (gamma + alpha) / gamma


def rfb_kappa_star(alpha: float, beta: float, gamma: float) -> float:
    """Forward-backward threshold for alpha-comonotone A and beta-cocoercive B.

    Two regimes: alpha + beta = 0 forces gamma = 2*beta and gives 1;
    alpha + beta > 0 admits the open gamma-range
    (max(0, 2*beta - 2*sqrt(beta*(alpha+beta))), 2*beta + 2*sqrt(beta*(alpha+beta)))
    and gives (4*(gamma+alpha)*beta - gamma^2) / (2*gamma*(alpha+beta)).
    """
    if not (np.isfinite(beta) and beta > 0):
        raise ParameterError(f"the forward operator needs a positive cocoercivity constant, got {beta}")
    if not (np.isfinite(gamma) and gamma > 0):
        raise ParameterError(f"gamma must be positive, got {gamma}")
    s = alpha + beta
    scale = 1.0 + abs(alpha) + abs(beta)
    if abs(s) <= _ZERO_TOL * scale:
        if abs(gamma - 2.0 * beta) > _EQ_TOL * (1.0 + 2.0 * beta):
            raise ParameterError(
                f"alpha + beta = 0 requires gamma = 2*beta = {2.0 * beta}, got {gamma}"
            )
        return 1.0
    if s < 0:
        raise ParameterError(f"alpha + beta = {s} < 0 is outside the covered regimes")
    root = 2.0 * np.sqrt(beta * s)
    lo = max(0.0, 2.0 * beta - root)
    hi = 2.0 * beta + root
    if not gamma > lo:
        raise ParameterError(
            f"gamma = {gamma} must exceed max(0, 2*beta - 2*sqrt(beta*(alpha+beta))) = {lo}"
        )
    if not gamma < hi:
        raise ParameterError(
            f"gamma = {gamma} must be below 2*beta + 2*sqrt(beta*(alpha+beta)) = {hi}"
        )
    return (4.0 * (gamma + alpha) * beta - gamma**2) / (2.0 * gamma * s)


def adr_kappa_star(alpha: float, beta: float, gamma: float, delta: float, regime: str) -> float:
    """Adaptive DR threshold in the requested certificate regime.

    alpha + beta = 0 pins delta (gamma + 2*alpha in the comonotone regime,
    gamma/(1 + 2*gamma*alpha) in the monotone one) and gives 1; for
    alpha + beta > 0 the threshold formula must come out positive, which is
    exactly strict (gamma, delta) feasibility.
    """
    if regime not in ("comonotone", "monotone"):
        raise ParameterError(f"unknown regime {regime!r}")
    if not (np.isfinite(gamma) and gamma > 0 and np.isfinite(delta) and delta > 0):
        raise ParameterError(f"gamma and delta must be positive, got {gamma}, {delta}")
    s = alpha + beta
    scale = 1.0 + abs(alpha) + abs(beta)
    if s < -_ZERO_TOL * scale:
        raise ParameterError(f"alpha + beta = {s} < 0 is outside the covered regimes")
    if abs(s) <= _ZERO_TOL * scale:
        if regime == "comonotone":
            if not gamma > max(0.0, -2.0 * alpha):
                raise ParameterError(
                    f"gamma = {gamma} must exceed max(0, -2*alpha) = {max(0.0, -2.0 * alpha)}"
                )
            pinned = gamma + 2.0 * alpha
        else:
            if not 1.0 + 2.0 * gamma * alpha > 0:
                raise ParameterError(
                    f"1 + 2*gamma*alpha = {1.0 + 2.0 * gamma * alpha} must be positive"
                )
            pinned = gamma / (1.0 + 2.0 * gamma * alpha)
        if abs(delta - pinned) > _EQ_TOL * (1.0 + abs(gamma) + abs(delta)):
            raise ParameterError(
                f"alpha + beta = 0 pins delta to {pinned} in the {regime} regime, got {delta}"
            )
        return 1.0
    if regime == "comonotone":
        num = 4.0 * (gamma + alpha) * (delta + beta) - (gamma + delta) ** 2
        den = 2.0 * (gamma + delta) * s
        report = validate_params_comonotone(alpha, beta, gamma, delta)
    else:
        num = 4.0 * gamma * delta * (1.0 + gamma * alpha) * (1.0 + delta * beta) - (gamma + delta) ** 2
        den = 2.0 * gamma * delta * (gamma + delta) * s
        report = validate_params_monotone(alpha, beta, gamma, delta)
    kappa_star = num / den
    if kappa_star <= 0:
        raise InfeasibleParametersError(
            f"(gamma, delta) = ({gamma}, {delta}) infeasible in the {regime} regime: "
            f"kappa_star = {kappa_star} <= 0; gamma0 = {report.gamma0}, "
            f"disc = {report.disc}, admissible delta interval = {report.delta_interval}",
            report=report,
        )
    return kappa_star


# ---------------------------------------------------------------------------
# feasibility validators (direct inequality vs interval form)
# ---------------------------------------------------------------------------


def _three_way(margin, band):
    return np.where(margin > band, 1, np.where(margin < -band, -1, 0))


def feasibility_direct_comonotone(alpha, beta, gamma, delta, tol=BOUNDARY_TOL):
    """+1/0/-1 verdict of (gamma+delta)^2 <= 4*(gamma+alpha)*(delta+beta)."""
    a, b, g, d = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (alpha, beta, gamma, delta))
    )
    lhs = (g + d) ** 2
    rhs = 4.0 * (g + a) * (d + b)
    return _three_way(rhs - lhs, tol * (1.0 + np.abs(lhs) + np.abs(rhs)))


def feasibility_interval_comonotone(alpha, beta, gamma, delta, tol=BOUNDARY_TOL):
    """+1/0/-1 verdict of the threshold-and-interval form.

    Conditions: gamma above the threshold gamma0, a nonnegative
    discriminant (gamma+alpha)*(alpha+beta), and delta inside
    [gamma+2*alpha - 2*sqrt(disc), gamma+2*alpha + 2*sqrt(disc)].
    """
    a, b, g, d = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (alpha, beta, gamma, delta))
    )
    s = a + b
    gamma0 = np.where(a >= 0, 0.0, 2.0 * b - 2.0 * np.sqrt(np.maximum(b * s, 0.0)))
    disc = (g + a) * s
    root = np.sqrt(np.clip(disc, 0.0, None))
    lo = g + 2.0 * a - 2.0 * root
    hi = g + 2.0 * a + 2.0 * root

    v_gamma = _three_way(g - gamma0, tol * (1.0 + np.abs(g) + np.abs(gamma0)))
    v_disc = _three_way(disc, tol * (1.0 + np.abs(disc)))
    band = tol * (1.0 + np.abs(d) + np.abs(lo) + np.abs(hi))
    v_lo = _three_way(d - lo, band)
    v_hi = _three_way(hi - d, band)

    stacked = np.stack([v_gamma, v_disc, v_lo, v_hi])
    return np.where(np.any(stacked == -1, axis=0), -1, np.where(np.any(stacked == 0, axis=0), 0, 1))


def feasibility_direct_monotone(alpha, beta, gamma, delta, tol=BOUNDARY_TOL):
    """+1/0/-1 verdict of (gamma+delta)^2 <= 4*gamma*delta*(1+gamma*alpha)*(1+delta*beta)."""
    a, b, g, d = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (alpha, beta, gamma, delta))
    )
    lhs = (g + d) ** 2
    rhs = 4.0 * g * d * (1.0 + g * a) * (1.0 + d * b)
    return _three_way(rhs - lhs, tol * (1.0 + np.abs(lhs) + np.abs(rhs)))


def feasibility_interval_monotone(alpha, beta, gamma, delta, tol=BOUNDARY_TOL):
    """Interval-form verdict in the monotone regime: the comonotone form at (1/gamma, 1/delta)."""
    g = np.asarray(gamma, dtype=float)
    d = np.asarray(delta, dtype=float)
    return feasibility_interval_comonotone(alpha, beta, 1.0 / g, 1.0 / d, tol=tol)


_STATUS = {1: "feasible", 0: "boundary", -1: "infeasible"}


@dataclass(frozen=True)
class FeasibilityReport:
    """Validator output for one (alpha, beta, gamma, delta) tuple.

    ``gamma0`` is the threshold (compared against gamma in the comonotone
    regime and against 1/gamma in the monotone one), ``disc`` the regime's
    discriminant, ``delta_interval`` the admissible delta range intersected
    with (0, inf) (None when empty; the upper end may be inf), and
    ``resolvent_margins`` the implied positive quantities
    (gamma+alpha, delta+beta) or (1+gamma*alpha, 1+delta*beta).
    """

    regime: str
    status: str
    alpha: float
    beta: float
    gamma: float
    delta: float
    gamma0: float
    disc: float
    delta_interval: tuple[float, float] | None
    resolvent_margins: tuple[float, float]

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def _check_validator_scope(alpha, beta, gamma, delta):
    if not all(np.isfinite(v) for v in (alpha, beta, gamma, delta)):
        raise ParameterError("all parameters must be finite")
    if alpha + beta < -_ZERO_TOL * (1.0 + abs(alpha) + abs(beta)):
        raise ParameterError(f"alpha + beta = {alpha + beta} < 0 is outside the covered scope")
    if gamma <= 0 or delta <= 0:
        raise ParameterError(f"gamma and delta must be positive, got {gamma}, {delta}")


def _gamma0(alpha: float, beta: float) -> float:
    if alpha >= 0:
        return 0.0
    return 2.0 * beta - 2.0 * np.sqrt(max(beta * (alpha + beta), 0.0))


def validate_params_comonotone(
    alpha: float, beta: float, gamma: float, delta: float, tol: float = BOUNDARY_TOL
) -> FeasibilityReport:
    """Classify (gamma, delta) for the comonotone-regime adaptive DR map."""
    _check_validator_scope(alpha, beta, gamma, delta)
    verdict = int(feasibility_interval_comonotone(alpha, beta, gamma, delta, tol=tol))
    gamma0 = _gamma0(alpha, beta)
    disc = (gamma + alpha) * (alpha + beta)
    interval = None
    if disc >= 0:
        root = 2.0 * np.sqrt(disc)
        lo, hi = gamma + 2.0 * alpha - root, gamma + 2.0 * alpha + root
        if hi > 0:
            interval = (max(lo, 0.0), hi)
    return FeasibilityReport(
        regime="comonotone",
        status=_STATUS[verdict],
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        delta=delta,
        gamma0=gamma0,
        disc=disc,
        delta_interval=interval,
        resolvent_margins=(gamma + alpha, delta + beta),
    )


def validate_params_monotone(
    alpha: float, beta: float, gamma: float, delta: float, tol: float = BOUNDARY_TOL
) -> FeasibilityReport:
    """Classify (gamma, delta) for the monotone-regime adaptive DR map."""
    _check_validator_scope(alpha, beta, gamma, delta)
    verdict = int(feasibility_interval_monotone(alpha, beta, gamma, delta, tol=tol))
    gamma0 = _gamma0(alpha, beta)  # threshold on 1/gamma
    disc = gamma * (1.0 + gamma * alpha) * (alpha + beta)
    interval = None
    if disc >= 0:
        root = 2.0 * np.sqrt(disc)
        inv_lo = (1.0 + 2.0 * gamma * alpha - root) / gamma
        inv_hi = (1.0 + 2.0 * gamma * alpha + root) / gamma
        if inv_hi > 0:
            interval = (1.0 / inv_hi, 1.0 / inv_lo if inv_lo > 0 else np.inf)
    return FeasibilityReport(
        regime="monotone",
        status=_STATUS[verdict],
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        delta=delta,
        gamma0=gamma0,
        disc=disc,
        delta_interval=interval,
        resolvent_margins=(1.0 + gamma * alpha, 1.0 + delta * beta),
    )


# ---------------------------------------------------------------------------
# algorithm instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlgorithmInstance:
    """A built, certified iteration map together with its solution recovery.

    ``cert.theta`` equals kappa/kappa_star exactly.  ``warnings`` collects
    build-time flags such as kappa >= kappa_star (the map is still
    well-defined; only the convergence guarantee is lost).
    """

    kind: str  # "rpp" | "rfb" | "adr"
    A: OperatorSpec
    B: OperatorSpec | None
    gamma: float
    delta: float | None
    kappa: float
    lam: float | None
    mu: float | None
    kappa_star: float
    cert: ConicalCert
    alpha: float
    beta: float | None
    regime: str | None = None  # adr only
    swapped: bool = False
    warnings: tuple[str, ...] = ()

    @property
    def dim(self) -> int | None:
        for op in (self.A, self.B):
            if op is not None and op.dim is not None:
                return op.dim
        return None

    def map(self, x) -> np.ndarray:
        """Apply the full iteration map T to x (shape (..., n))."""
        x = np.asarray(x, dtype=float)
        k = self.kappa
        if self.kind == "rpp":
            return (1.0 - k) * x + k * resolvent(self.A, self.gamma, x)
        if self.kind == "rfb":
            forward = x - self.gamma * evaluate(self.B, x)
            return (1.0 - k) * x + k * resolvent(self.A, self.gamma, forward)
        if self.kind == "adr":
            r1 = lambda z: (1.0 - self.lam) * z + self.lam * resolvent(self.A, self.gamma, z)
            r2 = lambda z: (1.0 - self.mu) * z + self.mu * resolvent(self.B, self.delta, z)
            inner = r1(r2(x)) if self.swapped else r2(r1(x))
            return (1.0 - k) * x + k * inner
        raise TypeError(f"unknown algorithm kind {self.kind!r}")

    def shadow_point(self, x) -> np.ndarray:
        """Candidate solution recovered from a fixed point of the map."""
        x = np.asarray(x, dtype=float)
        if self.kind in ("rpp", "rfb"):
            return x
        if self.swapped:
            return resolvent(self.B, self.delta, x)
        return resolvent(self.A, self.gamma, x)

    def run(
        self,
        x0,
        steps: StepSequence = ConstantStep(1.0),
        max_iter: int = 100000,
        tol: float | None = 1e-8,
        fejer_ref=None,
        solution=None,
        snapshot_stride: int | None = None,
        enforce_steps: bool = True,
    ) -> IterationTrace:
        """KM-iterate this instance's map from x0 (see :func:`km_run`)."""
        return km_run(
            self.map,
            self.cert.theta,
            x0,
            steps=steps,
            max_iter=max_iter,
            tol=tol,
            fejer_ref=fejer_ref,
            solution=solution,
            shadow_map=self.shadow_point,
            snapshot_stride=snapshot_stride,
            enforce_steps=enforce_steps,
        )


def shadow(instance: AlgorithmInstance, x, tol: float = 1e-6) -> np.ndarray:
    """Solution candidate from an approximate fixed point x of the instance.

    Warns (but still computes) when ||x - Tx|| exceeds tol.
    """
    import warnings as _warnings

    x = np.asarray(x, dtype=float)
    res = float(np.linalg.norm(x - instance.map(x)))
    if res > tol:
        _warnings.warn(
            f"shadow of a non-fixed point: residual {res} > {tol}", RuntimeWarning, stacklevel=2
        )
    return instance.shadow_point(x)


def _kappa_warnings(kappa: float, kappa_star: float) -> tuple[str, ...]:
    if not (np.isfinite(kappa) and kappa > 0):
        raise ParameterError(f"kappa must be positive, got {kappa}")
    if kappa >= kappa_star:
        return (
            f"kappa = {kappa} >= kappa_star = {kappa_star}: convergence not guaranteed",
        )
    return ()


def build_rpp(A: OperatorSpec, gamma: float, kappa: float) -> AlgorithmInstance:
    """Relaxed proximal point instance for a maximally comonotone operator.

    Fixed points of the map coincide with the zeros of A, so the solution
    recovery is the identity.
    """
    alpha = comonotone_constant(A)
    kappa_star = rpp_kappa_star(alpha, gamma)
    return AlgorithmInstance(
        kind="rpp",
        A=A,
        B=None,
        gamma=gamma,
        delta=None,
        kappa=kappa,
        lam=None,
        mu=None,
        kappa_star=kappa_star,
        cert=ConicalCert(kappa / kappa_star),
        alpha=alpha,
        beta=None,
        warnings=_kappa_warnings(kappa, kappa_star),
    )


def build_rfb(A: OperatorSpec, B: OperatorSpec, gamma: float, kappa: float) -> AlgorithmInstance:
    """Relaxed forward-backward instance for comonotone A and cocoercive B.

    B must be pointwise-evaluable with a positive cocoercivity constant;
    fixed points coincide with the zeros of A + B.
    """
    if isinstance(B, Subdifferential):
        raise ParameterError("the forward operator must be pointwise-evaluable")
    alpha = comonotone_constant(A)
    beta = comonotone_constant(B)
    kappa_star = rfb_kappa_star(alpha, beta, gamma)
    return AlgorithmInstance(
        kind="rfb",
        A=A,
        B=B,
        gamma=gamma,
        delta=None,
        kappa=kappa,
        lam=None,
        mu=None,
        kappa_star=kappa_star,
        cert=ConicalCert(kappa / kappa_star),
        alpha=alpha,
        beta=beta,
        warnings=_kappa_warnings(kappa, kappa_star),
    )


def build_adr(
    A: OperatorSpec,
    B: OperatorSpec,
    gamma: float,
    delta: float,
    kappa: float,
    regime: str,
    swapped: bool = False,
) -> AlgorithmInstance:
    """Adaptive Douglas-Rachford instance with coupled relaxations.

    lam = 1 + delta/gamma and mu = 1 + gamma/delta, so
    (lam - 1) * (mu - 1) = 1.  The solution is recovered through the first
    resolvent: J_{gamma A} of a fixed point (J_{delta B} for the mirrored
    composition ``swapped=True``, which carries the identical certificate).
    """
    if regime == "comonotone":
        alpha = comonotone_constant(A)
        beta = comonotone_constant(B)
    elif regime == "monotone":
        alpha = certify_monotone(A)
        beta = certify_monotone(B)
    else:
        raise ParameterError(f"unknown regime {regime!r}")
    kappa_star = adr_kappa_star(alpha, beta, gamma, delta, regime)
    lam = 1.0 + delta / gamma
    mu = 1.0 + gamma / delta
    return AlgorithmInstance(
        kind="adr",
        A=A,
        B=B,
        gamma=gamma,
        delta=delta,
        kappa=kappa,
        lam=lam,
        mu=mu,
        kappa_star=kappa_star,
        cert=ConicalCert(kappa / kappa_star),
        alpha=alpha,
        beta=beta,
        regime=regime,
        swapped=swapped,
        warnings=_kappa_warnings(kappa, kappa_star),
    )


def convex_min_instance(
    f: FunctionSpec,
    g: FunctionSpec,
    gamma: float,
    delta: float,
    kappa: float,
    swapped: bool = False,
) -> AlgorithmInstance:
    """Adaptive DR for minimizing a sum of curvature-certified functions.

    Subdifferentials enter the monotone regime with their curvature
    constants; resolvents are realized as proximity operators, and the
    shadow of a fixed point lands in the zeros of the subdifferential sum,
    hence among the minimizers of f + g.
    """
    return build_adr(
        Subdifferential(f),
        Subdifferential(g),
        gamma,
        delta,
        kappa,
        regime="monotone",
        swapped=swapped,
    )
