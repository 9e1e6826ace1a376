"""Command-line front end: validate, run, sweep, certify, oracle.

Problem specifications are strict JSON (unknown keys are rejected); traces
and sweep summaries are plain CSV.  Exit codes: 0 ok, 1 parse error,
2 infeasible parameters, 3 diverged run, 4 failed certification.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import algorithms, oracle
from .errors import InfeasibleParametersError, ParameterError
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
    certify_monotone,
    comonotone_constant,
    evaluate,
)
from .resolvents import prox, relaxed_resolvent

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INFEASIBLE = 2
EXIT_DIVERGED = 3
EXIT_CERT_FAIL = 4


class SpecError(ValueError):
    """Malformed problem specification."""


# ---------------------------------------------------------------------------
# strict JSON parsing
# ---------------------------------------------------------------------------


def _check_keys(d, required, optional, ctx):
    if not isinstance(d, dict):
        raise SpecError(f"{ctx}: expected an object")
    unknown = sorted(set(d) - set(required) - set(optional))
    if unknown:
        raise SpecError(f"{ctx}: unknown fields {unknown}")
    missing = sorted(set(required) - set(d))
    if missing:
        raise SpecError(f"{ctx}: missing fields {missing}")


def _number(v, ctx):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
        raise SpecError(f"{ctx}: expected a finite number, got {v!r}")
    return float(v)


def _integer(v, ctx):
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecError(f"{ctx}: expected an integer, got {v!r}")
    return v


def _vector(v, ctx):
    if not isinstance(v, list) or not v:
        raise SpecError(f"{ctx}: expected a nonempty list of numbers")
    return np.array([_number(c, ctx) for c in v])


def _matrix(v, ctx):
    if not isinstance(v, list) or not v:
        raise SpecError(f"{ctx}: expected a nonempty list of rows")
    rows = [list(_vector(r, ctx)) for r in v]
    if any(len(r) != len(rows) for r in rows):
        raise SpecError(f"{ctx}: expected a square matrix")
    return np.array(rows)


def parse_function(d, ctx="function") -> FunctionSpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise SpecError(f"{ctx}: expected an object with a 'kind' field")
    kind = d["kind"]
    try:
        if kind == "quadratic":
            _check_keys(d, {"kind", "Q", "b"}, set(), ctx)
            return Quadratic(_matrix(d["Q"], f"{ctx}.Q"), _vector(d["b"], f"{ctx}.b"))
        if kind == "l1":
            _check_keys(d, {"kind", "weight"}, set(), ctx)
            return L1(_number(d["weight"], f"{ctx}.weight"))
        if kind == "weakly_convex_l1":
            _check_keys(d, {"kind", "weight", "rho"}, set(), ctx)
            return WeaklyConvexL1(
                _number(d["weight"], f"{ctx}.weight"), _number(d["rho"], f"{ctx}.rho")
            )
        if kind == "box":
            _check_keys(d, {"kind", "lo", "hi"}, set(), ctx)
            return BoxIndicator(_vector(d["lo"], f"{ctx}.lo"), _vector(d["hi"], f"{ctx}.hi"))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"{ctx}: {exc}") from exc
    raise SpecError(f"{ctx}: unknown function kind {kind!r}")


def parse_operator(d, ctx="operator") -> OperatorSpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise SpecError(f"{ctx}: expected an object with a 'kind' field")
    kind = d["kind"]
    try:
        if kind == "affine":
            _check_keys(d, {"kind", "M", "b"}, set(), ctx)
            return Affine(_matrix(d["M"], f"{ctx}.M"), _vector(d["b"], f"{ctx}.b"))
        if kind == "scaled_identity":
            _check_keys(d, {"kind", "a"}, set(), ctx)
            return ScaledIdentity(_number(d["a"], f"{ctx}.a"))
        if kind == "grad_quadratic":
            _check_keys(d, {"kind", "Q", "c"}, set(), ctx)
            return GradQuadratic(_matrix(d["Q"], f"{ctx}.Q"), _vector(d["c"], f"{ctx}.c"))
        if kind == "subdifferential":
            _check_keys(d, {"kind", "function"}, set(), ctx)
            return Subdifferential(parse_function(d["function"], f"{ctx}.function"))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"{ctx}: {exc}") from exc
    raise SpecError(f"{ctx}: unknown operator kind {kind!r}")


_ALGORITHMS = ("rpp", "rfb", "adr_comonotone", "adr_monotone", "convex_min")


@dataclass
class ProblemSpec:
    dimension: int
    algorithm: str
    A: OperatorSpec | None
    B: OperatorSpec | None
    f: FunctionSpec | None
    g: FunctionSpec | None
    gamma: float
    delta: float | None
    kappa: float | None
    kappa_fraction: float | None
    step: algorithms.StepSequence
    x0_value: np.ndarray | None
    x0_random: tuple[int, float] | None  # (seed, scale)
    tol: float
    max_iter: int
    solution_hint: np.ndarray | None
    swapped: bool
    grid: dict | None


def parse_problem(d, allow_grid: bool = False) -> ProblemSpec:
    required = {"dimension", "algorithm", "parameters", "x0"}
    optional = {"operators", "functions", "step", "tol", "max_iter", "solution_hint", "swapped"}
    if allow_grid:
        required = required | {"grid"}
    _check_keys(d, required, optional, "problem")

    dim = _integer(d["dimension"], "problem.dimension")
    if dim < 1:
        raise SpecError("problem.dimension: must be >= 1")
    algorithm = d["algorithm"]
    if algorithm not in _ALGORITHMS:
        raise SpecError(f"problem.algorithm: unknown algorithm {algorithm!r}")

    A = B = f = g = None
    if algorithm == "convex_min":
        if "functions" not in d or "operators" in d:
            raise SpecError("convex_min takes a 'functions' object with fields f and g")
        _check_keys(d["functions"], {"f", "g"}, set(), "problem.functions")
        f = parse_function(d["functions"]["f"], "problem.functions.f")
        g = parse_function(d["functions"]["g"], "problem.functions.g")
    else:
        if "operators" not in d or "functions" in d:
            raise SpecError(f"{algorithm} takes an 'operators' object")
        needed = {"A"} if algorithm == "rpp" else {"A", "B"}
        _check_keys(d["operators"], needed, set(), "problem.operators")
        A = parse_operator(d["operators"]["A"], "problem.operators.A")
        if "B" in needed:
            B = parse_operator(d["operators"]["B"], "problem.operators.B")

    params = d["parameters"]
    needs_delta = algorithm in ("adr_comonotone", "adr_monotone", "convex_min")
    required_p = {"gamma"}
    optional_p = {"kappa", "kappa_fraction"} | ({"delta"} if needs_delta else set())
    _check_keys(params, required_p | ({"delta"} if needs_delta else set()), optional_p, "problem.parameters")
    gamma = _number(params["gamma"], "problem.parameters.gamma")
    delta = _number(params["delta"], "problem.parameters.delta") if needs_delta else None
    kappa = _number(params["kappa"], "problem.parameters.kappa") if "kappa" in params else None
    kappa_fraction = (
        _number(params["kappa_fraction"], "problem.parameters.kappa_fraction")
        if "kappa_fraction" in params
        else None
    )
    if (kappa is None) == (kappa_fraction is None):
        raise SpecError("problem.parameters: exactly one of kappa, kappa_fraction is required")

    step_d = d.get("step", {"kind": "constant", "lambda_step": 1.0})
    if not isinstance(step_d, dict) or "kind" not in step_d:
        raise SpecError("problem.step: expected an object with a 'kind' field")
    if step_d["kind"] == "constant":
        _check_keys(step_d, {"kind", "lambda_step"}, set(), "problem.step")
        step = algorithms.ConstantStep(_number(step_d["lambda_step"], "problem.step.lambda_step"))
    elif step_d["kind"] == "harmonic_tail":
        _check_keys(step_d, {"kind", "c"}, set(), "problem.step")
        step = algorithms.HarmonicTailStep(_number(step_d["c"], "problem.step.c"))
    else:
        raise SpecError(f"problem.step: unknown step kind {step_d['kind']!r}")

    x0_value = x0_random = None
    x0_d = d["x0"]
    if isinstance(x0_d, list):
        x0_value = _vector(x0_d, "problem.x0")
        if x0_value.size != dim:
            raise SpecError(f"problem.x0: expected {dim} entries, got {x0_value.size}")
    elif isinstance(x0_d, dict):
        _check_keys(x0_d, {"random"}, set(), "problem.x0")
        _check_keys(x0_d["random"], {"seed", "scale"}, set(), "problem.x0.random")
        x0_random = (
            _integer(x0_d["random"]["seed"], "problem.x0.random.seed"),
            _number(x0_d["random"]["scale"], "problem.x0.random.scale"),
        )
    else:
        raise SpecError("problem.x0: expected a list or a {'random': ...} object")

    tol = _number(d.get("tol", 1e-8), "problem.tol")
    max_iter = _integer(d.get("max_iter", 100000), "problem.max_iter")
    solution_hint = (
        _vector(d["solution_hint"], "problem.solution_hint") if "solution_hint" in d else None
    )
    if solution_hint is not None and solution_hint.size != dim:
        raise SpecError("problem.solution_hint: dimension mismatch")
    swapped = d.get("swapped", False)
    if not isinstance(swapped, bool):
        raise SpecError("problem.swapped: expected a boolean")

    grid = d.get("grid") if allow_grid else None
    for op in (A, B):
        if op is not None and op.dim is not None and op.dim != dim:
            raise SpecError(f"problem.dimension = {dim} conflicts with an operator of dimension {op.dim}")
    for fn in (f, g):
        if fn is not None and fn.dim is not None and fn.dim != dim:
            raise SpecError(f"problem.dimension = {dim} conflicts with a function of dimension {fn.dim}")

    return ProblemSpec(
        dimension=dim,
        algorithm=algorithm,
        A=A,
        B=B,
        f=f,
        g=g,
        gamma=gamma,
        delta=delta,
        kappa=kappa,
        kappa_fraction=kappa_fraction,
        step=step,
        x0_value=x0_value,
        x0_random=x0_random,
        tol=tol,
        max_iter=max_iter,
        solution_hint=solution_hint,
        swapped=swapped,
        grid=grid,
    )


# ---------------------------------------------------------------------------
# instance assembly
# ---------------------------------------------------------------------------


def _regime_constants(spec: ProblemSpec):
    if spec.algorithm == "rpp":
        return comonotone_constant(spec.A), None
    if spec.algorithm == "rfb":
        return comonotone_constant(spec.A), comonotone_constant(spec.B)
    if spec.algorithm == "adr_comonotone":
        return comonotone_constant(spec.A), comonotone_constant(spec.B)
    if spec.algorithm == "adr_monotone":
        return certify_monotone(spec.A), certify_monotone(spec.B)
    return spec.f.alpha_convex, spec.g.alpha_convex


def compute_kappa_star(spec: ProblemSpec) -> float:
    alpha, beta = _regime_constants(spec)
    if spec.algorithm == "rpp":
        return algorithms.rpp_kappa_star(alpha, spec.gamma)
    if spec.algorithm == "rfb":
        return algorithms.rfb_kappa_star(alpha, beta, spec.gamma)
    regime = "comonotone" if spec.algorithm == "adr_comonotone" else "monotone"
    return algorithms.adr_kappa_star(alpha, beta, spec.gamma, spec.delta, regime)


def build_instance(spec: ProblemSpec) -> algorithms.AlgorithmInstance:
    kappa = spec.kappa
    if kappa is None:
        kappa = spec.kappa_fraction * compute_kappa_star(spec)
    if spec.algorithm == "rpp":
        return algorithms.build_rpp(spec.A, spec.gamma, kappa)
    if spec.algorithm == "rfb":
        return algorithms.build_rfb(spec.A, spec.B, spec.gamma, kappa)
    if spec.algorithm == "adr_comonotone":
        return algorithms.build_adr(
            spec.A, spec.B, spec.gamma, spec.delta, kappa, "comonotone", swapped=spec.swapped
        )
    if spec.algorithm == "adr_monotone":
        return algorithms.build_adr(
            spec.A, spec.B, spec.gamma, spec.delta, kappa, "monotone", swapped=spec.swapped
        )
    return algorithms.convex_min_instance(
        spec.f, spec.g, spec.gamma, spec.delta, kappa, swapped=spec.swapped
    )


def _resolve_x0(spec: ProblemSpec, seed_override: int | None) -> np.ndarray:
    if spec.x0_value is not None:
        return spec.x0_value.copy()
    seed, scale = spec.x0_random
    if seed_override is not None:
        seed = seed_override
    rng = np.random.default_rng(seed)
    return rng.uniform(-scale, scale, size=spec.dimension)


def _resolve_solution(spec: ProblemSpec, instance) -> np.ndarray | None:
    if spec.solution_hint is not None:
        return spec.solution_hint
    try:
        return oracle.analytic_zero(instance.A, instance.B, dim=spec.dimension)
    except ParameterError:
        return None


def _fmt(v: float) -> str:
    return repr(float(v))


def _fmt_vec(v) -> str:
    return "[" + ", ".join(_fmt(c) for c in np.asarray(v).ravel()) + "]"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _load_spec(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from exc


def cmd_validate(args) -> int:
    try:
        spec = parse_problem(_load_spec(args.spec))
    except SpecError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    try:
        alpha, beta = _regime_constants(spec)
    except ParameterError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"algorithm: {spec.algorithm}")
    print(f"alpha: {_fmt(alpha)}" + ("" if beta is None else f"  beta: {_fmt(beta)}"))
    if spec.algorithm in ("adr_comonotone", "adr_monotone", "convex_min"):
        regime = "comonotone" if spec.algorithm == "adr_comonotone" else "monotone"
        validator = (
            algorithms.validate_params_comonotone
            if regime == "comonotone"
            else algorithms.validate_params_monotone
        )
        try:
            report = validator(alpha, beta, spec.gamma, spec.delta)
        except ParameterError as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        lam = 1.0 + spec.delta / spec.gamma
        mu = 1.0 + spec.gamma / spec.delta
        print(f"feasibility: {report.status}")
        print(f"gamma0: {_fmt(report.gamma0)}")
        print(f"disc: {_fmt(report.disc)}")
        if report.delta_interval is not None:
            lo, hi = report.delta_interval
            print(f"delta_interval: [{_fmt(lo)}, {_fmt(hi)}]")
        else:
            print("delta_interval: empty")
        print(f"lambda: {_fmt(lam)}  mu: {_fmt(mu)}")
    try:
        kappa_star = compute_kappa_star(spec)
    except (InfeasibleParametersError, ParameterError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"kappa_star: {_fmt(kappa_star)}")
    kappa = spec.kappa if spec.kappa is not None else spec.kappa_fraction * kappa_star
    print(f"kappa: {_fmt(kappa)}  theta: {_fmt(kappa / kappa_star)}")
    if kappa >= kappa_star:
        print("warning: kappa >= kappa_star, convergence not guaranteed")
    return EXIT_OK


def _trace_csv_lines(trace) -> list[str]:
    lines = ["n,residual,fejer_gap,dist_to_solution,rate_stat"]
    gaps = trace.fejer_gaps
    dists = trace.dist_to_solution
    rates = trace.rate_stats
    for n, r in enumerate(trace.residuals):
        gap = _fmt(gaps[n]) if gaps is not None and n < len(gaps) else ""
        dist = _fmt(dists[n]) if dists is not None and n < len(dists) else ""
        lines.append(f"{n},{_fmt(r)},{gap},{dist},{_fmt(rates[n])}")
    return lines


def cmd_run(args) -> int:
    try:
        spec = parse_problem(_load_spec(args.spec))
    except SpecError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        instance = build_instance(spec)
    except (InfeasibleParametersError, ParameterError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if instance.warnings and not args.force:
        for w in instance.warnings:
            print(f"flagged: {w}", file=sys.stderr)
        print("rerun with --force to iterate anyway", file=sys.stderr)
        return EXIT_INFEASIBLE

    x0 = _resolve_x0(spec, args.seed)
    solution = _resolve_solution(spec, instance)
    fejer_ref = solution if instance.kind in ("rpp", "rfb") else None
    tol = args.tol if args.tol is not None else spec.tol
    max_iter = args.max_iter if args.max_iter is not None else spec.max_iter
    trace = instance.run(
        x0,
        steps=spec.step,
        max_iter=max_iter,
        tol=tol,
        fejer_ref=fejer_ref,
        solution=solution,
        enforce_steps=not args.force,
    )

    try:
        with open(args.out, "w") as fh:
            fh.write("\n".join(_trace_csv_lines(trace)) + "\n")
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_PARSE

    shadow_pt = instance.shadow_point(trace.x_final)
    print(
        f"status={trace.status} iterations={trace.iterations} "
        f"final_residual={_fmt(trace.final_residual)} shadow={_fmt_vec(shadow_pt)}"
    )
    return EXIT_DIVERGED if trace.status == "diverged" else EXIT_OK


_GRID_AXES = ("gamma", "delta", "kappa", "kappa_fraction")


def _axis_values(d, ctx):
    _check_keys(d, set(), {"values", "linspace"}, ctx)
    if ("values" in d) == ("linspace" in d):
        raise SpecError(f"{ctx}: exactly one of 'values', 'linspace' is required")
    if "values" in d:
        return [_number(v, ctx) for v in d["values"]]
    spec = d["linspace"]
    if not isinstance(spec, list) or len(spec) != 3:
        raise SpecError(f"{ctx}.linspace: expected [start, stop, count]")
    lo, hi, count = spec
    return list(np.linspace(_number(lo, ctx), _number(hi, ctx), _integer(count, ctx)))


def _sweep_cell(spec: ProblemSpec, overrides: dict, args) -> dict:
    cell = dataclasses.replace(spec, **overrides)
    if "kappa" in overrides:
        cell.kappa_fraction = None
    if "kappa_fraction" in overrides:
        cell.kappa = None
    row = {
        "gamma": cell.gamma,
        "delta": cell.delta,
        "kappa": cell.kappa,
        "feasible": "no",
        "kappa_star": None,
        "status": "infeasible",
        "iterations": None,
        "final_residual": None,
    }
    try:
        instance = build_instance(cell)
    except (InfeasibleParametersError, ParameterError):
        return row
    row["feasible"] = "yes"
    row["kappa"] = instance.kappa
    row["kappa_star"] = instance.kappa_star
    if instance.warnings and not args.force:
        row["status"] = "flagged"
        return row
    trace = instance.run(
        _resolve_x0(cell, args.seed),
        steps=cell.step,
        max_iter=args.max_iter if args.max_iter is not None else cell.max_iter,
        tol=args.tol if args.tol is not None else cell.tol,
        enforce_steps=not args.force,
    )
    row["status"] = trace.status
    row["iterations"] = trace.iterations
    row["final_residual"] = trace.final_residual
    return row


def cmd_sweep(args) -> int:
    try:
        spec = parse_problem(_load_spec(args.spec), allow_grid=True)
        grid = spec.grid
        if not isinstance(grid, dict) or not grid:
            raise SpecError("problem.grid: expected a nonempty object")
        unknown = sorted(set(grid) - set(_GRID_AXES))
        if unknown:
            raise SpecError(f"problem.grid: unknown axes {unknown}")
        axes = [(name, _axis_values(grid[name], f"problem.grid.{name}")) for name in _GRID_AXES if name in grid]
    except SpecError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    cells = [dict(zip([n for n, _ in axes], combo)) for combo in product(*(v for _, v in axes))]
    jobs = args.jobs if args.jobs else None
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        rows = list(pool.map(lambda c: _sweep_cell(spec, c, args), cells))

    lines = ["gamma,delta,kappa,feasible,kappa_star,status,iterations,final_residual"]
    for row in rows:
        cols = [
            _fmt(row["gamma"]),
            _fmt(row["delta"]) if row["delta"] is not None else "",
            _fmt(row["kappa"]) if row["kappa"] is not None else "",
            row["feasible"],
            _fmt(row["kappa_star"]) if row["kappa_star"] is not None else "",
            row["status"],
            str(row["iterations"]) if row["iterations"] is not None else "",
            _fmt(row["final_residual"]) if row["final_residual"] is not None else "",
        ]
        lines.append(",".join(cols))
    try:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(f"wrote {len(rows)} cells to {args.out}")
    return EXIT_OK


def _certify_target(d, dim):
    """Build (callable, default_theta) from a certify-target object."""
    if not isinstance(d, dict) or "kind" not in d:
        raise SpecError("target: expected an object with a 'kind' field")
    kind = d["kind"]
    if kind == "operator":
        _check_keys(d, {"kind", "operator"}, set(), "target")
        op = parse_operator(d["operator"], "target.operator")
        return (lambda X: evaluate(op, X)), None
    if kind == "forward":
        _check_keys(d, {"kind", "operator", "gamma"}, set(), "target")
        op = parse_operator(d["operator"], "target.operator")
        gamma = _number(d["gamma"], "target.gamma")
        return (lambda X: X - gamma * evaluate(op, X)), None
    if kind == "resolvent":
        _check_keys(d, {"kind", "operator", "gamma"}, {"lambda_relax"}, "target")
        op = parse_operator(d["operator"], "target.operator")
        gamma = _number(d["gamma"], "target.gamma")
        lam = _number(d.get("lambda_relax", 1.0), "target.lambda_relax")
        return (lambda X: relaxed_resolvent(op, gamma, lam, X)), None
    if kind == "prox":
        _check_keys(d, {"kind", "function", "gamma"}, set(), "target")
        f = parse_function(d["function"], "target.function")
        gamma = _number(d["gamma"], "target.gamma")
        return (lambda X: prox(f, gamma, X)), None
    if kind == "iteration_map":
        _check_keys(d, {"kind", "problem"}, set(), "target")
        spec = parse_problem(d["problem"])
        if spec.dimension != dim:
            raise SpecError("target.problem: dimension mismatch with certify spec")
        instance = build_instance(spec)
        return instance.map, instance.cert.theta
    raise SpecError(f"target: unknown kind {kind!r}")


def cmd_certify(args) -> int:
    try:
        d = _load_spec(args.spec)
        _check_keys(d, {"dimension", "target"}, {"theta", "box", "samples", "tol", "seed"}, "certify")
        dim = _integer(d["dimension"], "certify.dimension")
        box = _number(d.get("box", oracle.DEFAULT_BOX), "certify.box")
        samples = _integer(d.get("samples", oracle.DEFAULT_SAMPLES), "certify.samples")
        tol = _number(d.get("tol", oracle.SLACK_TOL), "certify.tol")
        seed = _integer(d.get("seed", 0), "certify.seed")
        target, default_theta = _certify_target(d["target"], dim)
        if "theta" in d:
            theta = _number(d["theta"], "certify.theta")
        elif default_theta is not None:
            theta = default_theta
        else:
            raise SpecError("certify.theta: required for this target kind")
    except SpecError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InfeasibleParametersError, ParameterError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    if args.seed is not None:
        seed = args.seed
    report = oracle.sample_conical_check(target, theta, dim, box=box, n=samples, tol=tol, seed=seed)
    print(f"theta: {_fmt(theta)}")
    print(f"verdict: {report.verdict}")
    print(f"worst_slack: {_fmt(report.worst_slack)}")
    if report.witness is not None:
        x, y = report.witness
        print(f"witness_x: {_fmt_vec(x)}")
        print(f"witness_y: {_fmt_vec(y)}")
    return EXIT_OK if report.passed else EXIT_CERT_FAIL


def cmd_oracle(args) -> int:
    try:
        d = _load_spec(args.spec)
        if not isinstance(d, dict) or "operation" not in d:
            raise SpecError("oracle: expected an object with an 'operation' field")
        op_name = d["operation"]
        if op_name == "brute_prox":
            _check_keys(
                d, {"operation", "function", "gamma", "x"}, {"grid_radius", "grid_points"}, "oracle"
            )
            f = parse_function(d["function"], "oracle.function")
            result = oracle.brute_prox(
                f,
                _number(d["gamma"], "oracle.gamma"),
                _vector(d["x"], "oracle.x"),
                grid_radius=_number(d.get("grid_radius", oracle.DEFAULT_BOX), "oracle.grid_radius"),
                grid_points=_integer(d.get("grid_points", oracle.GRID_POINTS), "oracle.grid_points"),
            )
            print(_fmt_vec(result))
            return EXIT_OK
        if op_name == "analytic_zero":
            _check_keys(d, {"operation", "A", "dimension"}, {"B"}, "oracle")
            A = parse_operator(d["A"], "oracle.A")
            B = parse_operator(d["B"], "oracle.B") if "B" in d else None
            z = oracle.analytic_zero(A, B, dim=_integer(d["dimension"], "oracle.dimension"))
            print("unknown" if z is None else _fmt_vec(z))
            return EXIT_OK
        raise SpecError(f"oracle: unknown operation {op_name!r}")
    except SpecError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ParameterError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="conical",
        description="Certified splitting algorithms for generalized monotone operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, out=False):
        p.add_argument("--spec", required=True, help="path to the JSON specification")
        if out:
            p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--seed", type=int, default=None, help="override the spec's RNG seed")
        p.add_argument("--force", action="store_true", help="run flagged configurations anyway")
        p.add_argument("--max-iter", type=int, default=None, dest="max_iter")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--jobs", type=int, default=None, help="sweep parallelism (default: cores)")

    add_common(sub.add_parser("validate", help="check parameter feasibility and print kappa_star"))
    add_common(sub.add_parser("run", help="iterate a problem and write the trace CSV"), out=True)
    add_common(sub.add_parser("sweep", help="run a parameter grid and write a summary CSV"), out=True)
    add_common(sub.add_parser("certify", help="sample-check a conical averagedness claim"))
    add_common(sub.add_parser("oracle", help="run a brute-force oracle (brute_prox, analytic_zero)"))

    args = parser.parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "run": cmd_run,
        "sweep": cmd_sweep,
        "certify": cmd_certify,
        "oracle": cmd_oracle,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
