import numpy as np
import pytest

from conical.algorithms import (
    ConstantStep,
    HarmonicTailStep,
    adr_kappa_star,
    build_adr,
    build_rfb,
    build_rpp,
    check_steps,
    convex_min_instance,
    feasibility_direct_comonotone,
    feasibility_direct_monotone,
    feasibility_interval_comonotone,
    feasibility_interval_monotone,
    km_run,
    rfb_kappa_star,
    rpp_kappa_star,
    shadow,
    validate_params_comonotone,
    validate_params_monotone,
)
from conical.errors import InfeasibleParametersError, ParameterError
from conical.operators import (
    Affine,
    GradQuadratic,
    L1,
    Quadratic,
    ScaledIdentity,
    Subdifferential,
    WeaklyConvexL1,
)
from conical.oracle import sample_conical_check
from conical.resolvents import prox, reflected_resolvent

ROTATION = Affine(np.array([[0.0, 1.0], [-1.0, 0.0]]), np.zeros(2))


# --- km engine -----------------------------------------------------------------


def test_km_identity_converges_immediately():
    trace = km_run(lambda x: x, 0.7, [3.0, -1.0], tol=1e-12)
    assert trace.status == "converged"
    assert trace.iterations == 0
    assert trace.final_residual == 0.0


def test_km_one_step_to_zero():
    # the proximal point map of a = -0.5 at gamma 4, kappa 0.5 is the zero map
    inst = build_rpp(ScaledIdentity(-0.5), 4.0, 0.5)
    trace = inst.run([8.0], tol=1e-12)
    assert trace.status == "converged"
    assert trace.iterations == 1
    np.testing.assert_array_equal(trace.x_final, [0.0])


def test_km_geometric_halving():
    f = Quadratic(np.eye(1), np.zeros(1))
    T = lambda x: prox(f, 1.0, x)
    trace = km_run(T, 0.5, [8.0], tol=None, max_iter=20)
    expected = 8.0 / 2.0 ** (np.arange(21) + 1)
    np.testing.assert_allclose(trace.residuals, expected, rtol=1e-12)


def test_km_trace_fields():
    inst = build_rpp(ScaledIdentity(-0.5), 4.0, 0.25)  # T = 0.5*Id
    trace = inst.run([4.0], tol=None, max_iter=30, fejer_ref=[0.0], solution=[0.0])
    assert trace.fejer_gaps is not None and len(trace.fejer_gaps) == 30
    assert np.all(trace.fejer_gaps <= 1e-12)
    np.testing.assert_allclose(trace.dist_to_solution, 4.0 * 0.5 ** np.arange(31), rtol=1e-12)
    np.testing.assert_allclose(trace.rate_stats, np.sqrt(np.arange(31)) * trace.residuals)


def test_km_snapshots_stride():
    inst = build_rpp(ScaledIdentity(-0.5), 4.0, 0.25)
    trace = inst.run([4.0], tol=None, max_iter=10, snapshot_stride=4)
    assert [n for n, _ in trace.snapshots] == [0, 4, 8]


def test_km_residual_nonincreasing_for_constant_steps():
    f = Subdifferential(L1(1.0))
    B = GradQuadratic(np.eye(3), -np.array([3.0, -2.0, 0.4]))
    inst = build_rfb(f, B, 2.5, 0.8 * rfb_kappa_star(0.0, 1.0, 2.5))
    trace = inst.run(np.zeros(3), tol=None, max_iter=500)
    diffs = np.diff(trace.residuals)
    assert np.all(diffs <= 1e-12 * (1 + trace.residuals[:-1]))


def test_km_rejects_inadmissible_constant_step():
    with pytest.raises(ParameterError):
        km_run(lambda x: -x, 2.0, [1.0], steps=ConstantStep(1.0))


def test_km_inadmissible_step_runs_when_not_enforced():
    trace = km_run(
        lambda x: -x, 2.0, [1.0], steps=ConstantStep(1.0), enforce_steps=False, max_iter=10, tol=None
    )
    assert trace.warnings
    assert trace.status == "max_iter"


def test_km_divergence_detection():
    trace = km_run(lambda x: 3.0 * x, 1.0, [1.0], tol=None, max_iter=1000, enforce_steps=False)
    assert trace.status == "diverged"


def test_km_harmonic_tail_steps():
    inst = build_rpp(ROTATION, 1.0, 1.0)  # theta = 1/2
    trace = inst.run([5.0, -3.0], steps=HarmonicTailStep(0.5), tol=1e-8, max_iter=5000)
    assert trace.status == "converged"
    assert np.linalg.norm(trace.x_final) <= 1e-6


def test_check_steps_flags():
    flags = check_steps(ConstantStep(1.0), 0.5)
    assert flags.admissible and flags.divergent_sum and flags.rate_hypothesis
    endpoint = check_steps(ConstantStep(2.0), 0.5)
    assert endpoint.admissible and not endpoint.divergent_sum
    harmonic = check_steps(HarmonicTailStep(1.0), 2.0)
    assert harmonic.admissible and harmonic.divergent_sum and not harmonic.rate_hypothesis
    with pytest.raises(ParameterError):
        check_steps(HarmonicTailStep(1.5), 1.0)


# --- rpp -------------------------------------------------------------------------


def test_rpp_kappa_star_values():
    assert rpp_kappa_star(0.0, 1.0) == pytest.approx(2.0)
    assert rpp_kappa_star(-2.0, 4.0) == pytest.approx(1.0)
    assert rpp_kappa_star(1.0, 1.0) == pytest.approx(4.0)


def test_rpp_gamma_range_enforced():
    with pytest.raises(ParameterError):
        rpp_kappa_star(-2.0, 2.0)
    with pytest.raises(ParameterError):
        rpp_kappa_star(0.0, 0.0)


def test_rpp_flag_above_threshold():
    inst = build_rpp(ScaledIdentity(-0.5), 4.0, 1.0)
    assert inst.warnings
    inst = build_rpp(ScaledIdentity(-0.5), 4.0, 0.5)
    assert not inst.warnings


def test_rpp_certified_theta_sampled():
    inst = build_rpp(ScaledIdentity(1.0), 1.0, 2.0)  # kappa_star 4, theta 1/2
    assert inst.cert.theta == pytest.approx(0.5)
    assert sample_conical_check(inst.map, inst.cert.theta, 2, n=10000, tol=1e-8, seed=7).passed


# --- rfb -------------------------------------------------------------------------


def test_rfb_kappa_star_values():
    assert rfb_kappa_star(0.0, 1.0, 3.0) == pytest.approx(0.5)
    assert rfb_kappa_star(-0.5, 0.5, 1.0) == pytest.approx(1.0)  # case alpha+beta = 0
    assert rfb_kappa_star(1.0, 1.0, 2.0) == pytest.approx(1.0)


def test_rfb_matches_monotone_corollary_formula():
    beta = 1.0
    for gamma in (0.5, 1.0, 1.9, 2.5, 3.5, 3.9):
        assert rfb_kappa_star(0.0, beta, gamma) == pytest.approx((4 * beta - gamma) / (2 * beta))


def test_rfb_parameter_errors():
    with pytest.raises(ParameterError, match="below"):
        rfb_kappa_star(0.0, 1.0, 5.0)
    with pytest.raises(ParameterError, match="exceed"):
        rfb_kappa_star(-0.9, 1.0, 0.1)
    with pytest.raises(ParameterError, match="gamma = 2\\*beta"):
        rfb_kappa_star(-1.0, 1.0, 1.5)
    with pytest.raises(ParameterError):
        rfb_kappa_star(-2.0, 1.0, 1.0)  # alpha + beta < 0


def test_rfb_rejects_subdifferential_forward_operator():
    with pytest.raises(ParameterError):
        build_rfb(ScaledIdentity(1.0), Subdifferential(L1(1.0)), 1.0, 0.5)


def test_rfb_zero_forward_operator_equals_rpp():
    A = ScaledIdentity(2.0)
    rfb = build_rfb(A, ScaledIdentity(0.0), 1.0, 0.7)
    rpp = build_rpp(A, 1.0, 0.7)
    x0 = np.array([3.0, -1.0])
    t1 = rfb.run(x0, tol=None, max_iter=50)
    t2 = rpp.run(x0, tol=None, max_iter=50)
    np.testing.assert_array_equal(t1.x_final, t2.x_final)
    np.testing.assert_array_equal(t1.residuals, t2.residuals)


def test_rfb_certified_theta_sampled():
    A = Subdifferential(L1(1.0))
    B = GradQuadratic(np.eye(2), np.array([-1.0, 0.5]))
    inst = build_rfb(A, B, 1.9, 0.8 * rfb_kappa_star(0.0, 1.0, 1.9))
    assert sample_conical_check(inst.map, inst.cert.theta, 2, n=10000, tol=1e-8, seed=8).passed


def test_rfb_fejer_monotone_with_known_fixed_point():
    c = np.array([3.0, -2.0, 0.4])
    inst = build_rfb(
        Subdifferential(L1(1.0)), GradQuadratic(np.eye(3), -c), 1.9, 0.8 * rfb_kappa_star(0.0, 1.0, 1.9)
    )
    solution = np.sign(c) * np.maximum(np.abs(c) - 1.0, 0.0)
    trace = inst.run(np.zeros(3), tol=None, max_iter=300, fejer_ref=solution)
    assert np.all(trace.fejer_gaps <= 1e-12)


# --- adr -------------------------------------------------------------------------


def test_adr_classical_dr_thresholds():
    assert adr_kappa_star(0.0, 0.0, 1.3, 1.3, "monotone") == pytest.approx(1.0)
    # strongly monotone pair: corollary formula 1 + gamma*alpha*beta/(alpha+beta)
    assert adr_kappa_star(1.0, 1.0, 1.0, 1.0, "monotone") == pytest.approx(1.5)
    # comonotone pair at gamma = delta: gamma + alpha*beta/(alpha+beta)
    assert adr_kappa_star(1.0, 1.0, 1.0, 1.0, "comonotone") == pytest.approx(1.5)


def test_adr_comonotone_threshold_matches_dr_corollary():
    rng = np.random.default_rng(0)
    for _ in range(100):
        alpha, beta = rng.uniform(0.1, 2.0, size=2)
        gamma = float(rng.uniform(0.2, 3.0))
        expected = gamma + alpha * beta / (alpha + beta)
        assert adr_kappa_star(alpha, beta, gamma, gamma, "comonotone") == pytest.approx(expected)


def test_adr_monotone_threshold_matches_dr_corollary():
    rng = np.random.default_rng(1)
    for _ in range(100):
        alpha, beta = rng.uniform(0.1, 2.0, size=2)
        gamma = float(rng.uniform(0.2, 3.0))
        expected = 1.0 + gamma * alpha * beta / (alpha + beta)
        assert adr_kappa_star(alpha, beta, gamma, gamma, "monotone") == pytest.approx(expected)


def test_adr_coupling_identity():
    inst = build_adr(ScaledIdentity(1.0), ScaledIdentity(1.0), 0.8, 1.7, 0.3, "monotone")
    assert (inst.lam - 1.0) * (inst.mu - 1.0) == pytest.approx(1.0, abs=1e-12)
    assert inst.lam == pytest.approx(1.0 + inst.delta / inst.gamma)
    assert inst.mu == pytest.approx(1.0 + inst.gamma / inst.delta)


def test_adr_pinned_delta_when_constants_cancel():
    # monotone regime, alpha = -1, beta = 1: delta = gamma/(1+2*gamma*alpha)
    A = Subdifferential(WeaklyConvexL1(1.0, 1.0))
    B = ScaledIdentity(1.0)
    inst = build_adr(A, B, 0.25, 0.5, 0.5, "monotone")
    assert inst.kappa_star == 1.0
    with pytest.raises(ParameterError, match="pins delta"):
        build_adr(A, B, 0.25, 0.7, 0.5, "monotone")
    with pytest.raises(ParameterError):
        build_adr(A, B, 0.75, 0.5, 0.5, "monotone")  # 1 + 2*gamma*alpha <= 0


def test_adr_infeasible_raises_with_report():
    with pytest.raises(InfeasibleParametersError) as err:
        adr_kappa_star(-1.0, 2.0, 1.0, 1.0, "comonotone")  # gamma below gamma0
    report = err.value.report
    assert report is not None
    assert report.gamma0 == pytest.approx(4.0 - 2.0 * np.sqrt(2.0))
    assert report.status == "infeasible"


def test_adr_classical_dr_map_equivalence():
    f = Subdifferential(L1(1.0))
    g = Subdifferential(L1(1.0))
    inst = build_adr(f, g, 1.0, 1.0, 0.5, "monotone")
    assert (inst.lam, inst.mu) == (2.0, 2.0)
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.uniform(-5, 5, size=3)
        manual = 0.5 * x + 0.5 * reflected_resolvent(
            g, 1.0, reflected_resolvent(f, 1.0, x)
        )
        np.testing.assert_allclose(inst.map(x), manual, atol=1e-12)


def test_adr_certified_theta_sampled():
    inst = convex_min_instance(L1(1.0), L1(1.0), 1.0, 1.0, 0.5)
    assert inst.cert.theta == pytest.approx(0.5)
    assert sample_conical_check(
        lambda X: inst.map(X), inst.cert.theta, 3, n=10000, tol=1e-8, seed=9
    ).passed


def test_adr_mirrored_instances_share_certificate_and_limit():
    f = WeaklyConvexL1(1.0, 0.5)
    g = Quadratic(np.array([[2.0]]), np.array([-2.0]))
    gamma, delta = 1.0, 1.0
    kappa = 0.8 * adr_kappa_star(-0.5, 2.0, gamma, delta, "monotone")
    fwd = convex_min_instance(f, g, gamma, delta, kappa)
    rev = convex_min_instance(f, g, gamma, delta, kappa, swapped=True)
    assert fwd.cert.theta == rev.cert.theta
    tf = fwd.run([5.0], tol=None, max_iter=3000)
    tr = rev.run([5.0], tol=None, max_iter=3000)
    sf = fwd.shadow_point(tf.x_final)
    sr = rev.shadow_point(tr.x_final)
    np.testing.assert_allclose(sf, sr, atol=1e-6)


def test_convex_min_requires_curvature_budget():
    # alpha + beta < 0 is out of scope
    with pytest.raises(ParameterError):
        convex_min_instance(WeaklyConvexL1(1.0, 2.0), L1(1.0), 0.2, 0.2, 0.1)


# --- shadow ----------------------------------------------------------------------


def test_shadow_identity_for_forward_backward():
    inst = build_rfb(
        Subdifferential(L1(1.0)), GradQuadratic(np.eye(2), np.zeros(2)), 1.0, 0.5
    )
    x = np.array([0.1, -0.2])
    np.testing.assert_array_equal(shadow(inst, inst.run(x).x_final), inst.run(x).x_final)


def test_shadow_warns_on_non_fixed_point():
    inst = build_rpp(ScaledIdentity(-0.5), 4.0, 0.25)
    with pytest.warns(RuntimeWarning):
        shadow(inst, [100.0])


def test_shadow_classical_dr_at_origin():
    inst = convex_min_instance(
        Quadratic(np.eye(2), np.zeros(2)), Quadratic(np.eye(2), np.zeros(2)), 1.0, 1.0, 0.5
    )
    np.testing.assert_allclose(shadow(inst, np.zeros(2)), np.zeros(2), atol=1e-12)


# --- validators -------------------------------------------------------------------


def test_validator_comonotone_gamma0_example():
    report = validate_params_comonotone(-1.0, 2.0, 2.0, 1.0)
    assert report.gamma0 == pytest.approx(4.0 - 2.0 * np.sqrt(2.0))


def test_validator_comonotone_interval_example():
    report = validate_params_comonotone(1.0, 1.0, 1.0, 3.0)
    assert report.disc == pytest.approx(4.0)
    lo, hi = report.delta_interval
    assert lo == pytest.approx(0.0)
    assert hi == pytest.approx(7.0)
    assert report.status == "feasible"
    assert validate_params_comonotone(1.0, 1.0, 1.0, 7.5).status == "infeasible"


def test_validator_zero_curvature_is_boundary_on_diagonal():
    assert validate_params_comonotone(0.0, 0.0, 1.3, 1.3).status == "boundary"
    assert validate_params_comonotone(0.0, 0.0, 1.0, 1.5).status == "infeasible"
    assert validate_params_monotone(0.0, 0.0, 0.7, 0.7).status == "boundary"
    assert validate_params_monotone(0.0, 0.0, 0.7, 1.0).status == "infeasible"


def test_validator_monotone_interval_example():
    report = validate_params_monotone(-0.3, 0.5, 1.0, 2.0)
    assert report.disc == pytest.approx(0.14)
    lo, hi = report.delta_interval
    root = 2.0 * np.sqrt(0.14)
    assert lo == pytest.approx(1.0 / (0.4 + root))
    assert hi == np.inf  # lower 1/delta bound is negative
    assert report.status == "feasible"


def test_validator_scope_and_margins():
    with pytest.raises(ParameterError):
        validate_params_comonotone(-2.0, 1.0, 1.0, 1.0)
    with pytest.raises(ParameterError):
        validate_params_monotone(0.0, 0.0, -1.0, 1.0)
    report = validate_params_monotone(-0.5, 2.0, 1.0, 1.0)
    m1, m2 = report.resolvent_margins
    assert m1 == pytest.approx(0.5) and m2 == pytest.approx(3.0)
    assert report.feasible


def test_validator_forms_agree_on_random_tuples():
    rng = np.random.default_rng(17)
    n = 4000
    alpha = rng.uniform(-2, 2, size=n)
    beta = np.maximum(rng.uniform(-2, 2, size=n), -alpha + rng.uniform(0, 2, size=n))
    gamma = rng.uniform(0.01, 5.0, size=n)
    delta = rng.uniform(0.01, 5.0, size=n)
    for direct, interval in (
        (feasibility_direct_comonotone, feasibility_interval_comonotone),
        (feasibility_direct_monotone, feasibility_interval_monotone),
    ):
        d = direct(alpha, beta, gamma, delta)
        i = interval(alpha, beta, gamma, delta)
        assert not np.any((d == 1) & (i == -1))
        assert not np.any((d == -1) & (i == 1))
        # the grid should exercise both verdicts
        assert np.any(d == 1) and np.any(d == -1)
