import numpy as np
import pytest

from conical.calculus import (
    ConicalCert,
    ScaledConicalCert,
    compose2,
    compose_many,
    compose_scaled,
    convex_combination,
    firmly_nonexpansive_shift,
    relax,
)
from conical.errors import CompositionError, ParameterError
from conical.operators import ScaledIdentity, evaluate
from conical.oracle import sample_conical_check


def tight_map(theta):
    """Scalar catalog operator realizing conical theta exactly: (1-2*theta)*Id."""
    op = ScaledIdentity(1.0 - 2.0 * theta)
    return lambda X: evaluate(op, X)


# --- relax -------------------------------------------------------------------


def test_relax_values():
    assert relax(0.5, 2.0) == pytest.approx(1.0)
    assert relax(0.7, 1.0) == pytest.approx(0.7)
    assert relax(1.0 / 3.0, 1.5) == pytest.approx(0.5)


def test_relax_rejects_nonpositive():
    with pytest.raises(ParameterError):
        relax(0.0, 1.0)
    with pytest.raises(ParameterError):
        relax(0.5, -1.0)


# --- convex combination --------------------------------------------------------


def test_convex_combination_values():
    assert convex_combination([1.0, 1.0], [0.5, 0.5]) == pytest.approx(1.0)
    assert convex_combination([0.5, 1.5], [0.5, 0.5]) == pytest.approx(1.0)
    assert convex_combination([2.0, 0.5, 0.5], [0.2, 0.4, 0.4]) == pytest.approx(0.8)


def test_convex_combination_validation():
    with pytest.raises(ParameterError):
        convex_combination([1.0, 1.0], [0.5, 0.6])
    with pytest.raises(ParameterError):
        convex_combination([1.0], [0.5, 0.5])
    with pytest.raises(ParameterError):
        convex_combination([], [])


def test_convex_combination_sampled_soundness():
    thetas = [2.0, 0.5, 0.5]
    weights = [0.2, 0.4, 0.4]
    theta = convex_combination(thetas, weights)
    maps = [tight_map(t) for t in thetas]
    T = lambda X: sum(w * m(X) for w, m in zip(weights, maps))
    assert sample_conical_check(T, theta, 2, n=4000, seed=0).passed


# --- compose2 -----------------------------------------------------------------


def test_compose2_values():
    assert compose2(1.0, 1.0) == 1.0
    assert compose2(0.5, 0.5) == pytest.approx(2.0 / 3.0)
    assert compose2(2.0, 0.25) == pytest.approx(2.5)


def test_compose2_symmetric_exactly():
    rng = np.random.default_rng(0)
    for _ in range(200):
        t1, t2 = rng.uniform(0.05, 1.6, size=2)
        if t1 * t2 >= 1 - 1e-9:
            continue
        assert compose2(t1, t2) == compose2(t2, t1)


def test_compose2_boundary_rejected():
    with pytest.raises(CompositionError):
        compose2(2.0, 0.5)  # product exactly 1, not both 1
    with pytest.raises(CompositionError):
        compose2(3.0, 0.5)  # product above 1


def test_compose2_classification_grid():
    # output = 1 iff some input = 1; output < 1 iff both inputs < 1
    grid = np.arange(0.01, 3.0001, 0.01)
    for t1 in grid:
        for t2 in grid:
            near_one = abs(t1 - 1) <= 1e-12 and abs(t2 - 1) <= 1e-12
            if not near_one and t1 * t2 >= 1 - 1e-12:
                continue
            theta = compose2(t1, t2)
            some_one = abs(t1 - 1) <= 1e-9 or abs(t2 - 1) <= 1e-9
            assert (abs(theta - 1) <= 1e-9) == some_one, (t1, t2, theta)
            assert (theta < 1 - 1e-9) == (t1 < 1 - 1e-9 and t2 < 1 - 1e-9), (t1, t2)


def test_compose2_sampled_soundness():
    for t1, t2 in [(0.5, 0.5), (2.0, 0.25), (1.0, 1.0)]:
        theta = compose2(t1, t2)
        m1, m2 = tight_map(t1), tight_map(t2)
        T = lambda X: m2(m1(X))
        assert sample_conical_check(T, theta, 2, n=4000, seed=1).passed


# --- compose_scaled -------------------------------------------------------------


def test_compose_scaled_values():
    c = compose_scaled(ScaledConicalCert(-1.0, 0.5), ScaledConicalCert(-1.0, 0.5))
    assert c.omega == pytest.approx(1.0)
    assert c.theta == pytest.approx(2.0 / 3.0)

    c = compose_scaled(ScaledConicalCert(2.0, 1.0), ScaledConicalCert(0.5, 1.0))
    assert (c.omega, c.theta) == (1.0, 1.0)

    c = compose_scaled(ScaledConicalCert(3.0, 1.0 / 3.0), ScaledConicalCert(1.0 / 3.0, 2.0))
    assert c.omega == pytest.approx(1.0)
    assert c.theta == pytest.approx(3.0)


def test_compose_scaled_sampled_soundness():
    # omega1*T1 and omega2*T2 conically averaged => omega1*omega2*T2T1 too.
    omega1, theta1 = -1.0, 0.5
    omega2, theta2 = 2.0, 0.25
    cert = compose_scaled(ScaledConicalCert(omega1, theta1), ScaledConicalCert(omega2, theta2))
    # T_i = (1/omega_i) * tight realization of theta_i
    t1 = lambda X: tight_map(theta1)(X) / omega1
    t2 = lambda X: tight_map(theta2)(X) / omega2
    T = lambda X: cert.omega * t2(t1(X))
    assert sample_conical_check(T, cert.theta, 2, n=4000, seed=2).passed


def test_scaled_cert_validation():
    with pytest.raises(ParameterError):
        ScaledConicalCert(0.0, 0.5)
    with pytest.raises(ParameterError):
        ConicalCert(-0.5)


# --- compose_many ----------------------------------------------------------------


def test_compose_many_all_half():
    res = compose_many([0.5, 0.5, 0.5])
    assert res.theta == pytest.approx(0.75)
    assert not res.nonexpansive_only


def test_compose_many_all_ones_branch():
    res = compose_many([1.0, 1.0, 1.0])
    assert res.theta == 1.0
    assert res.nonexpansive_only


def test_compose_many_mixed_conical_example():
    res = compose_many([1.5, 0.25])
    assert res.theta == pytest.approx(1.6)
    assert res.theta == pytest.approx(compose2(1.5, 0.25))


def test_compose_many_chain_violation_names_position():
    with pytest.raises(CompositionError, match="position 2"):
        compose_many([1.5, 0.8])


def test_compose_many_mixed_ones_not_covered():
    with pytest.raises(CompositionError):
        compose_many([1.0, 1.5])


def test_compose_many_needs_two():
    with pytest.raises(ParameterError):
        compose_many([0.5])


def _random_admissible_tuple(rng):
    """Random chain satisfying the prefix condition with margin."""
    m = int(rng.integers(2, 6))
    if rng.uniform() < 0.5:
        return list(rng.uniform(0.05, 0.95, size=m))
    thetas = [float(rng.uniform(1.05, 1.9))]
    ratios = thetas[0] / (1.0 - thetas[0])
    for _ in range(m - 1):
        bound = 1.0 + 1.0 / ratios
        hi = min(bound * 0.95, 1.9) if bound > 0 else 0.0
        if hi <= 0.06:
            break
        t = float(rng.uniform(0.05, hi))
        if abs(t - 1.0) < 1e-3:
            t = 0.9
        thetas.append(t)
        ratios += t / (1.0 - t)
    if len(thetas) < 2:
        thetas.append(0.5)
    return thetas


def test_compose_many_equals_fold_and_additivity():
    rng = np.random.default_rng(77)
    for _ in range(1000):
        thetas = _random_admissible_tuple(rng)
        res = compose_many(thetas)
        folded = thetas[0]
        for t in thetas[1:]:
            folded = compose2(folded, t)
        assert abs(res.theta - folded) <= 1e-12 * (1 + abs(folded))
        lhs = res.theta / (1.0 - res.theta)
        rhs = sum(t / (1.0 - t) for t in thetas)
        assert abs(lhs - rhs) <= 1e-10 * (1 + abs(rhs))


def test_compose_many_below_one_closure():
    rng = np.random.default_rng(5)
    for _ in range(200):
        thetas = list(rng.uniform(0.05, 0.95, size=int(rng.integers(2, 6))))
        res = compose_many(thetas)
        assert res.theta < 1.0


# --- firmly nonexpansive shift -----------------------------------------------------


def test_firmly_nonexpansive_shift_values():
    assert firmly_nonexpansive_shift(2.0) == 1.0
    assert firmly_nonexpansive_shift(1.0) == 0.5
    assert firmly_nonexpansive_shift(4.0) == 2.0


def test_firmly_nonexpansive_shift_sampled():
    # Id - 4*prox of a convex quadratic: prox = x/2, so the shifted map is -Id
    from conical.operators import Quadratic
    from conical.resolvents import prox

    f = Quadratic(np.eye(1), np.zeros(1))
    T = lambda X: X - 4.0 * prox(f, 1.0, X)
    assert sample_conical_check(T, firmly_nonexpansive_shift(4.0), 1, n=4000, seed=3).passed
    with pytest.raises(ParameterError):
        firmly_nonexpansive_shift(0.0)
