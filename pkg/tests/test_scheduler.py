import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import INSTANCE_PARAMS, SQRT02
from infogain import closed_form as cf
from infogain.checks import necessary_conditions
from infogain.numerics import integrate_canonical
from infogain.problem import validate_problem
from infogain.scheduler import solve, solve_case_a, solve_case_b, solve_case_c

U_STAR = 2 * -1 / SQRT02 + 1 / 0.2


@pytest.mark.parametrize("subcase, args", INSTANCE_PARAMS)
def test_reference_instances(subcase, args):
    sol = solve(validate_problem(*args))
    sched = sol.schedule
    assert sched.subcase == subcase
    assert sched.case == subcase[0]
    assert len(sched.segments) <= 3
    failed = [c for c in necessary_conditions(sol) if not c.passed]
    assert not failed


def test_a1_example():
    sched = solve(validate_problem(-1, 0.3, 0.1, 0, 1)).schedule
    assert sched.subcase == "A1" and sched.levels == (0.0,)
    assert 0.1 * cf.region1_solve(0.1, 0, 1, -1).p(0) == pytest.approx(0.04323, abs=1e-5)


def test_a2_example():
    pr = validate_problem(-0.5, 1.5, 3, 0, 4)
    sol = solve(pr)
    (t_sw,) = sol.schedule.switch_times
    assert sol.schedule.levels == (1.0, 0.0)
    x, p = sol.state(t_sw)
    assert x * p == pytest.approx(1.5, abs=1e-10)
    assert sol.trajectory.p[-1] == 0.0


def test_b1_and_c1_short_horizons():
    assert solve(validate_problem(-1, 0.2, 0.05, 0, 0.5)).schedule.subcase == "B1"
    assert solve(validate_problem(-1, 0.1, 0.05, 0, 0.4)).schedule.subcase == "C1"


def test_b3_switch_times_from_closed_forms():
    sol = solve(validate_problem(-1, 0.2, 0.05, 0, 5))
    t1, t2 = sol.schedule.switch_times
    expected = math.log((2 * -1 * SQRT02 + 1) / (2 * -1 * 0.05 + 1)) / (2 * -1)
    assert t1 == pytest.approx(expected, abs=1e-12)
    assert t1 == pytest.approx(1.071497, abs=1e-6)
    assert t2 == pytest.approx(5 - math.log(1 - 2 * SQRT02) / -2, abs=1e-12)
    assert sol.schedule.levels == pytest.approx((0.0, U_STAR, 0.0))
    # the state really reaches sqrt(alpha) at t' under u = 0
    traj = integrate_canonical(validate_problem(-1, 0.2, 0.05, 0, t1), 0.0, t1 / 2000)
    assert traj.x[-1] == pytest.approx(SQRT02, abs=1e-12)


def test_dwell_sits_on_tangency_point():
    sol = solve(validate_problem(-1, 0.2, 0.05, 0, 5))
    dwell = sol.pieces[1]
    t = np.linspace(dwell.t_start, dwell.t_end, 11)
    assert np.allclose(dwell.x(t), SQRT02, atol=1e-15)
    assert np.allclose(dwell.p(t), SQRT02, atol=1e-15)
    assert cf.vector_field((SQRT02, SQRT02), dwell.u, -1, 0.2) == pytest.approx((0, 0), abs=1e-14)


def test_start_on_tangency_point_dwells_immediately():
    sched = solve(validate_problem(-1, 0.2, SQRT02, 0, 6)).schedule
    assert sched.subcase == "B3"
    assert sched.levels == pytest.approx((U_STAR, 0.0))
    assert sched.switch_times[0] == pytest.approx(6 - math.log(1 - 2 * SQRT02) / -2, abs=1e-12)


def test_b5_levels():
    sched = solve(validate_problem(-1, 0.2, 0.5, 0, 2)).schedule
    assert sched.subcase == "B5"
    assert sched.levels == pytest.approx((1.0, U_STAR, 0.0))
    assert sched.switch_times == pytest.approx((0.331305, 0.875823), abs=1e-6)


def test_c3_and_c4_switch_conditions():
    sol = solve(validate_problem(-1, 0.1, 2, 0, 4))
    assert sol.schedule.subcase == "C3"
    assert sol.schedule.switch_times == pytest.approx((3.670331,), abs=1e-6)

    sol = solve(validate_problem(-1, 0.1, 0.05, 0, 6))
    assert sol.schedule.subcase == "C4"
    assert sol.schedule.levels == (0.0, 1.0, 0.0)
    for t, left, right in sol.switch_states():
        assert left[0] * left[1] == pytest.approx(0.1, abs=1e-8)
        assert np.allclose(left, right, atol=1e-8)


def test_tie_goes_to_no_switch():
    a, alpha, t1 = -1.0, 0.3, 1.0
    pbar0 = float(cf.region1_solve(0, 0, t1, a).p(0))
    x0 = alpha / pbar0
    sched = solve(validate_problem(a, alpha, x0, 0, t1)).schedule
    assert sched.subcase == "A1" and sched.switch_times == ()


def test_case_specific_entry_points_check_the_case():
    pr = validate_problem(-1, 0.2, 0.05, 0, 5)
    assert solve_case_b(pr).schedule.subcase == "B3"
    with pytest.raises(ValueError):
        solve_case_a(pr)
    with pytest.raises(ValueError):
        solve_case_c(pr)


def test_trajectory_duplicates_switch_times():
    sol = solve(validate_problem(-1, 0.1, 0.05, 0, 6))
    traj = sol.trajectory
    for t in sol.schedule.switch_times:
        idx = np.flatnonzero(traj.times == t)
        assert len(idx) == 2
        assert traj.u[idx[0]] != traj.u[idx[1]]
    assert np.all(np.diff(traj.times) >= 0)
    assert traj.x[0] == 0.05 and traj.p[-1] == 0.0


@pytest.mark.parametrize("subcase, args", INSTANCE_PARAMS)
def test_closed_form_trajectory_matches_rk4(subcase, args):
    pr = validate_problem(*args)
    sol = solve(pr)
    traj = integrate_canonical(pr, sol.schedule, pr.horizon / 4000)
    x_cf = np.array([sol.state(t)[0] for t in traj.times])
    assert np.max(np.abs(traj.x - x_cf)) < 1e-9


@settings(max_examples=40)
@given(st.sampled_from(INSTANCE_PARAMS), st.floats(-5, 5))
def test_time_shift_invariance(param, shift):
    _, args = param.values
    a, alpha, x0, t0, t1 = args
    base = solve(validate_problem(*args)).schedule
    moved = solve(validate_problem(a, alpha, x0, t0 + shift, t1 + shift)).schedule
    assert moved.subcase == base.subcase
    assert np.allclose(np.array(moved.switch_times) - shift, base.switch_times, atol=1e-9)


@settings(max_examples=80)
@given(st.floats(-2.0, -0.2), st.floats(0.02, 2.0), st.floats(0.0, 3.0), st.floats(0.1, 6.0))
def test_random_instances_satisfy_necessary_conditions(a, alpha, x0, T):
    sol = solve(validate_problem(a, alpha, x0, 0.0, T))
    failed = [c for c in necessary_conditions(sol) if not c.passed]
    assert not failed, failed


def test_b3_routing_below_tangency_is_optimal():
    # x0 < sqrt(alpha) with x0 * pbar(t0) > alpha is not covered by the B2 rule
    from infogain.numerics import evaluate_cost
    from infogain.oracles import oracle_pattern_search

    rng = np.random.default_rng(1)
    checked = 0
    while checked < 5:
        a = -rng.uniform(0.5, 1.5)
        c = math.sqrt(a * a + 1)
        alpha = rng.uniform((a + c) ** 2, 1 / (4 * a * a))
        x0 = rng.uniform(0.7, 1.0) * math.sqrt(alpha)
        T = rng.uniform(1, 6)
        if x0 * cf.region1_solve(x0, 0, T, a).p(0) <= alpha:
            continue
        pr = validate_problem(a, alpha, x0, 0, T)
        sched = solve(pr).schedule
        assert sched.subcase == "B3"
        J = evaluate_cost(pr, sched, T / 1e4).total
        assert J <= oracle_pattern_search(pr, 128).cost + 1e-9
        checked += 1


@pytest.mark.parametrize("args", [(-1, 0.03125, 0, 0, 4), (-2, 0.02, 0, 0, 6), (-3, 0.01, 0.05, 0, 10)])
def test_c4_long_unit_gain_arc(args):
    # the u = 1 arc spans most of the horizon, where forward shooting is ill-conditioned
    sol = solve(validate_problem(*args))
    assert sol.schedule.subcase == "C4"
    failed = [c for c in necessary_conditions(sol) if not c.passed]
    assert not failed, failed
