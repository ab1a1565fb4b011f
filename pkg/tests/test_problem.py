import math

import pytest
from hypothesis import given, strategies as st

from infogain.errors import DomainError
from infogain.problem import (Case, Region, ScalarProblem, case_thresholds, classify_case,
                              gain_from_control, stationary_point, validate_problem)

negative_a = st.floats(-10.0, -0.01)


def test_valid_problem_roundtrips_through_dict():
    pr = validate_problem(-1, 0.2, 0.5, 0, 2)
    assert pr.to_dict() == {"a": -1.0, "alpha": 0.2, "x0": 0.5, "t0": 0.0, "t1": 2.0}
    assert ScalarProblem.from_dict(pr.to_dict()) == pr


@pytest.mark.parametrize("args, message", [
    ((0.5, 0.2, 0.5, 0, 2), "a must be negative"),
    ((0.0, 0.2, 0.5, 0, 2), "a must be negative"),
    ((-1, 0.0, 0.5, 0, 2), "alpha must be positive"),
    ((-1, 0.2, -0.1, 0, 2), "x0 must be nonnegative"),
    ((-1, 0.2, 0.5, 2, 2), "t1 must be greater than t0"),
    ((-1, 0.2, 0.5, 3, 2), "t1 must be greater than t0"),
])
def test_invalid_problems_name_the_assumption(args, message):
    with pytest.raises(DomainError, match=message):
        validate_problem(*args)


def test_non_finite_inputs_rejected():
    with pytest.raises(DomainError):
        validate_problem(float("nan"), 0.2, 0.5, 0, 2)
    with pytest.raises(DomainError):
        validate_problem(-1, 0.2, 0.5, 0, float("inf"))


def test_zero_initial_variance_is_allowed():
    assert validate_problem(-1, 0.2, 0.0, 0, 1).x0 == 0.0


@pytest.mark.parametrize("alpha, case", [(0.3, Case.A), (0.2, Case.B), (0.1, Case.C)])
def test_classification_examples(alpha, case):
    lab = classify_case(validate_problem(-1, alpha, 0.5, 0, 1))
    assert lab.label is case
    assert lab.threshold_low == pytest.approx(0.171572875, abs=1e-9)
    assert lab.threshold_high == 0.25


def test_thresholds_are_closed_interval_for_case_b():
    low, high = case_thresholds(-1.0)
    for alpha in (low, high):
        lab = classify_case(validate_problem(-1, alpha, 0.5, 0, 1))
        assert lab.label is Case.B and lab.near_boundary


def test_near_threshold_flags_boundary():
    low, high = case_thresholds(-1.0)
    lab = classify_case(validate_problem(-1, high * (1 + 1e-13), 0.5, 0, 1))
    assert lab.label is Case.B and lab.near_boundary
    lab = classify_case(validate_problem(-1, high * (1 + 1e-9), 0.5, 0, 1))
    assert lab.label is Case.A and not lab.near_boundary


@given(negative_a)
def test_threshold_ordering(a):
    low, high = case_thresholds(a)
    assert 0 < low < high


@given(negative_a, st.floats(1e-4, 1e3))
def test_classification_matches_rules(a, alpha):
    low, high = case_thresholds(a)
    lab = classify_case(validate_problem(a, alpha, 0.1, 0, 1))
    if lab.near_boundary:
        assert lab.label is Case.B
    elif alpha > high:
        assert lab.label is Case.A
    elif alpha < low:
        assert lab.label is Case.C
    else:
        assert lab.label is Case.B


def test_stationary_point_examples():
    sp = stationary_point(validate_problem(-0.5, 2, 1, 0, 1))
    assert (sp.x_e, sp.p_e, sp.region) == (1.0, 1.0, Region.REGION1)

    sp = stationary_point(validate_problem(-1, 0.2, 1, 0, 1))
    assert sp.region is Region.REGION2
    assert sp.x_e == pytest.approx(0.4472136, abs=1e-7)
    assert sp.x_e * sp.p_e == pytest.approx(0.2, rel=1e-15)
    assert sp.u_required == pytest.approx(0.5278640, abs=1e-7)

    sp = stationary_point(validate_problem(-1, 0.1, 1, 0, 1))
    assert sp.region is Region.REGION3
    assert sp.x_e == pytest.approx(0.4142136, abs=1e-7)
    assert sp.p_e == pytest.approx(0.3889087, abs=1e-7)


@given(negative_a, st.floats(0.0, 1.0))
def test_case_b_dwell_control_is_admissible(a, s):
    low, high = case_thresholds(a)
    alpha = low + s * (high - low)
    pr = validate_problem(a, alpha, 0.1, 0, 1)
    sp = stationary_point(pr)
    if sp.region is Region.REGION2:
        assert 0.0 <= sp.u_required <= 1.0
        # without clipping the raw value is within roundoff of the interval
        assert -1e-9 <= pr.u_dwell <= 1 + 1e-9


@given(negative_a, st.floats(1e-3, 10.0))
def test_stationary_points_solve_their_equations(a, alpha):
    pr = validate_problem(a, alpha, 0.1, 0, 1)
    sp = stationary_point(pr)
    if sp.region is Region.REGION1:
        assert 2 * a * sp.x_e + 1 == pytest.approx(0, abs=1e-12)
    elif sp.region is Region.REGION2:
        assert sp.x_e * sp.p_e == pytest.approx(alpha, rel=1e-14)
    else:
        assert 2 * a * sp.x_e - sp.x_e ** 2 + 1 == pytest.approx(0, abs=1e-12)
        assert sp.x_e > 0


@pytest.mark.parametrize("u, gain", [(0.0, 0.0), (1.0, 1.0), (0.25, 0.5)])
def test_gain_examples(u, gain):
    assert gain_from_control(u) == gain


@given(st.floats(0.0, 1.0))
def test_gain_squares_back(u):
    assert gain_from_control(u) ** 2 == pytest.approx(u, rel=1e-15, abs=1e-300)


@pytest.mark.parametrize("u", [-0.1, 1.5, math.nan])
def test_gain_rejects_out_of_range(u):
    with pytest.raises(DomainError):
        gain_from_control(u)
