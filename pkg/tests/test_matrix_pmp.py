import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infogain.errors import DomainError, ShapeError
from infogain.matrix_pmp import (
    MatrixProblem, canonical_rhs, controllable, forward_backward_sweep, pointwise_minimizer,
    pointwise_minimizer_batch, sweep_rows,
)
from infogain.numerics import evaluate_cost
from infogain.problem import validate_problem
from infogain.scheduler import solve


def _random_feasible(rng, n, k):
    """``k`` random U >= 0 with Tr U <= 1 (scaled Wishart draws)."""
    G = rng.standard_normal((k, n, n))
    W = G @ np.swapaxes(G, 1, 2)
    tr = np.trace(W, axis1=1, axis2=2)
    return W / tr[:, None, None] * rng.uniform(0, 1, k)[:, None, None]


def test_minimizer_examples():
    U, val = pointwise_minimizer(np.eye(2))
    assert np.array_equal(U, np.zeros((2, 2))) and val == 0.0
    U, val = pointwise_minimizer(np.diag([1.0, -2.0]))
    assert np.allclose(U, np.diag([0.0, 1.0])) and val == -2.0


def test_minimizer_sign_convention():
    M = np.array([[0.0, 1.0], [1.0, 0.0]])
    U, val = pointwise_minimizer(M)
    assert val == pytest.approx(-1.0)
    assert np.allclose(U, 0.5 * np.array([[1, -1], [-1, 1]]))


@settings(max_examples=30)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_minimizer_beats_random_feasible_points(n, seed):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n))
    M = G + G.T
    U, val = pointwise_minimizer(M)
    assert np.trace(U) <= 1 + 1e-12
    assert np.linalg.eigvalsh(U).min() >= -1e-12
    assert np.trace(M @ U) == pytest.approx(val, abs=1e-12)
    feasible = _random_feasible(rng, n, 500)
    assert np.all(np.einsum("ij,kji->k", M, feasible) >= val - 1e-12)


def test_batch_agrees_with_single():
    rng = np.random.default_rng(0)
    G = rng.standard_normal((50, 3, 3))
    M = G + np.swapaxes(G, 1, 2)
    U, vals = pointwise_minimizer_batch(M)
    for k in range(50):
        Uk, vk = pointwise_minimizer(M[k])
        assert np.allclose(U[k], Uk, atol=1e-12) and vals[k] == pytest.approx(vk)


def test_canonical_rhs_reduces_to_scalar():
    a, alpha, x, p, u = -1.0, 0.2, 0.4, 0.7, 0.6
    Xd, Pd = canonical_rhs([[x]], [[p]], [[u]], [[a]], alpha)
    assert Xd[0, 0] == pytest.approx(2 * a * x - u * x * x + 1)
    assert Pd[0, 0] == pytest.approx(2 * u * x * p - 2 * a * p - 1 - alpha * u)


def test_canonical_rhs_without_observation_is_lyapunov():
    A = np.array([[-1.0, 0.3], [0.0, -2.0]])
    X = np.array([[1.0, 0.2], [0.2, 0.5]])
    Xd, _ = canonical_rhs(X, np.zeros((2, 2)), np.zeros((2, 2)), A, 1.0)
    assert np.allclose(Xd, A @ X + X @ A.T + np.eye(2))
    assert np.array_equal(Xd, Xd.T)


def test_canonical_rhs_shape_errors():
    with pytest.raises(ShapeError):
        canonical_rhs(np.eye(2), np.eye(3), np.eye(2), np.eye(2), 1.0)
    with pytest.raises(ShapeError):
        canonical_rhs(np.eye(2), np.eye(2), np.eye(2), np.ones((2, 3)), 1.0)


def test_problem_validation(caplog):
    with pytest.raises(ShapeError):
        MatrixProblem(np.ones((2, 3)), np.eye(2), np.eye(2), 1.0, 0, 1)
    with pytest.raises(ShapeError):
        MatrixProblem(-np.eye(2), np.eye(3), np.eye(2), 1.0, 0, 1)
    with pytest.raises(DomainError):
        MatrixProblem(-np.eye(2), np.eye(2), [[1, 0.5], [0, 1]], 1.0, 0, 1)
    with pytest.raises(DomainError):
        MatrixProblem(-np.eye(2), np.eye(2), -np.eye(2), 1.0, 0, 1)
    with pytest.raises(DomainError):
        MatrixProblem(-np.eye(2), np.eye(2), np.eye(2), 0.0, 0, 1)
    with pytest.raises(DomainError):
        MatrixProblem(-np.eye(2), np.eye(2), np.eye(2), 1.0, 1, 1)
    assert not controllable(-np.eye(2), np.array([[1.0], [0.0]]))
    with caplog.at_level("WARNING"):
        MatrixProblem(-np.eye(2), [[1.0], [0.0]], np.eye(2), 1.0, 0, 1)
    assert "controllable" in caplog.text


def test_dict_round_trip():
    mp = MatrixProblem(np.diag([-1.0, -2.0]), np.eye(2), 0.5 * np.eye(2), 3.0, 0.0, 1.0)
    back = MatrixProblem.from_dict(mp.to_dict())
    assert np.array_equal(back.A, mp.A) and back.alpha == mp.alpha


def test_large_alpha_never_observes():
    mp = MatrixProblem(np.diag([-1.0, -2.0]), np.eye(2), 0.5 * np.eye(2), 50.0, 0.0, 1.0)
    res = forward_backward_sweep(mp, n_nodes=256)
    assert res.converged and res.iterations == 1
    assert np.all(res.U_path == 0)
    assert res.pmp_residual <= 1e-8
    # decoupled Lyapunov diagonal, X_ii = 1/(2 k) + (1/2 - 1/(2 k)) e^{-2 k t}
    t = res.t_grid[-1]
    for i, k in enumerate((1.0, 2.0)):
        expected = 1 / (2 * k) + (0.5 - 1 / (2 * k)) * np.exp(-2 * k * t)
        assert res.X_path[-1, i, i] == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("args", [(-1, 0.3, 0.1, 0, 1), (-1, 0.1, 0.3, 0, 2)])
def test_scalar_sweep_reproduces_scheduler(args):
    pr = validate_problem(*args)
    sched = solve(pr).schedule
    n_nodes = 512
    res = forward_backward_sweep(MatrixProblem.from_scalar(pr), max_iters=300, n_nodes=n_nodes)
    assert res.converged
    ref = evaluate_cost(pr, sched, pr.horizon / 10_000).total
    assert abs(res.cost - ref) <= 1e-4
    u = res.U_path[:, 0, 0]
    h = pr.horizon / (n_nodes - 1)
    mid = res.t_grid + 0.5 * h
    far = np.ones(n_nodes, dtype=bool)
    for ts in sched.switch_times:
        far &= np.abs(mid - ts) > 1.5 * h
    assert np.allclose(u[:-1][far[:-1]], np.asarray(sched.u_at(mid[:-1][far[:-1]])), atol=1e-6)


def test_sweep_arguments():
    mp = MatrixProblem(-np.eye(1), np.eye(1), np.eye(1), 1.0, 0, 1)
    with pytest.raises(DomainError):
        forward_backward_sweep(mp, relaxation=0.0)
    with pytest.raises(DomainError):
        forward_backward_sweep(mp, n_nodes=2)


def test_sweep_rows_layout():
    mp = MatrixProblem(np.diag([-1.0, -2.0]), np.eye(2), 0.5 * np.eye(2), 50.0, 0.0, 1.0)
    res = forward_backward_sweep(mp, n_nodes=16)
    names, rows = sweep_rows(res)
    assert names[:2] == ["t", "X11"] and names[-1] == "U22"
    assert len(names) == 13 and rows.shape == (16, 13)
    assert np.array_equal(rows[:, 0], res.t_grid)
