"""Matrix necessary conditions and a forward-backward sweep.

For ``dx = A x dt + B dw`` observed through ``dy = C x dt + dv`` with
``U = C^T C``, ``Tr U <= 1``, the error covariance and costate obey

    Xdot = A X + X A^T - X U X + B B^T,                X(t0) = X0
    Pdot = P X U + U X P - P A - A^T P - I - alpha U,  P(t1) = 0

and the control minimises ``Tr[(alpha X - X P X) U]`` pointwise.  The sweep
is a heuristic: it has no convergence guarantee for n > 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DomainError, ShapeError

log = logging.getLogger(__name__)


def _sym(M):
    return 0.5 * (M + np.swapaxes(M, -1, -2))


def _square(name, M, n=None):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"{name} must be a square matrix, got shape {M.shape}")
    if n is not None and M.shape[0] != n:
        raise ShapeError(f"{name} must be {n}x{n}, got {M.shape}")
    return M


def controllable(A: np.ndarray, B: np.ndarray) -> bool:
    n = A.shape[0]
    blocks = [B]
    for _ in range(n - 1):
        blocks.append(A @ blocks[-1])
    return int(np.linalg.matrix_rank(np.hstack(blocks))) == n


@dataclass(frozen=True)
class MatrixProblem:
    A: np.ndarray
    B: np.ndarray
    X0: np.ndarray
    alpha: float
    t0: float
    t1: float

    def __post_init__(self):
        A = _square("A", self.A)
        n = A.shape[0]
        B = np.asarray(self.B, dtype=float)
        if B.ndim != 2 or B.shape[0] != n:
            raise ShapeError(f"B must have {n} rows, got shape {B.shape}")
        X0 = _square("X0", self.X0, n)
        if not np.allclose(X0, X0.T, atol=1e-12, rtol=0):
            raise DomainError("X0 must be symmetric")
        X0 = _sym(X0)
        if np.linalg.eigvalsh(X0).min() < -1e-12:
            raise DomainError("X0 must be positive semidefinite")
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        if not self.t1 > self.t0:
            raise DomainError("t1 must be greater than t0")
        if not controllable(A, B):
            log.warning("(A, B) is not controllable")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "X0", X0)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @classmethod
    def from_scalar(cls, problem) -> "MatrixProblem":
        """1x1 embedding of a :class:`ScalarProblem`."""
        return cls(np.array([[problem.a]]), np.array([[1.0]]), np.array([[problem.x0]]),
                   problem.alpha, problem.t0, problem.t1)

    def to_dict(self) -> dict:
        return {"A": self.A.tolist(), "B": self.B.tolist(), "X0": self.X0.tolist(),
                "alpha": self.alpha, "t0": self.t0, "t1": self.t1}

    @classmethod
    def from_dict(cls, data: dict) -> "MatrixProblem":
        return cls(np.array(data["A"], dtype=float), np.array(data["B"], dtype=float),
                   np.array(data["X0"], dtype=float), float(data["alpha"]),
                   float(data["t0"]), float(data["t1"]))


def pointwise_minimizer(M) -> tuple[np.ndarray, float]:
    """Minimise ``Tr(M U)`` over ``U >= 0``, ``Tr U <= 1``.

    Returns ``(U, value)``.  The minimum is ``min(0, lambda_min(M))``,
    attained by ``U = 0`` or by ``v v^T`` for a unit eigenvector of the
    smallest eigenvalue.  The eigenvector sign is fixed so its first
    nonzero entry is positive.
    """
    M = _sym(_square("M", M))
    w, V = np.linalg.eigh(M)
    lam = float(w[0])
    n = M.shape[0]
    if lam >= 0:
        return np.zeros((n, n)), 0.0
    v = V[:, 0]
    nz = np.flatnonzero(np.abs(v) > 1e-14)
    if nz.size and v[nz[0]] < 0:
        v = -v
    return np.outer(v, v), lam


def pointwise_minimizer_batch(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """:func:`pointwise_minimizer` over a stack of matrices ``(m, n, n)``."""
    M = _sym(np.asarray(M, dtype=float))
    w, V = np.linalg.eigh(M)
    lam = w[:, 0]
    v = V[:, :, 0]
    big = np.abs(v) > 1e-14
    first = np.take_along_axis(v, np.argmax(big, axis=1)[:, None], axis=1)[:, 0]
    v = np.where((first < 0)[:, None], -v, v)
    neg = lam < 0
    U = np.einsum("ki,kj->kij", v, v) * neg[:, None, None]
    return U, np.where(neg, lam, 0.0)


def canonical_rhs(X, P, U, A, alpha, BBt=None):
    """``(Xdot, Pdot)`` of the matrix canonical system, symmetrised.

    ``BBt`` defaults to the identity.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError("A must be square")
    n = A.shape[0]
    X, P, U = (np.asarray(M, dtype=float) for M in (X, P, U))
    for name, M in (("X", X), ("P", P), ("U", U)):
        if M.shape != (n, n):
            raise ShapeError(f"{name} must be {n}x{n}, got {M.shape}")
    Q = np.eye(n) if BBt is None else np.asarray(BBt, dtype=float)
    if Q.shape != (n, n):
        raise ShapeError(f"BB^T must be {n}x{n}")
    I = np.eye(n)
    Xdot = A @ X + X @ A.T - X @ U @ X + Q
    Pdot = P @ X @ U + U @ X @ P - P @ A - A.T @ P - I - alpha * U
    return _sym(Xdot), _sym(Pdot)


@dataclass(frozen=True)
class MatrixSweepResult:
    t_grid: np.ndarray
    X_path: np.ndarray
    P_path: np.ndarray
    U_path: np.ndarray
    cost: float
    pmp_residual: float
    converged: bool
    iterations: int = 0


def _forward_X(pr: MatrixProblem, t, U):
    """RK4 for X with U held constant on each step; also the cost."""
    Q = pr.B @ pr.B.T
    A = pr.A
    n_nodes = len(t)
    X = np.empty((n_nodes, pr.n, pr.n))
    X[0] = Xk = pr.X0
    cost = 0.0

    def f(M, Uk):
        AM = A @ M
        return AM + AM.T - M @ Uk @ M + Q
    for k in range(n_nodes - 1):
        h = t[k + 1] - t[k]
        Uk = U[k]
        X1 = Xk
        K1 = f(X1, Uk)
        X2 = Xk + 0.5 * h * K1
        K2 = f(X2, Uk)
        X3 = Xk + 0.5 * h * K2
        K3 = f(X3, Uk)
        X4 = Xk + h * K3
        K4 = f(X4, Uk)
        # running cost Tr(X) + alpha Tr(U X), integrated with the RK4 weights
        S = X1 + 2.0 * X2 + 2.0 * X3 + X4
        cost += h / 6.0 * (np.trace(S) + pr.alpha * float(np.sum(Uk * S)))
        Xk = _sym(Xk + h / 6.0 * (K1 + 2 * K2 + 2 * K3 + K4))
        X[k + 1] = Xk
    # the exact flow keeps X >= 0; clip the round-off of the integrator
    w, V = np.linalg.eigh(X)
    if w.min() < 0:
        if w.min() < -1e-9:
            log.warning("X lost positive semidefiniteness (%.3g)", w.min())
        X = np.einsum("kij,kj,klj->kil", V, np.clip(w, 0.0, None), V)
    return X, float(cost)


def _backward_P(pr: MatrixProblem, t, X, U):
    """RK4 for P backwards from zero, X between nodes by cubic Hermite."""
    A, alpha, Q = pr.A, pr.alpha, pr.B @ pr.B.T
    n = pr.n
    I = np.eye(n)
    P = np.empty_like(X)
    P[-1] = Pk = np.zeros((n, n))
    base = I + alpha * U

    # all factors are symmetric, so U X P = (P X U)^T and A^T P = (P A)^T
    def g(M, Xs, k):
        PXU = M @ Xs @ U[k]
        PA = M @ A
        return PXU + PXU.T - PA - PA.T - base[k]
    for k in range(len(t) - 2, -1, -1):
        h = t[k + 1] - t[k]
        Uk = U[k]
        Xl, Xr = X[k], X[k + 1]
        AXl, AXr = A @ Xl, A @ Xr
        Fl = AXl + AXl.T - Xl @ Uk @ Xl + Q
        Fr = AXr + AXr.T - Xr @ Uk @ Xr + Q
        Xm = 0.5 * (Xl + Xr) + 0.125 * h * (Fl - Fr)
        K1 = g(Pk, Xr, k)
        K2 = g(Pk - 0.5 * h * K1, Xm, k)
        K3 = g(Pk - 0.5 * h * K2, Xm, k)
        K4 = g(Pk - h * K3, Xl, k)
        Pk = _sym(Pk - h / 6.0 * (K1 + 2 * K2 + 2 * K3 + K4))
        P[k] = Pk
    return P


def _switching_matrix(pr: MatrixProblem, X, P):
    """``alpha X - X P X`` along the grid."""
    return _sym(pr.alpha * X - X @ P @ X)


def forward_backward_sweep(problem: MatrixProblem, max_iters: int = 200,
                           relaxation: float = DEFAULT.sweep_relaxation,
                           n_nodes: int = DEFAULT.sweep_nodes,
                           tol: float = DEFAULT.sweep_change) -> MatrixSweepResult:
    """Relaxed fixed-point iteration on the canonical system.

    ``U`` is stored per grid step (held constant on the step) and updated
    from the pointwise minimiser at the step's left node.  Stops when the
    max-norm change of ``U`` is at most ``tol``.
    """
    if not 0 < relaxation <= 1:
        raise DomainError("relaxation must lie in (0, 1]")
    if n_nodes < 3:
        raise DomainError("need at least three grid nodes")
    pr = problem
    n = pr.n
    t = np.linspace(pr.t0, pr.t1, n_nodes)
    U = np.zeros((n_nodes - 1, n, n))
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        X, _ = _forward_X(pr, t, U)
        P = _backward_P(pr, t, X, U)
        U_new = pointwise_minimizer_batch(_switching_matrix(pr, X[:-1], P[:-1]))[0]
        U_next = (1.0 - relaxation) * U + relaxation * U_new
        change = float(np.max(np.abs(U_next - U)))
        U = U_next
        if change <= tol:
            converged = True
            break
    X, cost = _forward_X(pr, t, U)
    P = _backward_P(pr, t, X, U)
    M = _switching_matrix(pr, X[:-1], P[:-1])
    attained = np.einsum("kij,kji->k", M, U)
    residual = float(np.max(attained - pointwise_minimizer_batch(M)[1]))
    # repeat the last step's control at the final node so all paths share t_grid
    U_nodes = np.concatenate([U, U[-1:]], axis=0)
    return MatrixSweepResult(t, X, P, U_nodes, cost, residual, converged, it)


def sweep_rows(result: MatrixSweepResult) -> tuple[list[str], np.ndarray]:
    """Header and rows for the per-node CSV (row-major X, P, U)."""
    n = result.X_path.shape[1]
    names = ["t"]
    for sym in ("X", "P", "U"):
        names += [f"{sym}{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    m = len(result.t_grid)
    rows = np.hstack([result.t_grid[:, None], result.X_path.reshape(m, -1),
                      result.P_path.reshape(m, -1), result.U_path.reshape(m, -1)])
    return names, rows
