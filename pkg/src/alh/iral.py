"""Hybrid informative/representative query selection.

The joint objective is minimized by alternating two steps:

* theta-step: for the current candidate ``s`` the classifier coefficients are
  fitted by ADMM, splitting the non-smooth candidate penalty through an
  auxiliary variable ``a = f(x_s)`` (one entry per class);
* alpha-step: with theta fixed, the indicator minimizes a QP under the
  one-hot constraint.

Two alpha-step solvers are available. ``"vertex"`` (default) solves the
one-hot problem exactly: on a vertex ``e_s`` the quadratic term is just
``0.5 * Q_ss``. ``"simplex"`` relaxes the indicator to the probability
simplex, solves the convex QP and rounds to the largest entry; with an RBF
Gram matrix the relaxed optimum tends to spread over mutually distant
candidates, and the rounded index then often misses the best vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from alh.errors import SolverError, ValidationError
from alh.informative import HyperParams, candidate_penalties, labeled_risk, regularizer
from alh.learner import JITTER, fit
from alh.representative import (Alpha, QpProblem, build_mmd_qp, round_alpha, solve_simplex_qp,
                                solve_vertex)


def soft_threshold(v, omega):
    """sign(v) * max(|v| - omega, 0), elementwise."""
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - omega, 0.0)


def theta_objective(theta, K_LL, Y_L, k_s, lam) -> float:
    """Single-candidate objective minimized by the theta-step.

    ``||Y - K theta||^2 + ||f(x_s)||^2 + 2||f(x_s)||_1 + lam * tr(theta' K theta)``
    with ``f(x_s) = theta' k_s``.
    """
    fs = np.asarray(theta).T @ np.asarray(k_s)
    return (labeled_risk(theta, K_LL, Y_L) + float(fs @ fs) + 2.0 * float(np.abs(fs).sum())
            + lam * regularizer(theta, K_LL))


@dataclass
class AdmmState:
    theta: np.ndarray
    a: np.ndarray
    xi: np.ndarray
    rho: float
    iteration: int = 0


def _factor(K_LL, k_s, rho, lam):
    def system(K):
        return K @ K + (0.5 * rho) * np.outer(k_s, k_s) + lam * K

    try:
        return linalg.cho_factor(system(K_LL), lower=True)
    except linalg.LinAlgError:
        pass
    try:
        return linalg.cho_factor(system(K_LL + JITTER * np.eye(len(K_LL))), lower=True)
    except linalg.LinAlgError as exc:
        raise SolverError(f"ADMM theta system is singular: {exc}") from None


def admm_theta(K_LL, Y_L, k_s, lam, rho=1.0, tol=1e-8, max_iter=1000, theta0=None,
               history=None):
    """ADMM on the theta-step for one candidate with kernel column ``k_s``.

    Returns ``(theta, converged, state)``. Initialization: ``theta0``
    (zeros if omitted), ``a = f(x_s)`` at ``theta0``, ``xi = 0``. If
    ``history`` is a list, the objective at every ``(theta^k, a^k)`` is
    appended to it.
    """
    K_LL = np.asarray(K_LL, dtype=float)
    Y_L = np.asarray(Y_L, dtype=float)
    k_s = np.asarray(k_s, dtype=float)
    l, c = Y_L.shape
    theta = np.zeros((l, c)) if theta0 is None else np.array(theta0, dtype=float)
    st = AdmmState(theta, theta.T @ k_s, np.zeros(c), float(rho))
    factor = _factor(K_LL, k_s, rho, lam)
    KY = K_LL @ Y_L
    omega = 2.0 / (rho + 2.0)
    converged = False
    for it in range(1, max_iter + 1):
        b = KY + np.outer(k_s, 0.5 * st.xi + 0.5 * rho * st.a)
        st.theta = linalg.cho_solve(factor, b)
        fs = st.theta.T @ k_s
        a_old = st.a
        st.a = soft_threshold((rho * fs - st.xi) / (rho + 2.0), omega)
        st.xi = st.xi + rho * (st.a - fs)
        st.iteration = it
        if history is not None:
            a = st.a
            history.append(labeled_risk(st.theta, K_LL, Y_L) + float(a @ a)
                           + 2.0 * float(np.abs(a).sum()) + lam * regularizer(st.theta, K_LL))
        primal = np.linalg.norm(st.a - fs)
        dual = rho * np.linalg.norm(st.a - a_old)
        if primal < tol and dual < tol:
            converged = True
            break
    return st.theta, converged, st


def admm_solve_theta(state, candidate, Y_L, gram, hp: HyperParams, tol=1e-8, max_iter=1000,
                     theta0=None):
    """theta-step at pool index ``candidate`` (which must be unlabeled).

    Warm-starts from the labeled-only regularized least-squares fit unless
    ``theta0`` is given.
    """
    L = state.labeled
    if len(L) < 1:
        raise ValidationError("theta-step needs at least one labeled point")
    if candidate not in set(state.unlabeled.tolist()):
        raise ValidationError(f"candidate {candidate} is not unlabeled")
    Y_L = state.label_matrix() if Y_L is None else np.asarray(Y_L, dtype=float)
    K_LL = gram.block(L, L)
    k_s = gram.block(L, [candidate])[:, 0]
    if theta0 is None:
        theta0 = fit(K_LL, Y_L, hp.lam).theta
    theta, converged, _ = admm_theta(K_LL, Y_L, k_s, hp.lam, hp.rho, tol, max_iter, theta0)
    return theta, converged


def alpha_problem(state, theta, gram, hp: HyperParams) -> QpProblem:
    """QP for the alpha-step: beta * MMD program + candidate penalties."""
    mmd = build_mmd_qp(state, gram)
    K3 = candidate_penalties(theta, gram.block(state.labeled, state.unlabeled))
    return QpProblem(hp.beta * mmd.Q, hp.beta * mmd.q + K3)


RELAXATIONS = ("vertex", "simplex")


def _solve(p: QpProblem, relaxation, tol=1e-8, max_iter=5000) -> Alpha:
    if relaxation == "vertex":
        return solve_vertex(p)
    if relaxation == "simplex":
        return solve_simplex_qp(p, tol, max_iter)
    raise ValidationError(f"unknown relaxation {relaxation!r}; expected one of {RELAXATIONS}")


def solve_alpha(state, theta, gram, hp: HyperParams, relaxation="vertex", tol=1e-8,
                max_iter=5000) -> Alpha:
    if state.u == 1:
        return Alpha(np.ones(1))
    return _solve(alpha_problem(state, theta, gram, hp), relaxation, tol, max_iter)


@dataclass(frozen=True)
class SelectionResult:
    pool_index: int
    position: int
    alpha: Alpha
    theta: np.ndarray
    alternations: int
    converged: bool


def cold_start_select(state, gram, hp: HyperParams | None = None,
                      relaxation="vertex") -> SelectionResult:
    """Representative-only selection (used when nothing is labeled yet)."""
    U = state.unlabeled
    empty = np.zeros((0, state.n_classes))
    if len(U) == 0:
        raise ValidationError("no unlabeled candidates")
    if len(U) == 1:
        return SelectionResult(int(U[0]), 0, Alpha(np.ones(1)), empty, 0, True)
    alpha = _solve(build_mmd_qp(state, gram), relaxation)
    pos = round_alpha(alpha)
    return SelectionResult(int(U[pos]), pos, alpha, empty, 0, alpha.converged)


def select_query_iral(state, Y_L, gram, hp: HyperParams, loop_cap: int = 10,
                      admm_tol=1e-8, admm_max_iter=1000, relaxation="vertex") -> SelectionResult:
    """Alternate alpha- and theta-steps until the rounded candidate repeats."""
    U = state.unlabeled
    if len(U) == 0:
        raise ValidationError("no unlabeled candidates")
    if state.l == 0:
        return cold_start_select(state, gram, hp, relaxation)
    Y_L = state.label_matrix() if Y_L is None else np.asarray(Y_L, dtype=float)
    K_LL = gram.block(state.labeled, state.labeled)
    theta = fit(K_LL, Y_L, hp.lam).theta
    prev = None
    alpha = None
    admm_ok = True
    for alternation in range(1, loop_cap + 1):
        alpha = solve_alpha(state, theta, gram, hp, relaxation)
        pos = round_alpha(alpha)
        if pos == prev:
            return SelectionResult(int(U[pos]), pos, alpha, theta, alternation,
                                   admm_ok and alpha.converged)
        prev = pos
        theta, admm_ok = admm_solve_theta(state, int(U[pos]), Y_L, gram, hp,
                                          admm_tol, admm_max_iter, theta0=theta)
    return SelectionResult(int(U[prev]), prev, alpha, theta, loop_cap, False)
