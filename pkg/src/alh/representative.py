"""Empirical MMD, its quadratic program over the selection indicator, and the
simplex-constrained QP solver used to pick a query."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from alh.errors import ValidationError


def _matrix(gram):
    return gram.K if hasattr(gram, "K") else np.asarray(gram, dtype=float)


def mmd_direct(S1, S2, gram) -> float:
    """Squared RKHS distance between the kernel mean embeddings of two index sets."""
    K = _matrix(gram)
    S1, S2 = np.asarray(S1, dtype=int), np.asarray(S2, dtype=int)
    if S1.size == 0 or S2.size == 0:
        raise ValidationError("MMD needs two non-empty sets")
    a = K[np.ix_(S1, S1)].mean()
    b = K[np.ix_(S2, S2)].mean()
    ab = K[np.ix_(S1, S2)].mean()
    return float(a + b - 2.0 * ab)


@dataclass(frozen=True)
class QpProblem:
    """minimize 0.5 a'Qa + q'a over the probability simplex."""

    Q: np.ndarray
    q: np.ndarray

    def objective(self, alpha) -> float:
        alpha = np.asarray(alpha, dtype=float)
        return float(0.5 * alpha @ self.Q @ alpha + self.q @ alpha)

    def vertex_objectives(self) -> np.ndarray:
        """Objective at every one-hot indicator."""
        return 0.5 * np.diag(self.Q) + self.q


def build_mmd_qp(state, gram) -> QpProblem:
    """QP in the indicator alpha whose one-hot values order candidates by
    MMD(labeled + {s}, unlabeled - {s}).

    For alpha = e_s the objective equals
    ``(l+1)^2 (u-1)^2 / (2 (l+u)^2) * MMD^2 + const``.
    """
    L, U = state.labeled, state.unlabeled
    l, u = len(L), len(U)
    if u < 2:
        raise ValidationError(f"need at least 2 unlabeled candidates, got {u}")
    K = _matrix(gram)
    K_UU = K[np.ix_(U, U)]
    q = -((l + 1) / (l + u)) * K_UU.sum(axis=0)
    if l:
        q = q + ((u - 1) / (l + u)) * K[np.ix_(L, U)].sum(axis=0)
    return QpProblem(K_UU, q)


def project_simplex(v) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum(x) = 1} (sort-based)."""
    v = np.asarray(v, dtype=float)
    srt = np.sort(v)[::-1]
    cssv = np.cumsum(srt) - 1.0
    ind = np.arange(1, v.size + 1)
    rho = np.count_nonzero(srt - cssv / ind > 0)
    tau = cssv[rho - 1] / rho
    return np.maximum(v - tau, 0.0)


@dataclass(frozen=True)
class Alpha:
    """Relaxed selection indicator plus solver diagnostics."""

    values: np.ndarray
    converged: bool = True
    kkt_residual: float = 0.0
    iterations: int = 0

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __len__(self):
        return len(self.values)


def kkt_residual(p: QpProblem, alpha) -> float:
    """Norm of the projected-gradient step ``alpha - P(alpha - grad)``."""
    alpha = np.asarray(alpha, dtype=float)
    grad = p.Q @ alpha + p.q
    return float(np.linalg.norm(alpha - project_simplex(alpha - grad)))


def _polish(p: QpProblem, x):
    # Solve the equality-constrained QP on the current support exactly.
    S = np.flatnonzero(x > 0)
    m = S.size
    A = np.zeros((m + 1, m + 1))
    A[:m, :m] = p.Q[np.ix_(S, S)]
    A[:m, m] = A[m, :m] = 1.0
    rhs = np.concatenate([-p.q[S], [1.0]])
    sol = np.linalg.lstsq(A, rhs, rcond=None)[0]
    if np.any(sol[:m] < -1e-12):
        return None
    out = np.zeros_like(x)
    out[S] = np.maximum(sol[:m], 0.0)
    total = out.sum()
    if not total > 0:
        return None
    return out / total


def solve_simplex_qp(p: QpProblem, tol: float = 1e-8, max_iter: int = 5000) -> Alpha:
    """Minimize ``0.5 a'Qa + q'a`` over the probability simplex.

    Accelerated projected gradient with backtracking and function-value
    restarts; every few iterations the iterate's support is polished by an
    exact equality-constrained solve. Stops when the projected-gradient
    residual drops to ``tol``; if ``max_iter`` is reached the best iterate is
    returned with ``converged=False``.
    """
    Q = np.asarray(p.Q, dtype=float)
    q = np.asarray(p.q, dtype=float)
    u = q.size
    if Q.shape != (u, u):
        raise ValidationError(f"Q has shape {Q.shape}, expected {(u, u)}")
    scale = max(1.0, float(np.abs(Q).max(initial=0.0)))
    if not np.allclose(Q, Q.T, rtol=0.0, atol=1e-10 * scale):
        raise ValidationError("Q is not symmetric")
    p = QpProblem(Q, q)
    if u == 1:
        return Alpha(np.ones(1), True, 0.0, 0)

    def f(a):
        return 0.5 * a @ Q @ a + q @ a

    x = np.full(u, 1.0 / u)
    fx = f(x)
    best, best_res = x, kkt_residual(p, x)
    if best_res <= tol:
        return Alpha(x, True, best_res, 0)
    # Gershgorin bound on the largest eigenvalue gives a safe first step
    lip = max(float(np.abs(Q).sum(axis=1).max()), 1e-12)
    step = 1.0 / lip
    y, t = x.copy(), 1.0
    it = 0
    for it in range(1, max_iter + 1):
        g = Q @ y + q
        fy = f(y)
        while True:
            x_new = project_simplex(y - step * g)
            d = x_new - y
            if f(x_new) <= fy + g @ d + (0.5 / step) * (d @ d) + 1e-15 * abs(fy):
                break
            step *= 0.5
        f_new = f(x_new)
        if f_new > fx:
            # restart momentum from the last accepted point
            y, t = x.copy(), 1.0
            continue
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = x_new + ((t - 1.0) / t_new) * (x_new - x)
        x, fx, t = x_new, f_new, t_new
        step *= 1.5

        res = kkt_residual(p, x)
        if it % 10 == 0 or res < 1e3 * tol:
            polished = _polish(p, x)
            if polished is not None:
                pres = kkt_residual(p, polished)
                if pres < res and f(polished) <= fx + 1e-12 * max(1.0, abs(fx)):
                    x, fx, res = polished, f(polished), pres
                    y, t = x.copy(), 1.0
        if res < best_res:
            best, best_res = x, res
        if res <= tol:
            return Alpha(x, True, res, it)
    return Alpha(best, False, best_res, it)


def solve_vertex(p: QpProblem, tie_tol: float = 1e-12) -> Alpha:
    """Exact minimizer of the QP over one-hot indicators.

    On {e_s} the quadratic term reduces to 0.5 * Q_ss, so the objective is
    linear in the vertex and a scan over the u candidates is exact. Values
    within ``tie_tol`` (relative) of the minimum tie; the smallest index wins.
    """
    values = p.vertex_objectives()
    best = values.min()
    pos = int(np.flatnonzero(values <= best + tie_tol * max(1.0, abs(best)))[0])
    alpha = np.zeros(values.size)
    alpha[pos] = 1.0
    return Alpha(alpha, True, 0.0, 0)


def round_alpha(alpha, tie_tol: float = 1e-9) -> int:
    """Position of the largest entry; near-ties go to the smallest index."""
    values = np.asarray(alpha, dtype=float)
    return int(np.flatnonzero(values >= values.max() - tie_tol)[0])
