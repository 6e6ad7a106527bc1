"""Worst-case pseudo-labels and the margin-risk penalty of a candidate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from alh.errors import ValidationError
from alh.kernel import class_scores
from alh.representative import build_mmd_qp


@dataclass(frozen=True)
class HyperParams:
    lam: float = 0.1
    beta: float = 100.0
    rho: float = 1.0

    def __post_init__(self):
        for name in ("lam", "beta", "rho"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")


def worst_case_pseudo_label(scores) -> np.ndarray:
    """-sign(f), with sign(0) taken as +1.

    This is the +/-1 vector farthest (in squared error) from the scores.
    """
    scores = np.asarray(scores, dtype=float)
    return np.where(scores >= 0, -1.0, 1.0)


def penalty_from_scores(F) -> np.ndarray:
    """||f||^2 + 2 ||f||_1 per column of a (c x m) score matrix."""
    F = np.asarray(F, dtype=float)
    return np.sum(F * F, axis=0) + 2.0 * np.sum(np.abs(F), axis=0)


def informative_penalty(theta, k_s) -> float:
    """Worst-case squared-loss risk of one candidate, minus the constant c."""
    k_s = np.asarray(k_s, dtype=float).reshape(-1, 1)
    return float(penalty_from_scores(class_scores(theta, k_s))[0])


def candidate_penalties(theta, K_LU) -> np.ndarray:
    """informative_penalty for every unlabeled column of ``K_LU`` at once."""
    return penalty_from_scores(class_scores(theta, K_LU))


def labeled_risk(theta, K_LL, Y_L) -> float:
    residual = np.asarray(Y_L, dtype=float) - np.asarray(K_LL) @ theta
    return float(np.sum(residual * residual))


def regularizer(theta, K_LL) -> float:
    """sum_k theta_k' K theta_k."""
    return float(np.sum(theta * (np.asarray(K_LL) @ theta)))


def combined_objective(theta, alpha, state, gram, hp: HyperParams) -> float:
    """Joint selection objective at (theta, alpha).

    Labeled squared loss + alpha-weighted candidate penalties + lam * kernel
    regularizer + beta * representative QP value.
    """
    L, U = state.labeled, state.unlabeled
    theta = np.asarray(theta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    Y_L = state.label_matrix()
    if theta.shape != Y_L.shape or alpha.shape != (len(U),):
        raise ValidationError(f"shape mismatch: theta {theta.shape}, alpha {alpha.shape}")
    K_LL, K_LU, _ = gram.views(L, U)
    informative = alpha @ candidate_penalties(theta, K_LU)
    qp = build_mmd_qp(state, gram)
    return (labeled_risk(theta, K_LL, Y_L) + float(informative)
            + hp.lam * regularizer(theta, K_LL) + hp.beta * qp.objective(alpha))
