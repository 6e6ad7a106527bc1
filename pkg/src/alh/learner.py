"""One-vs-rest kernel regularized least squares with argmax decoding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from alh.errors import SolverError, ValidationError
from alh.kernel import class_scores

JITTER = 1e-10


@dataclass(frozen=True)
class FittedModel:
    theta: np.ndarray
    labeled_indices: np.ndarray
    lam: float

    def scores(self, K_Lx) -> np.ndarray:
        return class_scores(self.theta, K_Lx)


def solve_krls(K_LL, Y, lam: float) -> np.ndarray:
    """Solve (K + lam I) theta = Y with one Cholesky factor for all columns."""
    K_LL = np.asarray(K_LL, dtype=float)
    A = K_LL + lam * np.eye(K_LL.shape[0])
    try:
        return linalg.cho_solve(linalg.cho_factor(A, lower=True), Y)
    except linalg.LinAlgError:
        pass
    try:
        return linalg.cho_solve(linalg.cho_factor(A + JITTER * np.eye(len(A)), lower=True), Y)
    except linalg.LinAlgError as exc:
        raise SolverError(f"regularized kernel system is not positive definite: {exc}") from None


def fit(K_LL, Y_L, lam: float, labeled_indices=None) -> FittedModel:
    """Fit per-class coefficients for the squared-loss kernel classifier.

    Minimizing ``||Y - K theta||^2 + lam * tr(theta' K theta)`` gives
    ``(K^2 + lam K) theta = K Y``; for invertible ``K`` that is the
    ``(K + lam I) theta = Y`` system solved here.
    """
    K_LL, Y_L = np.asarray(K_LL, dtype=float), np.asarray(Y_L, dtype=float)
    if not lam > 0:
        raise ValidationError("lambda must be positive")
    l = K_LL.shape[0]
    if l < 1 or K_LL.shape != (l, l) or Y_L.ndim != 2 or Y_L.shape[0] != l:
        raise ValidationError(f"shape mismatch: K {K_LL.shape}, Y {Y_L.shape}")
    theta = solve_krls(K_LL, Y_L, lam)
    idx = np.arange(l) if labeled_indices is None else np.asarray(labeled_indices, dtype=int)
    return FittedModel(theta, idx, float(lam))


def predict(model: FittedModel, K_Lx) -> np.ndarray:
    """Class position with the largest score per column (first on ties)."""
    return np.argmax(model.scores(K_Lx), axis=0)


def accuracy(predicted, truth) -> float:
    predicted, truth = np.asarray(predicted), np.asarray(truth)
    if predicted.shape != truth.shape or predicted.size == 0:
        raise ValidationError("accuracy needs two equal-length, non-empty sequences")
    return float(np.mean(predicted == truth))
