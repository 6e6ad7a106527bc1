"""RBF kernel, Gram blocks and per-class application of kernel operators."""

from __future__ import annotations

import numpy as np

from alh.errors import ValidationError


def default_gamma(d: int) -> float:
    return 1.0 / d


def _check_gamma(gamma):
    if not gamma > 0:
        raise ValidationError(f"gamma must be positive, got {gamma}")


def rbf(x, y, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2)."""
    _check_gamma(gamma)
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValidationError(f"dimension mismatch: {x.shape} vs {y.shape}")
    diff = x - y
    return float(np.exp(-gamma * np.dot(diff, diff)))


def gram(A, B, gamma: float) -> np.ndarray:
    """Kernel matrix with entry (i, j) = rbf(A[i], B[j])."""
    _check_gamma(gamma)
    A, B = np.atleast_2d(np.asarray(A, dtype=float)), np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ValidationError(f"feature dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    # Explicit differences rather than the |a|^2 + |b|^2 - 2ab expansion: exact
    # zeros on the diagonal and no cancellation for nearby points.
    sq = np.zeros((A.shape[0], B.shape[0]))
    for j in range(A.shape[1]):
        diff = A[:, j, None] - B[None, :, j]
        sq += diff * diff
    return np.exp(-gamma * sq)


class GramCache:
    """Pool Gram matrix computed once, sliced by the labeled/unlabeled partition.

    Index arguments are pool-relative positions (0..p-1).
    """

    def __init__(self, pool_features, gamma: float):
        self.gamma = float(gamma)
        K = gram(pool_features, pool_features, gamma)
        K = 0.5 * (K + K.T)
        K.setflags(write=False)
        self.K = K

    @classmethod
    def from_matrix(cls, K):
        obj = cls.__new__(cls)
        K = np.array(K, dtype=float)
        K.setflags(write=False)
        obj.K, obj.gamma = K, float("nan")
        return obj

    @property
    def size(self) -> int:
        return self.K.shape[0]

    def block(self, rows, cols) -> np.ndarray:
        return self.K[np.ix_(np.asarray(rows, dtype=int), np.asarray(cols, dtype=int))]

    def views(self, labeled, unlabeled):
        """Return (K_LL, K_LU, K_UU)."""
        return (self.block(labeled, labeled),
                self.block(labeled, unlabeled),
                self.block(unlabeled, unlabeled))


def class_scores(theta, K_Lx) -> np.ndarray:
    """Per-class decision values f_k(x_j) = theta_k . K_Lx[:, j], shape (c, m).

    With an identity label-incidence matrix the Kronecker operator is block
    diagonal, so the vec form reduces to one matrix product.
    """
    theta, K_Lx = np.asarray(theta, dtype=float), np.asarray(K_Lx, dtype=float)
    if theta.ndim != 2 or K_Lx.ndim != 2 or theta.shape[0] != K_Lx.shape[0]:
        raise ValidationError(f"shape mismatch: theta {theta.shape}, K_Lx {K_Lx.shape}")
    return theta.T @ K_Lx
