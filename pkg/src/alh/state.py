"""Labeled/unlabeled partition of the pool with a simulated labeling oracle."""

from __future__ import annotations

import numpy as np

from alh.errors import ValidationError


class ActiveState:
    """Index partition of a pool of ``p`` points.

    ``labeled`` and ``unlabeled`` are pool-relative positions. Labels come
    from ``oracle(pool_index) -> class position`` and are only requested when
    an index is moved into the labeled set by :meth:`query`.
    """

    def __init__(self, pool_size: int, oracle, n_classes: int, labeled=()):
        self.pool_size = int(pool_size)
        self.n_classes = int(n_classes)
        self._oracle = oracle
        self._labeled: list[int] = []
        self._revealed: list[int] = []
        self._unlabeled = list(range(self.pool_size))
        for idx in labeled:
            self.query(int(idx))

    @classmethod
    def from_partition(cls, labeled, unlabeled, revealed, n_classes):
        """Build a state directly from known pieces (labels for ``labeled`` only)."""
        labeled, unlabeled = [int(i) for i in labeled], [int(i) for i in unlabeled]
        if set(labeled) & set(unlabeled):
            raise ValidationError("labeled and unlabeled overlap")
        if len(revealed) != len(labeled):
            raise ValidationError("one revealed label per labeled index required")
        obj = cls.__new__(cls)
        obj.pool_size = len(labeled) + len(unlabeled)
        obj.n_classes = int(n_classes)
        obj._oracle = None
        obj._labeled = labeled
        obj._revealed = [int(y) for y in revealed]
        obj._unlabeled = unlabeled
        return obj

    @property
    def labeled(self) -> np.ndarray:
        return np.array(self._labeled, dtype=int)

    @property
    def unlabeled(self) -> np.ndarray:
        return np.array(self._unlabeled, dtype=int)

    @property
    def revealed_labels(self) -> np.ndarray:
        return np.array(self._revealed, dtype=int)

    @property
    def l(self) -> int:
        return len(self._labeled)

    @property
    def u(self) -> int:
        return len(self._unlabeled)

    def label_matrix(self) -> np.ndarray:
        """+/-1 label matrix of the labeled points (l x c)."""
        Y = -np.ones((self.l, self.n_classes))
        Y[np.arange(self.l), self._revealed] = 1.0
        return Y

    def query(self, pool_index: int) -> int:
        """Move ``pool_index`` to the labeled set and reveal its label."""
        try:
            pos = self._unlabeled.index(pool_index)
        except ValueError:
            raise ValidationError(f"pool index {pool_index} is not unlabeled") from None
        if self._oracle is None:
            raise ValidationError("state has no labeling oracle")
        label = int(self._oracle(pool_index))
        del self._unlabeled[pos]
        self._labeled.append(pool_index)
        self._revealed.append(label)
        return label

    def copy(self) -> "ActiveState":
        obj = ActiveState.__new__(ActiveState)
        obj.__dict__.update(self.__dict__)
        obj._labeled, obj._revealed = list(self._labeled), list(self._revealed)
        obj._unlabeled = list(self._unlabeled)
        return obj
