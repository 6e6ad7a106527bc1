import numpy as np

from alh.kernel import GramCache
from alh.state import ActiveState


def random_instance(rng, l, u, c, d=None, gamma=None):
    """Random pool with the first ``l`` points labeled (uniform random classes)."""
    d = d or int(rng.integers(1, 4))
    X = rng.normal(size=(l + u, d))
    G = GramCache(X, gamma or 1.0 / d)
    labels = rng.integers(0, c, size=l)
    state = ActiveState.from_partition(range(l), range(l, l + u), labels, c)
    return X, G, state
