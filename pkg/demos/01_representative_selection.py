"""
Picking the most representative point
=====================================

With no labels yet, the only signal is how well a query would make the
labeled set look like the rest of the pool. This walks through the
discrepancy score for every candidate and the quadratic program that ranks
them the same way.
"""

import numpy as np

from alh.kernel import GramCache, default_gamma
from alh.representative import build_mmd_qp, mmd_direct, solve_vertex
from alh.state import ActiveState

rng = np.random.default_rng(0)
X = np.vstack([rng.normal(-2, 0.5, size=(8, 2)), rng.normal(2, 0.5, size=(4, 2))])
G = GramCache(X, default_gamma(2))

state = ActiveState.from_partition([], range(12), [], 2)

# score each candidate directly: labeled-plus-candidate vs what is left
direct = np.array([mmd_direct([s], np.setdiff1d(state.unlabeled, [s]), G) for s in state.unlabeled])
print("direct discrepancy per candidate:")
print(np.round(direct, 4))

# the QP evaluated at one-hot vectors is an affine image of the same scores
qp = build_mmd_qp(state, G)
print("QP value at each vertex:")
print(np.round(qp.vertex_objectives(), 4))

chosen = int(np.argmax(solve_vertex(qp).values))
print(f"chosen candidate {chosen}, direct argmin {int(np.argmin(direct))}")
print("it sits in the larger cluster:", chosen < 8)
