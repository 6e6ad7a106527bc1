"""Pool-based multi-class active learning.

Queries are chosen by a hybrid criterion: a worst-case margin risk
(informativeness) plus the maximum mean discrepancy between the labeled set
and the remaining pool (representativeness).
"""

from alh.dataset import Dataset, SplitSpec, encode_labels, load_csv, load_sparse, make_blobs, split
from alh.informative import HyperParams, combined_objective, informative_penalty, worst_case_pseudo_label
from alh.iral import admm_solve_theta, cold_start_select, select_query_iral, solve_alpha
from alh.kernel import GramCache, class_scores, gram, rbf
from alh.learner import accuracy, fit, predict
from alh.representative import build_mmd_qp, mmd_direct, round_alpha, solve_simplex_qp
from alh.state import ActiveState
from alh.stats import paired_t_test

__version__ = "0.1.0"
