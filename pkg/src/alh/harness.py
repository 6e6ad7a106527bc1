"""Active-learning experiment loop, query strategies and curve aggregation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from alh.dataset import Dataset, SplitSpec, load_csv, load_sparse, make_rng, split
from alh.errors import ConfigError
from alh.informative import HyperParams
from alh.iral import cold_start_select, select_query_iral
from alh.kernel import GramCache, default_gamma, gram
from alh.learner import accuracy, fit, predict
from alh.state import ActiveState

log = logging.getLogger(__name__)

STRATEGIES = ("iral", "random", "margin", "mmd")
BETA_GRID = (1.0, 2.0, 10.0, 100.0, 1000.0)


def margin_select(state, gram_cache, hp: HyperParams) -> int:
    """Unlabeled point whose top two class scores are closest."""
    L, U = state.labeled, state.unlabeled
    model = fit(gram_cache.block(L, L), state.label_matrix(), hp.lam)
    scores = model.scores(gram_cache.block(L, U))
    top2 = -np.sort(-scores, axis=0)[:2]
    gap = top2[0] - top2[1]
    return int(U[int(np.argmin(gap))])


def select_query(strategy: str, state, gram_cache, Y_L, hp: HyperParams, rng,
                 relaxation: str = "vertex") -> int:
    """Pool index of the next query under ``strategy``."""
    if strategy not in STRATEGIES:
        raise ConfigError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
    U = state.unlabeled
    if len(U) == 0:
        raise ConfigError("no unlabeled points left")
    if strategy == "random" or (strategy == "margin" and state.l == 0):
        return int(U[rng.integers(len(U))])
    if strategy == "margin":
        return margin_select(state, gram_cache, hp)
    if strategy == "mmd":
        return cold_start_select(state, gram_cache, hp, relaxation).pool_index
    return select_query_iral(state, Y_L, gram_cache, hp, relaxation=relaxation).pool_index


@dataclass
class RunConfig:
    data: str
    strategy: str = "iral"
    budget: int = 30
    runs: int = 10
    seed: int = 0
    fmt: str = "csv"
    hp: HyperParams = field(default_factory=HyperParams)
    gamma: float | None = None
    init_per_class: int = 0
    rescale: bool = False
    beta_sweep: bool = False
    pool_fraction: float = 0.6
    relaxation: str = "vertex"
    out: str | None = None

    def strategy_labels(self):
        """(label, hyperparameters) for every strategy variant this config runs."""
        if self.beta_sweep and self.strategy == "iral":
            return [(f"iral[beta={b:g}]", replace(self.hp, beta=b)) for b in BETA_GRID]
        return [(self.strategy, self.hp)]


@dataclass(frozen=True)
class CurvePoint:
    strategy: str
    run: int
    query_index: int
    n_labeled: int
    selected_pool_index: int
    accuracy: float


def load_dataset(path, fmt: str) -> Dataset:
    if fmt == "csv":
        return load_csv(path)
    if fmt == "sparse":
        return load_sparse(path)
    raise ConfigError(f"unknown data format {fmt!r}")


def validate(config: RunConfig, dataset: Dataset):
    if config.strategy not in STRATEGIES:
        raise ConfigError(f"unknown strategy {config.strategy!r}; choose from {', '.join(STRATEGIES)}")
    if config.runs < 1:
        raise ConfigError("runs must be >= 1")
    if config.budget < 0:
        raise ConfigError("budget must be >= 0")
    if config.gamma is not None and not config.gamma > 0:
        raise ConfigError("gamma must be positive")
    n_pool = int(np.floor(config.pool_fraction * dataset.n))
    room = n_pool - config.init_per_class * dataset.c
    if config.budget > room:
        raise ConfigError(f"budget {config.budget} exceeds the {room} unlabeled pool points available")


def run_single(dataset: Dataset, label: str, strategy: str, hp: HyperParams, run: int,
               config: RunConfig) -> list[CurvePoint]:
    """One seeded split followed by ``budget`` queries."""
    seed_r = config.seed + run
    pool, test, initial = split(dataset, SplitSpec(config.pool_fraction, seed_r, config.init_per_class))
    positions = dataset.class_positions()
    X = dataset.features
    gamma = config.gamma if config.gamma is not None else default_gamma(dataset.d)
    G = GramCache(X[pool], gamma)
    K_pool_test = gram(X[pool], X[test], gamma)
    truth = positions[test]

    where = {int(g): i for i, g in enumerate(pool)}
    state = ActiveState(len(pool), lambda i: positions[pool[i]], dataset.c,
                        labeled=[where[int(g)] for g in initial])
    rng = make_rng(seed_r, 1)

    def score():
        if state.l == 0:
            # no model yet: expected accuracy of a uniform guess
            return 1.0 / dataset.c
        L = state.labeled
        model = fit(G.block(L, L), state.label_matrix(), hp.lam)
        return accuracy(predict(model, K_pool_test[L]), truth)

    points = [CurvePoint(label, run, 0, state.l, -1, score())]
    for t in range(1, config.budget + 1):
        idx = select_query(strategy, state, G, None, hp, rng, config.relaxation)
        state.query(idx)
        points.append(CurvePoint(label, run, t, state.l, idx, score()))
    return points


def run_experiment(config: RunConfig) -> list[CurvePoint]:
    """All runs of every strategy variant in ``config``."""
    dataset = load_dataset(config.data, config.fmt)
    if config.rescale:
        dataset = dataset.rescaled()
    validate(config, dataset)
    curves = []
    for label, hp in config.strategy_labels():
        for run in range(config.runs):
            log.info("%s run %d/%d", label, run + 1, config.runs)
            curves.extend(run_single(dataset, label, config.strategy, hp, run, config))
    return curves


def summarize(curves):
    """Mean and sample standard deviation of accuracy per (strategy, query_index)."""
    groups: dict[tuple, list[float]] = {}
    for p in curves:
        groups.setdefault((p.strategy, p.query_index), []).append(p.accuracy)
    rows = []
    for (strategy, q), accs in sorted(groups.items()):
        arr = np.array(accs)
        std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        rows.append((strategy, q, float(arr.mean()), std))
    return rows


def final_accuracies(curves, strategy: str) -> np.ndarray:
    """Accuracy at the last query of each run, ordered by run."""
    last = {}
    for p in curves:
        if p.strategy == strategy and p.query_index >= last.get(p.run, (-1, 0))[0]:
            last[p.run] = (p.query_index, p.accuracy)
    return np.array([last[r][1] for r in sorted(last)])
