"""
Learning curves on three Gaussian blobs
=======================================

Run every strategy on the same synthetic data, then compare them
query-by-query with a paired t-test across runs. The printed table is
the mean test accuracy after 0, 5, 10, ... queries.
"""

import tempfile
from pathlib import Path

import numpy as np

from alh.dataset import make_blobs, write_csv
from alh.harness import STRATEGIES, RunConfig, run_experiment
from alh.outputs import compare

tmp = Path(tempfile.mkdtemp())
write_csv(make_blobs(n=300, c=3, d=2, separation=4.0, seed=0), tmp / "blobs.csv")

curves = []
for strategy in STRATEGIES:
    curves += run_experiment(RunConfig(str(tmp / "blobs.csv"), strategy, budget=30, runs=10, seed=0))

checkpoints = list(range(0, 31, 5))
print("strategy " + "".join(f"{t:>8d}" for t in checkpoints))
for strategy in STRATEGIES:
    means = [np.mean([p.accuracy for p in curves if p.strategy == strategy and p.query_index == t])
             for t in checkpoints]
    print(f"{strategy:<8} " + "".join(f"{m:8.3f}" for m in means))

# win/tie/loss of iral against each baseline, counted over query indices
for other in STRATEGIES[1:]:
    outcomes = [r[5] for r in compare(curves, "iral", other)]
    print(f"iral vs {other:<7} win {outcomes.count('win'):2d}  tie {outcomes.count('tie'):2d}  "
          f"loss {outcomes.count('loss'):2d}")
