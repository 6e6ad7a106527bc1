"""CSV emission and reloading of learning curves, summaries and t-tests."""

from __future__ import annotations

import csv
from dataclasses import replace
from pathlib import Path

from alh.errors import AlhError
from alh.harness import CurvePoint, summarize
from alh.stats import paired_t_test

CURVES = "curves.csv"
SUMMARY = "summary.csv"
TTEST = "ttest.csv"

CURVE_HEADER = ["strategy", "run", "query_index", "n_labeled", "selected_pool_index", "accuracy"]
SUMMARY_HEADER = ["strategy", "query_index", "mean_accuracy", "std_accuracy"]
TTEST_HEADER = ["strategy_a", "strategy_b", "query_index", "t_stat", "p_value", "outcome"]


def fmt(x: float) -> str:
    return format(float(x), ".9g")


def _write(path: Path, header, rows):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise AlhError(f"cannot write {path}: {exc}") from None


def _read(path: Path):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise AlhError(f"cannot read {path}: {exc}") from None
    return rows[1:]


def read_curves(directory) -> list[CurvePoint]:
    path = Path(directory) / CURVES
    if not path.exists():
        return []
    return [CurvePoint(s, int(r), int(q), int(n), int(i), float(a))
            for s, r, q, n, i, a in _read(path)]


def read_comparisons(directory) -> list[tuple[str, str]]:
    path = Path(directory) / TTEST
    if not path.exists():
        return []
    return sorted({(row[0], row[1]) for row in _read(path)})


def compare(curves, a: str, b: str, level: float = 0.95):
    """Paired t-test of strategies ``a`` vs ``b`` at every shared query index.

    Runs are paired by run number; query indices with fewer than two shared
    runs are skipped.
    """
    acc = {}
    for p in curves:
        acc[(p.strategy, p.query_index, p.run)] = p.accuracy
    queries = sorted({q for s, q, _ in acc if s == a} & {q for s, q, _ in acc if s == b})
    rows = []
    for q in queries:
        runs = sorted(r for s, qq, r in acc if s == a and qq == q and (b, q, r) in acc)
        if len(runs) < 2:
            continue
        res = paired_t_test([acc[(a, q, r)] for r in runs], [acc[(b, q, r)] for r in runs], level)
        rows.append((a, b, q, res.t_stat, res.p_value, res.outcome))
    return rows


def write_outputs(curves, summaries, tests, directory) -> None:
    """Write curves.csv, summary.csv and ttest.csv into ``directory``.

    Rows are sorted, floats carry 9 significant digits, so identical inputs
    give identical bytes.
    """
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise AlhError(f"cannot create {directory}: {exc}") from None
    curve_rows = sorted(curves, key=lambda p: (p.strategy, p.run, p.query_index))
    _write(directory / CURVES, CURVE_HEADER,
           [(p.strategy, p.run, p.query_index, p.n_labeled, p.selected_pool_index, fmt(p.accuracy))
            for p in curve_rows])
    _write(directory / SUMMARY, SUMMARY_HEADER,
           [(s, q, fmt(m), fmt(sd)) for s, q, m, sd in sorted(summaries)])
    _write(directory / TTEST, TTEST_HEADER,
           [(a, b, q, fmt(t), fmt(p), o) for a, b, q, t, p, o in sorted(tests, key=lambda r: r[:3])])


def merge_and_write(new_curves, directory, pairs=()) -> None:
    """Replace the strategies in ``new_curves`` within ``directory`` and
    recompute the summary and every recorded comparison."""
    # aggregate the values exactly as they appear on disk
    new_curves = [replace(p, accuracy=float(fmt(p.accuracy))) for p in new_curves]
    replaced = {p.strategy for p in new_curves}
    curves = [p for p in read_curves(directory) if p.strategy not in replaced] + new_curves
    pairs = sorted(set(read_comparisons(directory)) | set(pairs))
    tests = [row for a, b in pairs for row in compare(curves, a, b)]
    write_outputs(curves, summarize(curves), tests, directory)
