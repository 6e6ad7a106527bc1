"""Command line entry point ``alh``.

    alh run --data PATH --strategy iral --budget 30 --runs 10 --seed 0 --out DIR
    alh compare --out DIR --a iral --b random

Options may also come from ``--config FILE`` holding ``key = value`` lines
named like the long flags (``init-per-class = 1``); flags win over the file.
"""

from __future__ import annotations

import argparse
import logging
import sys

from alh.errors import AlhError, ConfigError
from alh.harness import STRATEGIES, RunConfig, run_experiment
from alh.informative import HyperParams
from alh.outputs import compare, merge_and_write, read_curves

RUN_DEFAULTS = {
    "format": "csv", "strategy": "iral", "budget": 30, "runs": 10, "seed": 0,
    "beta": 100.0, "lambda": 0.1, "rho": 1.0, "gamma": None, "init_per_class": 0,
    "rescale": False, "beta_sweep": False, "relaxation": "vertex",
}


def read_config(path) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _bool(v) -> bool:
    if isinstance(v, bool):
        return v
    if str(v).lower() in ("1", "true", "yes", "on"):
        return True
    if str(v).lower() in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alh", description="Pool-based multi-class active learning")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an active-learning experiment")
    run.add_argument("--config")
    run.add_argument("--data")
    run.add_argument("--format", choices=["csv", "sparse"])
    run.add_argument("--strategy", choices=STRATEGIES)
    run.add_argument("--budget", type=int)
    run.add_argument("--runs", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--beta", type=float)
    run.add_argument("--lambda", dest="lambda", type=float)
    run.add_argument("--rho", type=float)
    run.add_argument("--gamma", type=float)
    run.add_argument("--init-per-class", dest="init_per_class", type=int)
    run.add_argument("--rescale", action="store_const", const=True)
    run.add_argument("--beta-sweep", dest="beta_sweep", action="store_const", const=True)
    run.add_argument("--relaxation", choices=["vertex", "simplex"])
    run.add_argument("--out")

    cmp_ = sub.add_parser("compare", help="paired t-tests between two strategies' curves")
    cmp_.add_argument("--out", required=True)
    cmp_.add_argument("--a", required=True)
    cmp_.add_argument("--b", required=True)
    return parser


def resolve_run(args) -> RunConfig:
    values = dict(RUN_DEFAULTS)
    if args.config:
        values.update(read_config(args.config))
    values.update({k: v for k, v in vars(args).items() if v is not None and k in
                   set(RUN_DEFAULTS) | {"data", "out"}})
    for key in ("data", "out"):
        if not values.get(key):
            raise ConfigError(f"--{key} is required")
    try:
        gamma = values["gamma"]
        return RunConfig(
            data=str(values["data"]), out=str(values["out"]),
            fmt=str(values["format"]), strategy=str(values["strategy"]),
            budget=int(values["budget"]), runs=int(values["runs"]), seed=int(values["seed"]),
            hp=HyperParams(float(values["lambda"]), float(values["beta"]), float(values["rho"])),
            gamma=None if gamma in (None, "", "none") else float(gamma),
            init_per_class=int(values["init_per_class"]),
            rescale=_bool(values["rescale"]), beta_sweep=_bool(values["beta_sweep"]),
            relaxation=str(values["relaxation"]),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, AlhError):
            raise
        raise ConfigError(str(exc)) from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "run":
            config = resolve_run(args)
            curves = run_experiment(config)
            merge_and_write(curves, config.out)
        else:
            curves = read_curves(args.out)
            known = {p.strategy for p in curves}
            for s in (args.a, args.b):
                if s not in known:
                    raise ConfigError(f"no curves for strategy {s!r} in {args.out}")
            rows = compare(curves, args.a, args.b)
            merge_and_write([], args.out, pairs=[(args.a, args.b)])
            wins = sum(r[5] == "win" for r in rows)
            ties = sum(r[5] == "tie" for r in rows)
            print(f"{args.a} vs {args.b}: {wins} win / {ties} tie / {len(rows) - wins - ties} loss")
    except AlhError as exc:
        print(f"alh: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
