"""Dataset loading, +/-1 label encoding and seeded pool/test splits."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from alh.errors import ParseError, ValidationError


@dataclass(frozen=True)
class Dataset:
    """Dense feature matrix with integer-or-string class labels.

    ``class_list`` is sorted ascending and ``labels`` only contains its
    members, so the column order of the encoded label matrix is fixed.
    """

    features: np.ndarray
    labels: np.ndarray
    class_list: tuple
    name: str = ""

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        if X.ndim != 2 or X.shape[1] < 1:
            raise ValidationError("features must be an n x d matrix with d >= 1")
        if not np.all(np.isfinite(X)):
            raise ValidationError("features contain non-finite values")
        labels = np.asarray(self.labels)
        if labels.shape != (X.shape[0],):
            raise ValidationError("need exactly one label per row")
        classes = tuple(self.class_list)
        if len(classes) < 2:
            raise ValidationError(f"need at least 2 classes, got {len(classes)}")
        if list(classes) != sorted(set(classes)):
            raise ValidationError("class_list must be sorted and duplicate-free")
        if X.shape[0] < len(classes):
            raise ValidationError("fewer rows than classes")
        if not set(labels.tolist()) <= set(classes):
            raise ValidationError("label outside class_list")
        X.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_list", classes)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def c(self) -> int:
        return len(self.class_list)

    def class_positions(self) -> np.ndarray:
        """Label of every row as its position in ``class_list``."""
        lookup = {k: i for i, k in enumerate(self.class_list)}
        return np.array([lookup[y] for y in self.labels.tolist()], dtype=int)

    def rescaled(self) -> "Dataset":
        """Copy with every feature min-max scaled to [0, 1] (constant columns -> 0)."""
        X = self.features
        lo, hi = X.min(axis=0), X.max(axis=0)
        span = np.where(hi > lo, hi - lo, 1.0)
        return Dataset((X - lo) / span, self.labels, self.class_list, self.name)


def _label_token(tok: str):
    # numeric labels sort numerically, everything else lexicographically
    try:
        value = float(tok)
    except ValueError:
        return tok
    return int(value) if value.is_integer() else value


def _from_rows(features, labels, name) -> Dataset:
    labels = [_label_token(t) for t in labels]
    kinds = {isinstance(t, str) for t in labels}
    if len(kinds) > 1:
        # mixed numeric/text tokens: compare as text
        labels = [str(t) for t in labels]
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise ValidationError(f"{name}: need at least 2 distinct classes, found {len(classes)}")
    if str in map(type, labels):
        arr = np.empty(len(labels), dtype=object)
        arr[:] = labels
    else:
        arr = np.asarray(labels)
    return Dataset(np.asarray(features, dtype=float), arr, tuple(classes), name)


def _read_text(path) -> str:
    # universal newlines handle LF and CRLF
    with open(path, encoding="utf-8", newline=None) as fh:
        return fh.read()


def load_csv(path) -> Dataset:
    """Read ``features..., label`` rows; a non-numeric first row is a header."""
    path = Path(path)
    rows = [r for r in csv.reader(io.StringIO(_read_text(path)))]
    numbered = [(i + 1, r) for i, r in enumerate(rows) if r and any(f.strip() for f in r)]
    if numbered:
        first = numbered[0][1]
        try:
            [float(f) for f in first[:-1]]
        except ValueError:
            numbered = numbered[1:]
    if len(numbered) < 2:
        raise ParseError(f"{path}: need at least 2 data rows")
    width = len(numbered[0][1])
    if width < 2:
        raise ParseError(f"{path}:{numbered[0][0]}: need at least one feature and a label")
    features, labels = [], []
    for lineno, row in numbered:
        if len(row) != width:
            raise ParseError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
        try:
            features.append([float(f) for f in row[:-1]])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: non-numeric feature ({exc})") from None
        labels.append(row[-1].strip())
    return _from_rows(features, labels, path.stem)


def load_sparse(path) -> Dataset:
    """Read ``label idx:val ...`` rows (1-based, strictly increasing indices)."""
    path = Path(path)
    entries, labels = [], []
    d = 0
    for lineno, line in enumerate(_read_text(path).split("\n"), start=1):
        tokens = line.split()
        if not tokens:
            continue
        row = {}
        last = 0
        for tok in tokens[1:]:
            idx_s, sep, val_s = tok.partition(":")
            try:
                if not sep:
                    raise ValueError(tok)
                idx, val = int(idx_s), float(val_s)
            except ValueError:
                raise ParseError(f"{path}:{lineno}: bad entry {tok!r}") from None
            if idx < 1:
                raise ParseError(f"{path}:{lineno}: index {idx} < 1")
            if idx <= last:
                raise ParseError(f"{path}:{lineno}: indices not strictly increasing at {idx}")
            row[idx] = val
            last = idx
        d = max(d, last)
        entries.append(row)
        labels.append(tokens[0])
    if len(entries) < 2:
        raise ParseError(f"{path}: need at least 2 data rows")
    X = np.zeros((len(entries), max(d, 1)))
    for i, row in enumerate(entries):
        for idx, val in row.items():
            X[i, idx - 1] = val
    return _from_rows(X, labels, path.stem)


def encode_labels(labels, class_list) -> np.ndarray:
    """+1 at the class position of each label, -1 elsewhere (m x c)."""
    lookup = {k: i for i, k in enumerate(class_list)}
    Y = -np.ones((len(labels), len(class_list)))
    for i, y in enumerate(labels):
        try:
            Y[i, lookup[y]] = 1.0
        except KeyError:
            raise ValidationError(f"label {y!r} not in class list") from None
    return Y


def decode_labels(Y: np.ndarray) -> np.ndarray:
    return np.argmax(Y, axis=1)


@dataclass(frozen=True)
class SplitSpec:
    pool_fraction: float = 0.6
    seed: int = 0
    init_per_class: int = 0

    def __post_init__(self):
        if not 0.0 < self.pool_fraction < 1.0:
            raise ValidationError("pool_fraction must lie in (0, 1)")
        if self.seed < 0 or self.init_per_class < 0:
            raise ValidationError("seed and init_per_class must be non-negative")


MAX_SPLIT_RETRIES = 100


def make_rng(seed: int, *extra: int) -> np.random.Generator:
    """The repo-wide PRNG: PCG64 seeded through a SeedSequence."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *extra])))


def split(dataset: Dataset, spec: SplitSpec):
    """Seeded permutation split into pool and test plus optional initial labels.

    Returns ``(pool, test, initial)`` as arrays of dataset row indices; the
    initial labeled indices are a subset of ``pool``. When a class is missing
    from the pool, the split is redrawn with the next derived seed.
    """
    n, c = dataset.n, dataset.c
    n_pool = int(np.floor(spec.pool_fraction * n))
    k = spec.init_per_class
    if k and n_pool < k * c:
        raise ValidationError(f"pool of {n_pool} cannot hold {k} points for each of {c} classes")
    positions = dataset.class_positions()
    for attempt in range(MAX_SPLIT_RETRIES + 1):
        rng = make_rng(spec.seed, attempt)
        perm = rng.permutation(n)
        pool, test = perm[:n_pool], perm[n_pool:]
        if not k:
            return pool, test, np.empty(0, dtype=int)
        initial = []
        for cls in range(c):
            members = pool[positions[pool] == cls]
            if len(members) < k:
                break
            initial.extend(rng.choice(members, size=k, replace=False).tolist())
        else:
            return pool, test, np.array(initial, dtype=int)
    raise ValidationError(f"no split with {k} pool points per class after {MAX_SPLIT_RETRIES} retries")


def make_blobs(n: int = 300, c: int = 3, d: int = 2, separation: float = 4.0, sigma: float = 1.0,
               seed: int = 0, name: str = "blobs") -> Dataset:
    """Isotropic Gaussian classes with means on a circle in the first two axes.

    Neighbouring means are ``separation * sigma`` apart (for c = 3 the means
    form an equilateral triangle). Sizes are as equal as ``n`` allows.
    """
    if d < 2:
        raise ValidationError("make_blobs needs d >= 2")
    rng = make_rng(seed)
    radius = separation * sigma / (2.0 * np.sin(np.pi / c))
    angles = 2.0 * np.pi * np.arange(c) / c
    means = np.zeros((c, d))
    means[:, 0], means[:, 1] = radius * np.cos(angles), radius * np.sin(angles)
    labels = np.arange(n) % c
    X = means[labels] + sigma * rng.standard_normal((n, d))
    return Dataset(X, labels, tuple(range(c)), name)


def write_csv(dataset: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row, y in zip(dataset.features, dataset.labels.tolist()):
            fh.write(",".join(repr(float(v)) for v in row) + f",{y}\n")
