"""Paired t-test with a win/tie/loss verdict."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from alh.errors import ValidationError


@dataclass(frozen=True)
class TTestResult:
    outcome: str
    t_stat: float
    p_value: float


def t_two_sided_p(t: float, df: int) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if math.isinf(t):
        return 0.0
    return float(special.betainc(0.5 * df, 0.5, df / (df + t * t)))


def paired_t_test(acc_a, acc_b, level: float = 0.95) -> TTestResult:
    """Two-tailed paired t-test on ``a - b``.

    ``win`` when the difference is significant at ``1 - level`` and its mean is
    positive, ``loss`` when significant and negative, otherwise ``tie``.
    Identical samples give ``tie`` with t = 0, p = 1; constant nonzero
    differences give t = +/-inf and p = 0.
    """
    a, b = np.asarray(acc_a, dtype=float), np.asarray(acc_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError("paired samples must be 1-D and of equal length")
    n = a.size
    if n < 2:
        raise ValidationError("paired t-test needs at least 2 pairs")
    d = a - b
    mean = d.mean()
    sd = d.std(ddof=1)
    if sd == 0.0:
        if mean == 0.0:
            return TTestResult("tie", 0.0, 1.0)
        t = math.copysign(math.inf, mean)
    else:
        t = float(mean / (sd / math.sqrt(n)))
    p = t_two_sided_p(t, n - 1)
    if p < 1.0 - level:
        outcome = "win" if mean > 0 else "loss"
    else:
        outcome = "tie"
    return TTestResult(outcome, t, p)
