"""Base-2 exponential sums without overflow."""

from __future__ import annotations

import math
from typing import Iterable


def log2_sum_exp2(exponents: Iterable[float]) -> float:
    """log2(sum 2**e) with a max shift; -inf for an empty input."""
    es = list(exponents)
    if not es:
        return -math.inf
    top = max(es)
    if top == -math.inf:
        return -math.inf
    return top + math.log2(math.fsum(2.0 ** (e - top) for e in es))


def log2_mean_exp2(exponents: Iterable[float]) -> float:
    es = list(exponents)
    if not es:
        raise ValueError("empty input")
    return log2_sum_exp2(es) - math.log2(len(es))


def exp2(e: float) -> float:
    """2**e, saturating to inf instead of raising OverflowError."""
    try:
        return 2.0 ** e
    except OverflowError:
        return math.inf


def leq(lhs: float, rhs: float, abs_slack: float = 1e-9, rel_slack: float = 1e-12) -> bool:
    """``lhs <= rhs`` up to the global comparison slack."""
    return lhs <= rhs + abs_slack + rel_slack * abs(rhs)
