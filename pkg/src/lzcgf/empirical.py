"""Empirical distributions of non-overlapping blocks and the entropies built on them."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .numerics import log2_sum_exp2
from .seq import SequenceError, SymbolSequence


def _check_lambda(lam: float):
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")


def _blocks(syms: Sequence[int], ell: int) -> list[tuple[int, ...]]:
    if ell < 1:
        raise SequenceError("block length must be positive")
    if len(syms) % ell:
        raise SequenceError(f"block length {ell} does not divide n={len(syms)}")
    return [tuple(syms[i:i + ell]) for i in range(0, len(syms), ell)]


@dataclass(frozen=True)
class BlockStats:
    ell: int
    counts: dict  # block tuple -> count
    alpha: int

    @property
    def m(self) -> int:
        return sum(self.counts.values())

    @property
    def probabilities(self) -> dict:
        m = self.m
        return {b: k / m for b, k in self.counts.items()}

    def log2_probabilities(self) -> list[float]:
        lm = math.log2(self.m)
        return [math.log2(k) - lm for k in self.counts.values()]


@dataclass(frozen=True)
class JointBlockStats:
    ell: int
    counts: dict  # (x block, u block) -> count
    alpha: int

    @property
    def m(self) -> int:
        return sum(self.counts.values())

    def joint_probabilities(self) -> dict:
        m = self.m
        return {k: v / m for k, v in self.counts.items()}

    def u_marginal(self) -> dict:
        out = Counter()
        for (_, ub), k in self.counts.items():
            out[ub] += k
        m = self.m
        return {ub: k / m for ub, k in out.items()}

    def x_marginal(self) -> BlockStats:
        out = Counter()
        for (xb, _), k in self.counts.items():
            out[xb] += k
        return BlockStats(self.ell, dict(out), self.alpha)

    def conditional(self) -> dict:
        """P(x block | u block) keyed by (x block, u block)."""
        ucount = Counter()
        for (_, ub), k in self.counts.items():
            ucount[ub] += k
        return {(xb, ub): k / ucount[ub] for (xb, ub), k in self.counts.items()}


def block_stats(x: SymbolSequence | Sequence[int], ell: int, alpha: int | None = None) -> BlockStats:
    syms = x.symbols if isinstance(x, SymbolSequence) else tuple(x)
    if alpha is None:
        alpha = x.alpha if isinstance(x, SymbolSequence) else max(2, max(syms, default=0) + 1)
    if not syms:
        raise SequenceError("empty sequence")
    return BlockStats(ell, dict(Counter(_blocks(syms, ell))), alpha)


def joint_block_stats(x: SymbolSequence | Sequence[int], u: SymbolSequence | Sequence[int],
                      ell: int, alpha: int | None = None) -> JointBlockStats:
    xs = x.symbols if isinstance(x, SymbolSequence) else tuple(x)
    us = u.symbols if isinstance(u, SymbolSequence) else tuple(u)
    if len(xs) != len(us):
        raise SequenceError("x and u differ in length")
    if not xs:
        raise SequenceError("empty sequence")
    if alpha is None:
        alpha = x.alpha if isinstance(x, SymbolSequence) else max(2, max(xs) + 1)
    pairs = Counter(zip(_blocks(xs, ell), _blocks(us, ell)))
    return JointBlockStats(ell, dict(pairs), alpha)


def renyi_entropy(stats: BlockStats, lam: float) -> float:
    """Empirical Renyi entropy of order 1/(1+lam) per symbol, in bits.

    ((1+lam)/(lam*ell)) * log2 sum_a P(a)^(1/(1+lam)), with the powers taken
    in log space.
    """
    _check_lambda(lam)
    r = 1.0 / (1.0 + lam)
    s = log2_sum_exp2(r * lp for lp in stats.log2_probabilities())
    return (1.0 + lam) / (lam * stats.ell) * s


def shannon_entropy(stats: BlockStats) -> float:
    m = stats.m
    h = -math.fsum((k / m) * math.log2(k / m) for k in stats.counts.values())
    return h / stats.ell


def log2_conditional_renyi_sum(joint: JointBlockStats, lam: float) -> float:
    _check_lambda(lam)
    r = 1.0 / (1.0 + lam)
    lm = math.log2(joint.m)
    inner: dict = {}
    for (_, ub), k in joint.counts.items():
        inner.setdefault(ub, []).append(r * (math.log2(k) - lm))
    return log2_sum_exp2((1.0 + lam) * log2_sum_exp2(v) for v in inner.values())


def conditional_renyi_sum(joint: JointBlockStats, lam: float) -> float:
    """sum over u blocks of (sum over x blocks of P(x,u)^(1/(1+lam)))^(1+lam)."""
    return 2.0 ** log2_conditional_renyi_sum(joint, lam)
