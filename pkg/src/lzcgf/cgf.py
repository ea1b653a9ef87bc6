"""Empirical cumulant generating functions of code lengths.

Three normalizations are supported: per symbol (naive), per fixed block of
``ell`` symbols (F-V) and per phrase (V-V). All values are in bits per
source symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .numerics import exp2, log2_mean_exp2, log2_sum_exp2


class CgfError(ValueError):
    pass


@dataclass(frozen=True)
class LengthProfile:
    lengths: tuple[int, ...]
    granularity: str            # "symbol", "block" or "phrase"
    source: str = ""
    ell: Optional[int] = None   # block length, for granularity="block"
    contexts: Optional[tuple[int, ...]] = None   # context of each phrase, if conditional

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(int(v) for v in self.lengths))
        if any(v < 0 for v in self.lengths):
            raise CgfError("code lengths must be nonnegative")

    def __len__(self):
        return len(self.lengths)

    @property
    def total(self) -> int:
        return sum(self.lengths)


@dataclass(frozen=True)
class CgfValue:
    value: float
    lam: float
    granularity: str
    normalizer: float
    note: str = field(default="")

    def __float__(self):
        return self.value


def _lengths(profile) -> tuple[int, ...]:
    lengths = profile.lengths if isinstance(profile, LengthProfile) else tuple(profile)
    if not lengths:
        raise CgfError("empty length profile")
    return lengths


def _check_lambda(lam: float) -> bool:
    """True when lam == 0 (caller falls back to the mean length)."""
    if lam < 0:
        raise CgfError(f"lambda must be positive, got {lam}")
    return lam == 0


def exp_sum(lengths: Sequence[float], lam: float) -> float:
    """sum_i 2**(lam * L_i); summed directly unless a term could overflow."""
    es = [lam * v for v in lengths]
    if es and max(es) < 1000:
        return math.fsum(2.0 ** e for e in es)
    return exp2(log2_sum_exp2(es))


def log2_exp_sum(lengths: Sequence[float], lam: float) -> float:
    return log2_sum_exp2(lam * v for v in lengths)


def naive_cgf(profile, lam: float) -> CgfValue:
    lengths = _lengths(profile)
    n = len(lengths)
    if _check_lambda(lam):
        return CgfValue(sum(lengths) / n, 0.0, "symbol", n, "lambda=0: mean length")
    return CgfValue(log2_mean_exp2(lam * v for v in lengths) / lam, lam, "symbol", n)


def fv_cgf(profile, lam: float, n: int | None = None, ell: int | None = None) -> CgfValue:
    """(1/(lam*ell)) log2[(ell/n) sum_t 2**(lam L_t)] over block lengths L_t."""
    lengths = _lengths(profile)
    if ell is None:
        ell = getattr(profile, "ell", None)
    if not ell or ell < 1:
        raise CgfError("block length ell is required")
    if n is None:
        n = ell * len(lengths)
    if n % ell:
        raise CgfError(f"block length {ell} does not divide n={n}")
    if n // ell != len(lengths):
        raise CgfError(f"expected {n // ell} block lengths, got {len(lengths)}")
    if _check_lambda(lam):
        return CgfValue(sum(lengths) / n, 0.0, "block", ell, "lambda=0: mean length")
    return CgfValue(log2_mean_exp2(lam * v for v in lengths) / (lam * ell), lam, "block", ell)


def vv_cgf(profile, lam: float, n: int, c: int | None = None) -> CgfValue:
    """(c/(n*lam)) log2[(1/c) sum_i 2**(lam L_i)] over phrase lengths L_i."""
    lengths = _lengths(profile)
    if c is None:
        c = len(lengths)
    if c != len(lengths):
        raise CgfError(f"phrase count {c} != profile size {len(lengths)}")
    if n < 1:
        raise CgfError("n must be positive")
    if _check_lambda(lam):
        return CgfValue(sum(lengths) / n, 0.0, "phrase", c / n, "lambda=0: mean length")
    return CgfValue(c / (n * lam) * log2_mean_exp2(lam * v for v in lengths), lam, "phrase", c / n)


def conditional_vv_cgf(profile, lam: float, n: int, c: int | None = None) -> CgfValue:
    """V-V CGF over all phrases of a joint parsing; contexts only annotate the profile."""
    val = vv_cgf(profile, lam, n, c)
    return CgfValue(val.value, val.lam, "phrase|context", val.normalizer, val.note)


def mean_length(profile, n: int) -> float:
    """The lambda -> 0 limit of every CGF above: total bits / n."""
    return sum(_lengths(profile)) / n


# scale conversions

def fv_cgf_from_average(avg_exp: float, lam: float, ell: int) -> float:
    """Turn (ell/n) sum_t 2**(lam L_t) into F-V CGF bits/symbol."""
    return math.log2(avg_exp) / (lam * ell)


def vv_cgf_from_exp_sum(total_exp: float, lam: float, n: int, c: int) -> float:
    """Turn sum_i 2**(lam L_i) into V-V CGF bits/symbol."""
    return c / (n * lam) * (math.log2(total_exp) - math.log2(c))
