"""Converse and achievability bounds on empirical code-length CGFs.

Every bound comes back as a ``BoundReport`` whose ``scale`` says what it is
comparable with:

* ``"cgf"``      bits per symbol, compare with a CGF value;
* ``"exp-sum"``  compare with sum_i 2**(lam L_i) over phrases;
* ``"fv-average"`` compare with (ell/n) sum_t 2**(lam L_t) over blocks.

Values are never converted between scales implicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .empirical import BlockStats, JointBlockStats, block_stats, log2_conditional_renyi_sum, renyi_entropy
from .lz78 import BlockPhraseCounts
from .numerics import exp2, log2_mean_exp2, log2_sum_exp2

CGF = "cgf"
EXP_SUM = "exp-sum"
FV_AVERAGE = "fv-average"


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: float
    scale: str
    params: dict = field(default_factory=dict)
    target: str = ""
    note: str = ""

    @property
    def vacuous(self) -> bool:
        if self.scale == CGF:
            return self.value < 0
        return self.value <= 0

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "scale": self.scale,
                "params": dict(self.params), "target": self.target,
                "vacuous": self.vacuous, "note": self.note}


def _check_lambda(lam):
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")


def gamma_count(s: int, count: float) -> float:
    """2 log s + log[1 + log((s^2 + count) / s^2)], the generalized Kraft slack
    for ``count`` distinct strings and s states."""
    if s < 1:
        raise ValueError("s must be >= 1")
    s2 = s * s
    return 2 * math.log2(s) + math.log2(1 + math.log2((s2 + count) / s2))


def gamma(s: int, ell: float, alpha: int) -> float:
    """gamma(s, ell) with alpha**ell strings; ``ell`` may be non-integer."""
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    return gamma_count(s, float(alpha) ** ell)


def thm1_lower_bound(x, ell: int, lam: float, s: int, alpha: int | None = None) -> BoundReport:
    """Renyi-entropy floor on the F-V CGF of any s-state IL encoder."""
    _check_lambda(lam)
    stats = x if isinstance(x, BlockStats) else block_stats(x, ell, alpha)
    alpha = stats.alpha
    h = renyi_entropy(stats, lam)
    g = gamma(s, stats.ell, alpha)
    return BoundReport("thm1_lower_bound", h - g / stats.ell, CGF,
                       {"lambda": lam, "ell": stats.ell, "s": s, "alpha": alpha,
                        "renyi_entropy": h, "gamma": g},
                       "fv_cgf of any s-state IL encoder")


def zl_phrase_bound(c: int, s: int) -> float:
    """(c + s^2) log[(c + s^2) / (4 s^2)]: minimum bits to encode c distinct phrases."""
    s2 = s * s
    return (c + s2) * math.log2((c + s2) / (4 * s2))


def block_lz_lower_bound(counts: BlockPhraseCounts | Sequence[int], lam: float, s: int,
                         n: int | None = None, ell: int | None = None) -> BoundReport:
    _check_lambda(lam)
    if isinstance(counts, BlockPhraseCounts):
        ell, cts, method = counts.ell, counts.counts, counts.method
    else:
        cts, method = tuple(counts), "given"
    if not ell:
        raise ValueError("block length ell is required")
    if n is None:
        n = ell * len(cts)
    if n != ell * len(cts):
        raise ValueError(f"{len(cts)} blocks of length {ell} do not make n={n}")
    val = log2_mean_exp2(lam * zl_phrase_bound(c, s) for c in cts) / (lam * ell)
    note = "" if method == "max-distinct" else f"phrase counts from {method} parsing (lower bound on max-distinct)"
    return BoundReport("block_lz_lower_bound", val, CGF,
                       {"lambda": lam, "ell": ell, "s": s, "n": n, "counts": list(cts), "method": method},
                       "fv_cgf of any s-state IL encoder", note)


def _thm2_term(c: int, s: int, lam: float) -> float:
    s2 = s * s
    return s2 * (((c + s2) / (2 * s2)) ** (lam + 1) - 1) / (2 ** (lam + 1) - 1)


def thm2_lower_bound(c: int, s: int, lam: float) -> BoundReport:
    _check_lambda(lam)
    if c < 1 or s < 1:
        raise ValueError("c and s must be >= 1")
    return BoundReport("thm2_lower_bound", _thm2_term(c, s, lam), EXP_SUM,
                       {"c": c, "s": s, "lambda": lam},
                       "sum_i 2^(lam L_i) over c distinct phrases, any s-state IL encoder")


def thm2_alternative_lower_bound(c: int, s: int, lam: float, alpha: int) -> BoundReport:
    """2**[(lam+1) log c - lam gamma(s, log_alpha c)], with alpha**ell -> c inside gamma."""
    _check_lambda(lam)
    if c < 2:
        raise ValueError("alternative bound needs c >= 2")
    g = gamma_count(s, c)
    val = exp2((lam + 1) * math.log2(c) - lam * g)
    return BoundReport("thm2_alternative_lower_bound", val, EXP_SUM,
                       {"c": c, "s": s, "lambda": lam, "alpha": alpha, "gamma": g},
                       "sum_i 2^(lam L_i) over c distinct phrases, any s-state IL encoder")


def thm3_upper_bound(c: int, alpha: int, lam: float) -> BoundReport:
    _check_lambda(lam)
    if c < 1:
        raise ValueError("c must be >= 1")
    val = exp2(lam * math.log2(2 * alpha) + (lam + 1) * math.log2(c))
    return BoundReport("thm3_upper_bound", val, EXP_SUM, {"c": c, "alpha": alpha, "lambda": lam},
                       "sum_i 2^(lam L_LZ,i) on the incremental parsing")


def lz_main_term(c: int, n: int) -> float:
    """c log2 c / n, the V-V CGF of an ideal fixed-length phrase code."""
    return c * math.log2(c) / n if c > 0 else 0.0


# ---------------------------------------------------------------------------
# side information

def sideinfo_fv_lower_bound(joint: JointBlockStats, lam: float, s: int) -> BoundReport:
    _check_lambda(lam)
    g = gamma(s, joint.ell, joint.alpha)
    log2_sum = log2_conditional_renyi_sum(joint, lam)
    val = exp2(log2_sum - lam * g)
    return BoundReport("sideinfo_fv_lower_bound", val, FV_AVERAGE,
                       {"lambda": lam, "ell": joint.ell, "s": s, "alpha": joint.alpha, "gamma": g,
                        "conditional_renyi_sum": exp2(log2_sum)},
                       "(ell/n) sum_t 2^(lam L_t), any s-state IL encoder with side information")


def _check_counts(ck):
    ck = [int(v) for v in ck]
    if not ck:
        raise ValueError("empty context list")
    if any(v < 1 for v in ck):
        raise ValueError("every context count must be >= 1")
    return ck


def sideinfo_vv_lower_bound(ck: Sequence[int], s: int, lam: float) -> BoundReport:
    _check_lambda(lam)
    ck = _check_counts(ck)
    val = math.fsum(_thm2_term(c, s, lam) for c in ck)
    return BoundReport("sideinfo_vv_lower_bound", val, EXP_SUM, {"c_k": ck, "s": s, "lambda": lam},
                       "sum_i 2^(lam L_i) over the joint parsing")


def sideinfo_vv_alternative(ck: Sequence[int], s: int, lam: float, alpha: int) -> BoundReport:
    _check_lambda(lam)
    ck = _check_counts(ck)
    terms = []
    for c in ck:
        if c >= 2:
            terms.append(thm2_alternative_lower_bound(c, s, lam, alpha).value)
        else:
            terms.append(_thm2_term(c, s, lam))
    singles = sum(1 for c in ck if c == 1)
    note = f"{singles} context(s) with c_k=1 use the thm2 term" if singles else ""
    return BoundReport("sideinfo_vv_alternative", math.fsum(terms), EXP_SUM,
                       {"c_k": ck, "s": s, "lambda": lam, "alpha": alpha},
                       "sum_i 2^(lam L_i) over the joint parsing", note)


def sideinfo_vv_upper_bound(ck: Sequence[int], alpha: int, lam: float) -> BoundReport:
    _check_lambda(lam)
    ck = _check_counts(ck)
    val = math.fsum(thm3_upper_bound(c, alpha, lam).value for c in ck)
    return BoundReport("sideinfo_vv_upper_bound", val, EXP_SUM, {"c_k": ck, "alpha": alpha, "lambda": lam},
                       "sum_i 2^(lam L_i) of the per-context LZ coder")


def conditional_compressibility(ck: Sequence[int], n: int) -> float:
    """(1/n) sum_k c_k log2 c_k."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.fsum(c * math.log2(c) for c in ck if c > 0) / n


def conditional_cgf_main_term(ck: Sequence[int], n: int, lam: float) -> float:
    """(c/(n lam)) log2[(1/c) sum_k 2**((lam+1) log2 c_k)], c = sum_k c_k."""
    _check_lambda(lam)
    ck = _check_counts(ck)
    c = sum(ck)
    return c / (n * lam) * (log2_sum_exp2((lam + 1) * math.log2(v) for v in ck) - math.log2(c))
