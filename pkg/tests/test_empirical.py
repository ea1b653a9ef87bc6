import math

import pytest
from hypothesis import given, strategies as st

from lzcgf.empirical import (block_stats, conditional_renyi_sum, joint_block_stats, renyi_entropy,
                             shannon_entropy)
from lzcgf.seq import SequenceError, SymbolSequence

S = SymbolSequence.from_string


def direct_renyi(probs, lam, ell):
    return (1 + lam) / (lam * ell) * math.log2(sum(p ** (1 / (1 + lam)) for p in probs))


def test_block_stats_examples():
    assert block_stats(S("0101"), 2).probabilities == {(0, 1): 1.0}
    assert block_stats(S("0110"), 2).probabilities == {(0, 1): 0.5, (1, 0): 0.5}
    st = block_stats(S("00011011"), 2)
    assert st.m == 4
    assert st.probabilities == {(0, 0): 0.25, (0, 1): 0.25, (1, 0): 0.25, (1, 1): 0.25}


def test_block_stats_divisibility():
    with pytest.raises(SequenceError):
        block_stats(S("01101"), 2)


def test_renyi_examples():
    assert renyi_entropy(block_stats(S("0000"), 2), 1.0) == 0.0
    assert renyi_entropy(block_stats(S("00011011"), 2), 3.0) == pytest.approx(1.0, abs=1e-12)
    # P = (3/4, 1/4), lam = 1; mpmath value of 2 log2(sqrt(.75) + sqrt(.25))
    assert renyi_entropy(block_stats(S("0001"), 1), 1.0) == pytest.approx(0.899968626952992, abs=1e-12)


def test_renyi_rejects_nonpositive_lambda():
    with pytest.raises(ValueError):
        renyi_entropy(block_stats(S("01"), 1), 0.0)


def test_shannon_examples():
    assert shannon_entropy(block_stats(S("00011011"), 2)) == pytest.approx(1.0)
    assert shannon_entropy(block_stats(S("1111"), 1)) == 0.0
    assert shannon_entropy(block_stats(S("0001"), 1)) == pytest.approx(0.811278124459133, abs=1e-12)


def test_log_space_matches_direct_sum():
    st = block_stats(S("0011101000101110"), 2)
    probs = list(st.probabilities.values())
    for lam in (0.1, 0.5, 1, 2, 4):
        assert renyi_entropy(st, lam) == pytest.approx(direct_renyi(probs, lam, 2), abs=1e-12)


def test_large_block_no_underflow():
    # 2000 distinct blocks of length 16: P = 1/2000 each
    syms = []
    for i in range(2000):
        syms.extend(int(b) for b in format(i, "016b"))
    st = block_stats(syms, 16, alpha=2)
    assert renyi_entropy(st, 4.0) == pytest.approx(math.log2(2000) / 16, abs=1e-12)


seqs = st.lists(st.integers(0, 2), min_size=1, max_size=60).map(lambda s: s[: len(s) - len(s) % 2] or [0, 0])


@given(seqs)
def test_renyi_ordering(symbols):
    stats = block_stats(symbols, 2, alpha=3)
    h = shannon_entropy(stats)
    prev = -math.inf
    for lam in (1e-3, 0.25, 0.5, 1, 2, 4, 16):
        r = renyi_entropy(stats, lam)
        assert h - 1e-9 <= r <= math.log2(3) + 1e-9
        assert r >= prev - 1e-12
        prev = r


@given(seqs)
def test_lambda_to_zero_limit(symbols):
    stats = block_stats(symbols, 2, alpha=3)
    assert abs(renyi_entropy(stats, 1e-4) - shannon_entropy(stats)) <= 1e-3


def test_joint_stats_marginals():
    j = joint_block_stats(S("010001"), S("010101"), 2)
    assert j.m == 3
    assert sum(j.joint_probabilities().values()) == pytest.approx(1.0)
    assert j.u_marginal() == {(0, 1): 1.0}
    assert j.x_marginal().counts == {(0, 1): 2, (0, 0): 1}
    assert j.conditional()[(0, 0), (0, 1)] == pytest.approx(1 / 3)


def test_conditional_renyi_sum_examples():
    # constant u: equals 2^(lam * ell * H)
    x = S("01100011")
    j = joint_block_stats(x, S("00000000"), 2)
    h = renyi_entropy(block_stats(x, 2), 1.5)
    assert conditional_renyi_sum(j, 1.5) == pytest.approx(2 ** (1.5 * 2 * h))
    # x == u: every u block pins its x block
    assert conditional_renyi_sum(joint_block_stats(x, x, 2), 2.0) == pytest.approx(1.0)
    # joint blocks (01,01) x2 and (00,01) x1 -> (sqrt(2/3) + sqrt(1/3))^2, mpmath
    j = joint_block_stats(S("010001"), S("010101"), 2)
    assert conditional_renyi_sum(j, 1.0) == pytest.approx(1.94280904158206, abs=1e-12)


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=2, max_size=40))
def test_conditional_renyi_sum_at_least_one(pairs):
    pairs = pairs[: len(pairs) - len(pairs) % 2]
    xs, us = zip(*pairs)
    j = joint_block_stats(xs, us, 2, alpha=2)
    val = conditional_renyi_sum(j, 1.0)
    assert val >= 1 - 1e-12
    determined = all(len({xb for (xb, ub) in j.counts if ub == u}) == 1 for u in j.u_marginal())
    assert (abs(val - 1) < 1e-12) == determined
