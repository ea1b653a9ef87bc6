import random

import pytest

from lzcgf.bounds import sideinfo_vv_lower_bound, sideinfo_vv_upper_bound, thm3_upper_bound
from lzcgf.cgf import exp_sum, vv_cgf, conditional_vv_cgf
from lzcgf.lz78 import incremental_parse, lz_encode
from lzcgf.seq import SequenceError, SymbolSequence
from lzcgf.sideinfo import (conditional_lz_lengths, conditional_lz_roundtrip, joint_incremental_parse,
                            per_context_lengths)

S = SymbolSequence.from_string
X6, U6 = S("010001"), S("010101")


def test_worked_example():
    jp = joint_incremental_parse(X6, U6)
    assert jp.parsing.boundaries == (1, 2, 4, 6)
    assert jp.c == 4
    assert jp.c_u == 3
    assert jp.u_phrases == ((0,), (1,), (0, 1))
    assert jp.counts == (1, 1, 2)
    assert jp.contexts == (0, 1, 2, 2)


def test_constant_side_information():
    jp = joint_incremental_parse(X6, S("000000"))
    assert jp.parsing.boundaries == incremental_parse(X6)[0].boundaries
    # u phrases are 0, 0, 00, 00: one context per phrase length
    assert jp.c_u == 2 and jp.counts == (2, 2)


def test_x_equals_u():
    x = S("0110101110010")
    jp = joint_incremental_parse(x, x)
    # one phrase per context, except a repeated final phrase joining its context
    assert sum(c - 1 for c in jp.counts) == int(jp.parsing.last_incomplete)


def test_length_mismatch():
    with pytest.raises(SequenceError):
        joint_incremental_parse(S("01"), S("011"))


def test_conditional_lengths_example():
    jp = joint_incremental_parse(X6, U6)
    assert per_context_lengths(jp, 2) == [[1], [1], [1, 2]]
    prof = conditional_lz_lengths(jp, 2)
    assert sum(prof.lengths) == 5
    assert exp_sum(prof.lengths, 1) == 10
    assert sideinfo_vv_lower_bound(jp.counts, 1, 1).value <= 10 <= sideinfo_vv_upper_bound(jp.counts, 2, 1).value


def test_single_context_matches_plain_lz():
    # all pair phrases have length 1 with u constant: one context holding every phrase
    x = SymbolSequence.from_string("0123", 4)
    jp = joint_incremental_parse(x, S("0000"))
    assert jp.counts == (4,)
    lengths = conditional_lz_lengths(jp, 4).lengths
    assert list(lengths) == lz_encode(x)[1]
    for lam in (0.5, 2):
        assert conditional_vv_cgf(lengths, lam, 4).value == vv_cgf(lz_encode(x)[1], lam, 4).value


def test_round_trip_examples():
    ok, info = conditional_lz_roundtrip(X6, U6, 2)
    assert ok and info["payload_bits"] == 5
    x = SymbolSequence.from_string("0210212201", 3)
    ok, info = conditional_lz_roundtrip(x, x, 3)
    jp = joint_incremental_parse(x, x)
    assert ok
    for ln, k in zip(info["lengths"], jp.contexts):
        if jp.counts[k] == 1:
            assert ln == 2    # ceil(log2 3)


def test_random_round_trips_and_per_context_sandwich():
    rng = random.Random(3)
    for _ in range(150):
        n = rng.randint(1, 1000)
        ax, au = rng.randint(2, 4), rng.randint(2, 3)
        x = [rng.randrange(ax) for _ in range(n)]
        u = [rng.randrange(au) for _ in range(n)]
        ok, _ = conditional_lz_roundtrip(x, u, ax)
        assert ok
        jp = joint_incremental_parse(x, u)
        assert sum(jp.counts) == jp.c
        for lam in (0.25, 1, 4):
            for k, lens in enumerate(per_context_lengths(jp, ax)):
                assert exp_sum(lens, lam) <= thm3_upper_bound(jp.counts[k], ax, lam).value * (1 + 1e-12)
