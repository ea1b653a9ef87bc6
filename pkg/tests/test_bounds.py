import math

import pytest

from lzcgf.bounds import (CGF, EXP_SUM, block_lz_lower_bound, conditional_cgf_main_term,
                          conditional_compressibility, gamma, sideinfo_fv_lower_bound,
                          sideinfo_vv_alternative, sideinfo_vv_lower_bound, sideinfo_vv_upper_bound,
                          thm1_lower_bound, thm2_alternative_lower_bound, thm2_lower_bound,
                          thm3_upper_bound)
from lzcgf.cgf import exp_sum, vv_cgf
from lzcgf.empirical import block_stats, joint_block_stats, renyi_entropy
from lzcgf.lz78 import BlockPhraseCounts, lz_encode
from lzcgf.seq import SymbolSequence

S = SymbolSequence.from_string

# reference values below were evaluated with mpmath at 30 digits


def test_gamma():
    assert gamma(1, 1, 2) == pytest.approx(1.37014335194600, abs=1e-12)
    assert gamma(1, 8, 2) == pytest.approx(3.17082633196501, abs=1e-12)
    assert gamma(1, 8, 2) == pytest.approx(math.log2(9), abs=1e-2)
    assert gamma(2, 1, 2) == pytest.approx(2.66444870745389, abs=1e-12)
    assert gamma(1, 2, 2) == pytest.approx(1.73202084564462, abs=1e-12)


def test_gamma_per_symbol_decreases():
    vals = [gamma(1, ell, 2) / ell for ell in range(1, 40)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_thm1_examples():
    b = thm1_lower_bound(S("0000"), 1, 2.0, 1)
    assert b.value == pytest.approx(-1.37014335194600, abs=1e-12)
    assert b.scale == CGF and b.vacuous
    b = thm1_lower_bound(S("00011011"), 2, 1.0, 1)
    assert b.value == pytest.approx(0.133989577177690, abs=1e-12)
    assert not b.vacuous


def test_block_lz_examples():
    assert block_lz_lower_bound(BlockPhraseCounts(4, (3,), "incremental"), 1, 1).value == pytest.approx(0.0)
    assert block_lz_lower_bound(BlockPhraseCounts(8, (7,), "max-distinct"), 1, 1).value == pytest.approx(1.0)
    one = block_lz_lower_bound(BlockPhraseCounts(8, (7,), "max-distinct"), 2, 1).value
    two = block_lz_lower_bound(BlockPhraseCounts(8, (7, 7), "max-distinct"), 2, 1).value
    assert one == pytest.approx(two)


def test_thm2_examples():
    b = thm2_lower_bound(4, 1, 1)
    assert b.value == pytest.approx(1.75) and b.scale == EXP_SUM
    for s in (1, 2, 3):
        assert thm2_lower_bound(s * s, s, 1.3).value == pytest.approx(0.0, abs=1e-12)
    _, lengths = lz_encode(S("010001"))
    assert exp_sum(lengths, 1) == 22 >= b.value


def test_thm2_alternative_examples():
    b = thm2_alternative_lower_bound(4, 1, 1, 2)
    assert b.value == pytest.approx(4.81647993062370, abs=1e-12)
    assert b.value > thm2_lower_bound(4, 1, 1).value
    assert thm2_alternative_lower_bound(37, 2, 1e-4, 3).value == pytest.approx(37, rel=1e-3)
    with pytest.raises(ValueError):
        thm2_alternative_lower_bound(1, 1, 1, 2)


def test_neither_vv_lower_bound_dominates():
    # small s: alternative wins; large c, lam: thm2 form wins
    assert thm2_alternative_lower_bound(4, 1, 1, 2).value > thm2_lower_bound(4, 1, 1).value
    assert thm2_alternative_lower_bound(4096, 1, 4, 2).value < thm2_lower_bound(4096, 1, 4).value


def test_thm3_examples():
    assert thm3_upper_bound(4, 2, 1).value == pytest.approx(64)
    assert thm3_upper_bound(4, 2, 0.5).value == pytest.approx(16)
    for lam in (0.25, 1, 3):
        assert thm3_upper_bound(1, 3, lam).value == pytest.approx(6 ** lam)
        assert 2 ** (lam * 1) <= thm3_upper_bound(1, 2, lam).value


def test_sideinfo_vv_examples():
    ck = [1, 1, 2]
    assert sideinfo_vv_lower_bound(ck, 1, 1).value == pytest.approx(1.25 / 3)
    assert sideinfo_vv_upper_bound(ck, 2, 1).value == pytest.approx(24)
    alt = sideinfo_vv_alternative(ck, 1, 1, 2)
    # contexts with c_k = 1 contribute the thm2 term, 0 at s = 1
    assert alt.value == pytest.approx(1.54741122893817, abs=1e-12)
    assert "c_k=1" in alt.note
    assert alt.value <= 10 <= 24


def test_sideinfo_vv_single_context_collapse():
    for c in (2, 5, 40):
        for lam in (0.5, 2):
            assert sideinfo_vv_lower_bound([c], 2, lam).value == pytest.approx(thm2_lower_bound(c, 2, lam).value)
            assert sideinfo_vv_alternative([c], 2, lam, 3).value == pytest.approx(
                thm2_alternative_lower_bound(c, 2, lam, 3).value)
            assert sideinfo_vv_upper_bound([c], 3, lam).value == pytest.approx(thm3_upper_bound(c, 3, lam).value)


def test_sideinfo_vv_small_lambda():
    ck = [5, 5, 5]
    up = sideinfo_vv_upper_bound(ck, 2, 1e-4).value
    assert up == pytest.approx(sum(ck), rel=1e-3)   # (2 alpha)^lam sum c_k^(lam+1) -> sum c_k
    lo = sideinfo_vv_lower_bound(ck, 1, 1e-4).value
    assert lo == pytest.approx(3 * (((5 + 1) / 2) - 1), rel=1e-3)
    with pytest.raises(ValueError):
        sideinfo_vv_upper_bound([], 2, 1)


def test_sideinfo_fv():
    x = S("01100011")
    j = joint_block_stats(x, S("00000000"), 2)
    lam = 1.5
    b = sideinfo_fv_lower_bound(j, lam, 1)
    t1 = thm1_lower_bound(x, 2, lam, 1).value
    # thm1 bound moved to the exponential-average scale
    assert b.value == pytest.approx(2 ** (lam * 2 * t1))
    b = sideinfo_fv_lower_bound(joint_block_stats(x, x, 2), 1.0, 1)
    assert b.value == pytest.approx(2 ** -gamma(1, 2, 2))
    b = sideinfo_fv_lower_bound(joint_block_stats(S("010001"), S("010101"), 2), 1.0, 1)
    assert b.value == pytest.approx(0.584843797363392, abs=1e-12)


def test_conditional_compressibility():
    assert conditional_compressibility([1, 1, 2], 6) == pytest.approx(1 / 3)
    assert conditional_compressibility([8], 20) == pytest.approx(8 * 3 / 20)
    assert conditional_compressibility([1, 1, 1], 5) == 0.0


def test_ideal_length_limit_is_conditional_compressibility():
    ck = [1, 3, 4, 9]
    n = 40
    ideal = [math.log2(c) for c in ck for _ in range(c)]
    assert vv_cgf(ideal, 1e-6, n).value == pytest.approx(conditional_compressibility(ck, n), abs=1e-5)
    assert conditional_cgf_main_term(ck, n, 1e-6) == pytest.approx(conditional_compressibility(ck, n), abs=1e-5)
