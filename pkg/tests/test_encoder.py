import itertools

import pytest

from lzcgf.encoder import (EncoderSpecError, check_il, constant_encoder, enumerate_small_il_encoders,
                           format_encoder_spec, idle_then_dump_encoder, identity_encoder,
                           min_length_over_states, parse_encoder_spec, run)
from lzcgf.seq import Alphabet, SequenceError, SymbolSequence

X0101 = SymbolSequence.from_string("0101")


def test_identity_run():
    r = run(identity_encoder(), X0101)
    assert r.lengths == [1, 1, 1, 1]
    assert r.total == 4
    assert r.bits == "0101"


def test_idle_then_dump_run():
    r = run(idle_then_dump_encoder(), X0101)
    assert r.lengths == [0, 2, 0, 2]
    assert r.total == 4
    # states z_1..z_5 follow the table
    assert r.states == (0, 1, 0, 1, 0)


def test_empty_input():
    r = run(idle_then_dump_encoder(), SymbolSequence.from_string(""), z1=1)
    assert r.total == 0 and r.states == (1,)


def test_run_errors():
    with pytest.raises(EncoderSpecError):
        run(identity_encoder(), X0101, z1=3)
    with pytest.raises(SequenceError):
        run(identity_encoder(), X0101, u=(0, 0, 0, 0))


def test_identity_ternary_width():
    enc = identity_encoder(3)
    assert run(enc, (0, 1, 2)).bits == "000110"


def test_min_length_over_states():
    assert min_length_over_states(identity_encoder(), (0, 0)) == 2
    # from state 0: "" + "01"; from state 1: "00" + "11"
    enc = idle_then_dump_encoder()
    assert [run(enc, (0, 1), z).total for z in range(2)] == [2, 4]
    assert min_length_over_states(enc, (0, 1)) == 2
    assert min_length_over_states(enc, ()) == 0


def test_min_length_is_min():
    enc = idle_then_dump_encoder()
    for a in itertools.product((0, 1), repeat=5):
        m = min_length_over_states(enc, a)
        assert all(m <= run(enc, a, z).total for z in range(enc.states))


def test_check_il():
    assert check_il(identity_encoder(), 8).certified
    res = check_il(constant_encoder(), 8)
    assert not res.certified and res.depth == 1
    assert res.witness == (0, (0,), (1,))
    assert check_il(idle_then_dump_encoder(), 8).describe() == "certified-up-to-depth(8)"


def test_check_il_side_information():
    # output ignores x when u == 1: not lossless
    text = """
    states: 1
    alphabet: 0 1
    side_alphabet: 0 1
    0, 0, 0 -> 0, 0
    0, 1, 0 -> 1, 0
    0, 0, 1 -> , 0
    0, 1, 1 -> , 0
    """
    assert not check_il(parse_encoder_spec(text), 4).certified
    # x xor u, one bit per symbol: lossless given u
    text2 = text.replace("0, 0, 1 -> , 0", "0, 0, 1 -> 1, 0").replace("0, 1, 1 -> , 0", "0, 1, 1 -> 0, 0")
    assert check_il(parse_encoder_spec(text2), 6).certified


def _brute_il(enc, depth):
    """Independent re-enumeration: all same-length input pairs from each start state."""
    for z in range(enc.states):
        for m in range(1, depth + 1):
            seen = {}
            for x in itertools.product(range(enc.alphabet.size), repeat=m):
                r = run(enc, x, z)
                key = (r.bits, r.states[-1])
                if key in seen:
                    return False
                seen[key] = x
    return True


def test_enumeration_small_cases():
    encs = list(enumerate_small_il_encoders(1, 2, 1, 4))
    tables = [tuple(e.output[0, a] for a in range(2)) for e in encs]
    assert ("0", "1") in tables and ("1", "0") in tables
    assert ("", "") not in tables
    assert list(enumerate_small_il_encoders(1, 2, 0, 4)) == []


def test_enumeration_agrees_with_brute_force():
    encs = list(enumerate_small_il_encoders(1, 2, 2, 6))
    for e in encs:
        assert _brute_il(e, 6)
    # s=1: exactly the tables that are lossless for equal-length inputs
    assert len(encs) == 26


def test_enumeration_two_states_contains_embedded_identity():
    alph = Alphabet.of_size(2)
    found = False
    for e in enumerate_small_il_encoders(2, alph, 1, 5):
        if all(e.output[z, a] == str(a) for z in range(2) for a in range(2)):
            found = True
            break
    assert found


def test_spec_file_round_trip(tmp_path):
    enc = idle_then_dump_encoder()
    text = format_encoder_spec(enc)
    assert "0, 0 -> , 1" in text
    back = parse_encoder_spec(text)
    assert back.output == enc.output and back.next_state == enc.next_state


def test_spec_file_errors():
    with pytest.raises(EncoderSpecError):
        parse_encoder_spec("states: 1\nalphabet: 0 1\n0, 0 -> 0, 0\n")   # missing row
    with pytest.raises(EncoderSpecError):
        parse_encoder_spec("states: 1\nalphabet: 0 1\n0, 0 -> 2, 0\n0, 1 -> 1, 0\n")
    with pytest.raises(EncoderSpecError):
        parse_encoder_spec("states: 1\nalphabet: 0 1\n0, 0 -> 0, 1\n0, 1 -> 1, 0\n")
