"""Finite-state encoders: simulation, losslessness checking and enumeration.

An s-state encoder maps (state, symbol[, side symbol]) to a binary output
word (possibly empty) and a next state. Output words are '0'/'1' strings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .seq import Alphabet, SequenceError, SymbolSequence


class EncoderSpecError(ValueError):
    pass


@dataclass(frozen=True)
class EncoderSpec:
    states: int
    alphabet: Alphabet
    output: dict  # (z, a) or (z, a, u) -> bit string
    next_state: dict
    side_alphabet: Optional[Alphabet] = None

    def __post_init__(self):
        if self.states < 1:
            raise EncoderSpecError("need at least one state")
        for key in self._keys():
            if key not in self.output or key not in self.next_state:
                raise EncoderSpecError(f"table entry missing for {key}")
            word = self.output[key]
            if any(ch not in "01" for ch in word):
                raise EncoderSpecError(f"output word {word!r} is not a bit string")
            if not 0 <= self.next_state[key] < self.states:
                raise EncoderSpecError(f"next state {self.next_state[key]} out of range")

    @property
    def has_side(self) -> bool:
        return self.side_alphabet is not None

    def _keys(self):
        zs = range(self.states)
        xs = range(self.alphabet.size)
        if self.has_side:
            return itertools.product(zs, xs, range(self.side_alphabet.size))
        return itertools.product(zs, xs)

    def step(self, z: int, a: int, u: int | None = None) -> tuple[str, int]:
        key = (z, a) if u is None else (z, a, u)
        return self.output[key], self.next_state[key]


@dataclass(frozen=True)
class EncoderRun:
    states: tuple[int, ...]      # z_1 .. z_{n+1}
    outputs: tuple[str, ...]     # y_1 .. y_n

    @property
    def lengths(self) -> list[int]:
        return [len(y) for y in self.outputs]

    @property
    def total(self) -> int:
        return sum(len(y) for y in self.outputs)

    @property
    def bits(self) -> str:
        return "".join(self.outputs)


def run(enc: EncoderSpec, x: SymbolSequence | tuple, z1: int = 0,
        u: SymbolSequence | tuple | None = None) -> EncoderRun:
    if not 0 <= z1 < enc.states:
        raise EncoderSpecError(f"initial state {z1} out of range")
    xs = tuple(x)
    if enc.has_side:
        if u is None:
            raise SequenceError("encoder needs a side-information sequence")
        us = tuple(u)
        if len(us) != len(xs):
            raise SequenceError("side sequence length differs from input length")
    elif u is not None:
        raise SequenceError("encoder has no side alphabet but a side sequence was given")
    out, nxt = enc.output, enc.next_state
    z = z1
    states = [z]
    outputs = []
    if enc.has_side:
        for a, b in zip(xs, us):
            outputs.append(out[z, a, b])
            z = nxt[z, a, b]
            states.append(z)
    else:
        for a in xs:
            outputs.append(out[z, a])
            z = nxt[z, a]
            states.append(z)
    return EncoderRun(tuple(states), tuple(outputs))


def block_lengths(enc: EncoderSpec, x, ell: int, z1: int = 0, u=None) -> list[int]:
    """Total output length on each consecutive ``ell``-block of a single run."""
    lens = run(enc, x, z1, u).lengths
    return [sum(lens[i:i + ell]) for i in range(0, len(lens), ell)]


def phrase_lengths(enc: EncoderSpec, x, boundaries, z1: int = 0, u=None) -> list[int]:
    """Total output length on each phrase of a parsing, from a single run."""
    lens = run(enc, x, z1, u).lengths
    out, start = [], 0
    for b in boundaries:
        out.append(sum(lens[start:b]))
        start = b
    return out


def min_length_over_states(enc: EncoderSpec, a) -> int:
    if enc.has_side:
        raise EncoderSpecError("min_length_over_states needs an encoder without side input")
    return min(run(enc, a, z).total for z in range(enc.states))


@dataclass(frozen=True)
class ILResult:
    certified: bool
    depth: int
    witness: Optional[tuple] = None   # (z1, x, x') or (z1, u, x, x')

    def __bool__(self) -> bool:
        return self.certified

    def describe(self) -> str:
        if self.certified:
            return f"certified-up-to-depth({self.depth})"
        return f"refuted(witness={self.witness})"


def check_il(enc: EncoderSpec, depth: int) -> ILResult:
    """Bounded-depth information-losslessness check.

    For every initial state and every input length m <= ``depth``, two
    distinct inputs (under the same side sequence, if any) must differ in
    output string or final state. A refutation is always sound; a
    certification only covers inputs up to ``depth``.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    alpha = enc.alphabet.size
    out, nxt = enc.output, enc.next_state
    for z1 in range(enc.states):
        if enc.has_side:
            nu = enc.side_alphabet.size
            # frontier: list of (x, u, bits, state)
            frontier = [((), (), "", z1)]
            for m in range(1, depth + 1):
                seen = {}
                new = []
                for xs, us, bits, z in frontier:
                    for a in range(alpha):
                        for b in range(nu):
                            y = bits + out[z, a, b]
                            z2 = nxt[z, a, b]
                            key = (us + (b,), y, z2)
                            item = (xs + (a,), us + (b,), y, z2)
                            if key in seen:
                                return ILResult(False, m, (z1, item[1], seen[key], item[0]))
                            seen[key] = item[0]
                            new.append(item)
                frontier = new
        else:
            frontier = [((), "", z1)]
            for m in range(1, depth + 1):
                seen = {}
                new = []
                for xs, bits, z in frontier:
                    for a in range(alpha):
                        y = bits + out[z, a]
                        z2 = nxt[z, a]
                        key = (y, z2)
                        if key in seen:
                            return ILResult(False, m, (z1, seen[key], xs + (a,)))
                        seen[key] = xs + (a,)
                        new.append((xs + (a,), y, z2))
                frontier = new
    return ILResult(True, depth)


def output_words(max_len: int) -> list[str]:
    """All bit strings of length <= max_len, ordered by (length, value)."""
    words = [""]
    for ln in range(1, max_len + 1):
        words.extend("".join(bits) for bits in itertools.product("01", repeat=ln))
    return words


def enumerate_small_il_encoders(s: int, alphabet: Alphabet | int, max_output_len: int,
                                depth: int = 8) -> Iterator[EncoderSpec]:
    """Yield every table-defined s-state encoder that passes ``check_il``.

    Tables are enumerated lexicographically over the entries (z, a) in
    row-major order, each entry ranging over (word, next_state) with words
    ordered by (length, value).
    """
    if isinstance(alphabet, int):
        alphabet = Alphabet.of_size(alphabet)
    keys = list(itertools.product(range(s), range(alphabet.size)))
    choices = list(itertools.product(output_words(max_output_len), range(s)))
    for combo in itertools.product(choices, repeat=len(keys)):
        output = {k: w for k, (w, _) in zip(keys, combo)}
        nxt = {k: z for k, (_, z) in zip(keys, combo)}
        enc = EncoderSpec(s, alphabet, output, nxt)
        if check_il(enc, depth):
            yield enc


# ---------------------------------------------------------------------------
# stock encoders

def identity_encoder(alphabet: Alphabet | int = 2) -> EncoderSpec:
    """Single-state fixed-rate code: each symbol as a ceil(log2 alpha)-bit word."""
    if isinstance(alphabet, int):
        alphabet = Alphabet.of_size(alphabet)
    width = max(1, (alphabet.size - 1).bit_length())
    output = {(0, a): format(a, f"0{width}b") for a in range(alphabet.size)}
    return EncoderSpec(1, alphabet, output, {(0, a): 0 for a in range(alphabet.size)})


def idle_then_dump_encoder() -> EncoderSpec:
    """Binary 2-state coder that idles on a 0 and emits the pair on the next symbol.

    State 0 is clean, state 1 holds a pending 0. From state 0, a 0 is
    buffered (empty output) and a 1 is sent as ``11``; from state 1 the
    buffered pair ``0a`` is emitted and the coder returns to state 0.
    """
    output = {(0, 0): "", (0, 1): "11", (1, 0): "00", (1, 1): "01"}
    nxt = {(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 0}
    return EncoderSpec(2, Alphabet.of_size(2), output, nxt)


def constant_encoder(alphabet: Alphabet | int = 2) -> EncoderSpec:
    if isinstance(alphabet, int):
        alphabet = Alphabet.of_size(alphabet)
    keys = [(0, a) for a in range(alphabet.size)]
    return EncoderSpec(1, alphabet, {k: "" for k in keys}, {k: 0 for k in keys})


# ---------------------------------------------------------------------------
# spec file

def parse_encoder_spec(text: str) -> EncoderSpec:
    """Parse the encoder config format.

    Example::

        states: 2
        alphabet: 0 1
        # side_alphabet: a b      (optional)
        0, 0 -> , 1
        0, 1 -> 11, 0
        1, 0 -> 00, 0
        1, 1 -> 01, 0

    Each row is ``state, symbol[, side] -> bits, next_state`` with ``bits``
    possibly empty. Symbols are alphabet labels.
    """
    states = None
    alphabet = side = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            rows.append((lineno, line))
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise EncoderSpecError(f"line {lineno}: cannot parse {raw!r}")
        key = key.strip().lower()
        if key == "states":
            states = int(value)
        elif key == "alphabet":
            alphabet = Alphabet(tuple(value.split()))
        elif key == "side_alphabet":
            side = Alphabet(tuple(value.split()))
        else:
            raise EncoderSpecError(f"line {lineno}: unknown field {key!r}")
    if states is None or alphabet is None:
        raise EncoderSpecError("spec needs 'states' and 'alphabet'")
    output, nxt = {}, {}
    for lineno, line in rows:
        lhs, rhs = (part.strip() for part in line.split("->", 1))
        lhs_parts = [p.strip() for p in lhs.split(",")]
        rhs_parts = [p.strip() for p in rhs.split(",")]
        if len(rhs_parts) != 2 or len(lhs_parts) != (3 if side else 2):
            raise EncoderSpecError(f"line {lineno}: malformed row {line!r}")
        try:
            key = [int(lhs_parts[0]), alphabet.index(lhs_parts[1])]
            if side:
                key.append(side.index(lhs_parts[2]))
            key = tuple(key)
            z2 = int(rhs_parts[1])
        except (ValueError, SequenceError) as exc:
            raise EncoderSpecError(f"line {lineno}: {exc}") from None
        if key in output:
            raise EncoderSpecError(f"line {lineno}: duplicate row for {key}")
        output[key] = rhs_parts[0]
        nxt[key] = z2
    return EncoderSpec(states, alphabet, output, nxt, side)


def load_encoder_spec(path) -> EncoderSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_encoder_spec(fh.read())


def format_encoder_spec(enc: EncoderSpec) -> str:
    lines = [f"states: {enc.states}", "alphabet: " + " ".join(enc.alphabet.labels)]
    if enc.has_side:
        lines.append("side_alphabet: " + " ".join(enc.side_alphabet.labels))
    for key in sorted(enc.output):
        lhs = [str(key[0]), enc.alphabet.labels[key[1]]]
        if enc.has_side:
            lhs.append(enc.side_alphabet.labels[key[2]])
        lines.append(f"{', '.join(lhs)} -> {enc.output[key]}, {enc.next_state[key]}")
    return "\n".join(lines) + "\n"
