"""Two-pass Shannon block coder matched to the tilted empirical block distribution.

Each observed ell-block a gets ceil(-log2 Q(a)) bits, where
Q(a) is proportional to P(a)**(1/(1+lam)). Codewords are assigned
canonically in (length, block) order, so the count table alone lets the
decoder rebuild the code.

Stream layout (big-endian)::

    b"TSB1" | alpha u16 | ell u16 | lam_num u32 | lam_den u32 | m u64 | K u32
    K x ( ell x symbol u16 | count u64 )
    payload_bits u64 | payload bytes (zero padded)
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction

from .cgf import LengthProfile
from .empirical import BlockStats, block_stats
from .lz78 import bits_to_bytes, bytes_to_bits, ceil_log2
from .seq import Alphabet, SequenceError, SymbolSequence

MAGIC = b"TSB1"


class BlockCodeError(ValueError):
    pass


def as_fraction(lam) -> Fraction:
    if isinstance(lam, Fraction):
        return lam
    if isinstance(lam, str):
        return Fraction(lam)
    return Fraction(lam).limit_denominator(1 << 20)


@dataclass(frozen=True)
class TiltedCode:
    ell: int
    lam: Fraction
    alpha: int
    counts: dict            # observed block -> count
    tilted: dict            # block -> Q*(block)
    lengths: dict           # block -> codeword length
    codewords: dict         # block -> bit string
    header_bits: int
    worst_case_header_bits: float

    @property
    def m(self) -> int:
        return sum(self.counts.values())

    def kraft_sum(self) -> Fraction:
        return sum((Fraction(1, 2 ** v) for v in self.lengths.values()), Fraction(0))


def _shannon_lengths(neg_log_q: dict, slack: float) -> dict:
    return {b: max(0, math.ceil(v - slack)) for b, v in neg_log_q.items()}


def build_tilted_code(stats: BlockStats, lam) -> TiltedCode:
    lam = as_fraction(lam)
    if lam <= 0:
        raise BlockCodeError(f"lambda must be positive, got {lam}")
    if not stats.counts:
        raise BlockCodeError("empty block statistics")
    r = 1.0 / (1.0 + float(lam))
    m = stats.m
    logs = {b: r * (math.log2(k) - math.log2(m)) for b, k in stats.counts.items()}
    top = max(logs.values())
    log_norm = top + math.log2(math.fsum(2.0 ** (v - top) for v in logs.values()))
    neg_log_q = {b: log_norm - v for b, v in logs.items()}
    tilted = {b: 2.0 ** -v for b, v in neg_log_q.items()}
    # absorb rounding noise at exact integers, unless that breaks Kraft
    lengths = _shannon_lengths(neg_log_q, 1e-9)
    if sum(Fraction(1, 2 ** v) for v in lengths.values()) > 1:
        lengths = _shannon_lengths(neg_log_q, 0.0)
    codewords = canonical_codewords(lengths)
    k = len(stats.counts)
    sym_bits = ceil_log2(stats.alpha)
    header = k * ceil_log2(m + 1) + k * stats.ell * sym_bits
    worst = stats.alpha ** stats.ell * math.log2(m + 1)
    return TiltedCode(stats.ell, lam, stats.alpha, dict(stats.counts), tilted, lengths,
                      codewords, header, worst)


def canonical_codewords(lengths: dict) -> dict:
    """Canonical prefix code for the given lengths, assigned in (length, key) order."""
    order = sorted(lengths, key=lambda b: (lengths[b], b))
    out = {}
    code, prev = 0, 0
    for b in order:
        ln = lengths[b]
        code <<= ln - prev
        out[b] = format(code, f"0{ln}b") if ln else ""
        code += 1
        prev = ln
    return out


def _blocks(x, ell):
    syms = x.symbols if isinstance(x, SymbolSequence) else tuple(x)
    if len(syms) % ell:
        raise SequenceError(f"block length {ell} does not divide n={len(syms)}")
    return [syms[i:i + ell] for i in range(0, len(syms), ell)]


def encode_blocks(x, code: TiltedCode) -> tuple[LengthProfile, str]:
    out, lengths = [], []
    for b in _blocks(x, code.ell):
        if b not in code.codewords:
            raise BlockCodeError(f"block {b} is not in the code's support")
        out.append(code.codewords[b])
        lengths.append(code.lengths[b])
    profile = LengthProfile(tuple(lengths), "block", source=f"tilted-block(lam={code.lam})", ell=code.ell)
    return profile, "".join(out)


def decode_blocks(bits: str, code: TiltedCode, m: int) -> tuple[int, ...]:
    if len(code.codewords) == 1:
        (only,) = code.codewords
        if bits:
            raise BlockCodeError("nonempty payload for a single-block code")
        return only * m
    inverse = {w: b for b, w in code.codewords.items()}
    out: list[int] = []
    pos, decoded = 0, 0
    word = ""
    while decoded < m:
        if pos >= len(bits):
            raise BlockCodeError("payload ends inside a codeword")
        word += bits[pos]
        pos += 1
        if word in inverse:
            out.extend(inverse[word])
            word = ""
            decoded += 1
    if pos != len(bits):
        raise BlockCodeError("trailing payload bits")
    return tuple(out)


def tilted_block_compress(x: SymbolSequence, ell: int, lam) -> bytes:
    lam = as_fraction(lam)
    stats = block_stats(x, ell)
    code = build_tilted_code(stats, lam)
    _, bits = encode_blocks(x, code)
    parts = [MAGIC, struct.pack(">HHIIQI", x.alpha, ell, lam.numerator, lam.denominator,
                                stats.m, len(stats.counts))]
    for b in sorted(stats.counts):
        parts.append(struct.pack(f">{ell}HQ", *b, stats.counts[b]))
    parts.append(struct.pack(">Q", len(bits)))
    parts.append(bits_to_bytes(bits))
    return b"".join(parts)


def tilted_block_decompress(data: bytes, alphabet: Alphabet | None = None) -> SymbolSequence:
    if data[:4] != MAGIC:
        raise BlockCodeError("bad magic")
    pos = 4
    alpha, ell, num, den, m, k = struct.unpack_from(">HHIIQI", data, pos)
    pos += struct.calcsize(">HHIIQI")
    entry = struct.Struct(f">{ell}HQ")
    counts = {}
    for _ in range(k):
        *block, cnt = entry.unpack_from(data, pos)
        pos += entry.size
        counts[tuple(block)] = cnt
    (nbits,) = struct.unpack_from(">Q", data, pos)
    pos += 8
    bits = bytes_to_bits(data[pos:])[:nbits]
    code = build_tilted_code(BlockStats(ell, counts, alpha), Fraction(num, den))
    syms = decode_blocks(bits, code, m)
    if alphabet is None:
        alphabet = Alphabet.of_size(alpha)
    return SymbolSequence(alphabet, syms)
