"""LZ78 incremental parsing and codec, block-restarted counts, max-distinct parsing.

Phrase i (1-based) is coded in exactly ceil(log2(alpha * i)) bits holding
``prefix_index * alpha + last_symbol`` MSB first, where ``prefix_index`` is
the dictionary index of the phrase minus its last symbol (0 = empty phrase).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Sequence

from .seq import Alphabet, Parsing, PhraseDictionary, SequenceError, SymbolSequence


class LZDecodeError(ValueError):
    pass


class TruncatedStreamError(LZDecodeError):
    pass


class IndexOutOfRangeError(LZDecodeError):
    pass


def ceil_log2(m: int) -> int:
    """Exact ceil(log2 m) for an integer m >= 1."""
    return (m - 1).bit_length()


def codeword_length(i: int, alpha: int) -> int:
    return ceil_log2(alpha * i)


@dataclass(frozen=True)
class LzCodeword:
    prefix_index: int
    last_symbol: int
    bit_length: int

    def value(self, alpha: int) -> int:
        return self.prefix_index * alpha + self.last_symbol

    def bits(self, alpha: int) -> str:
        if self.bit_length == 0:
            return ""
        return format(self.value(alpha), f"0{self.bit_length}b")


def _symbols(x) -> tuple[int, ...]:
    return x.symbols if isinstance(x, SymbolSequence) else tuple(x)


def incremental_parse(x: SymbolSequence | Sequence[int]) -> tuple[Parsing, PhraseDictionary]:
    """LZ78 parsing: each phrase is the shortest string not yet seen as a phrase."""
    syms = _symbols(x)
    if not syms:
        raise SequenceError("empty sequence")
    parsing, dictionary, _ = _parse(syms)
    return parsing, dictionary


def _parse(syms: tuple[int, ...]):
    # trie keyed by (node, symbol); node 0 is the root
    trie: dict[tuple[int, int], int] = {}
    dictionary = PhraseDictionary()
    codewords: list[tuple[int, int]] = []   # (prefix_index, last_symbol)
    boundaries = []
    node, prev_node, start = 0, 0, 0
    for pos, a in enumerate(syms):
        child = trie.get((node, a))
        if child is None:
            idx = len(trie) + 1
            trie[node, a] = idx
            dictionary.index[syms[start:pos + 1]] = idx
            codewords.append((node, a))
            boundaries.append(pos + 1)
            node, start = 0, pos + 1
        else:
            prev_node, node = node, child
    last_incomplete = start < len(syms)
    if last_incomplete:
        # the tail is already a phrase; code it through its own prefix
        codewords.append((prev_node, syms[-1]))
        boundaries.append(len(syms))
    parsing = Parsing(tuple(boundaries), distinct=True, last_incomplete=last_incomplete)
    return parsing, dictionary, codewords


def incremental_phrase_count(x) -> int:
    return incremental_parse(x)[0].c


def lz_codewords(x: SymbolSequence | Sequence[int], alpha: int | None = None) -> list[LzCodeword]:
    syms = _symbols(x)
    if alpha is None:
        if not isinstance(x, SymbolSequence):
            raise ValueError("alpha is required for a bare symbol list")
        alpha = x.alpha
    if not syms:
        raise SequenceError("empty sequence")
    _, _, pairs = _parse(syms)
    return [LzCodeword(p, a, codeword_length(i, alpha)) for i, (p, a) in enumerate(pairs, start=1)]


def lz_encode(x: SymbolSequence | Sequence[int], alpha: int | None = None) -> tuple[str, list[int]]:
    """Encode ``x``; returns the bit string and the per-phrase code lengths."""
    if alpha is None:
        alpha = x.alpha
    cws = lz_codewords(x, alpha)
    return "".join(cw.bits(alpha) for cw in cws), [cw.bit_length for cw in cws]


def lz_phrase_lengths(c: int, alpha: int) -> list[int]:
    return [codeword_length(i, alpha) for i in range(1, c + 1)]


def lz_decode(bits: str, alpha: int, n: int) -> tuple[int, ...]:
    """Invert ``lz_encode``; the decoder regrows the dictionary to know each width."""
    phrases: list[tuple[int, ...]] = [()]
    out: list[int] = []
    pos, i = 0, 1
    while len(out) < n:
        width = codeword_length(i, alpha)
        if pos + width > len(bits):
            raise TruncatedStreamError(f"stream ends inside codeword {i}")
        value = int(bits[pos:pos + width], 2) if width else 0
        pos += width
        prefix, sym = divmod(value, alpha)
        if prefix >= i:
            raise IndexOutOfRangeError(f"codeword {i} refers to phrase {prefix}")
        phrase = phrases[prefix] + (sym,)
        if len(out) + len(phrase) > n:
            raise LZDecodeError(f"codeword {i} overruns the declared length {n}")
        phrases.append(phrase)
        out.extend(phrase)
        i += 1
    return tuple(out)


# compressed stream: alpha (u16 BE), n (u64 BE), codewords, zero padding
_HEADER = struct.Struct(">HQ")


def bits_to_bytes(bits: str) -> bytes:
    if not bits:
        return b""
    pad = (-len(bits)) % 8
    return int(bits + "0" * pad, 2).to_bytes((len(bits) + pad) // 8, "big")


def bytes_to_bits(data: bytes) -> str:
    if not data:
        return ""
    return format(int.from_bytes(data, "big"), f"0{8 * len(data)}b")


def compress(x: SymbolSequence) -> bytes:
    bits = lz_encode(x)[0] if x.n else ""
    return _HEADER.pack(x.alpha, x.n) + bits_to_bytes(bits)


def decompress(data: bytes, alphabet: Alphabet | None = None) -> SymbolSequence:
    if len(data) < _HEADER.size:
        raise TruncatedStreamError("missing header")
    alpha, n = _HEADER.unpack_from(data)
    if alphabet is None:
        alphabet = Alphabet.of_size(alpha)
    elif alphabet.size != alpha:
        raise LZDecodeError(f"stream alphabet size {alpha} != {alphabet.size}")
    syms = lz_decode(bytes_to_bits(data[_HEADER.size:]), alpha, n)
    return SymbolSequence(alphabet, syms)


# ---------------------------------------------------------------------------
# block-restarted parsing

@dataclass(frozen=True)
class BlockPhraseCounts:
    ell: int
    counts: tuple[int, ...]
    method: str   # "incremental" or "max-distinct"

    @property
    def n(self) -> int:
        return self.ell * len(self.counts)


def block_restarted_counts(x: SymbolSequence | Sequence[int], ell: int,
                           method: str = "incremental") -> BlockPhraseCounts:
    """Phrase count of each non-overlapping ``ell``-block, parsed from scratch."""
    syms = _symbols(x)
    if ell < 1 or len(syms) % ell:
        raise SequenceError(f"block length {ell} does not divide n={len(syms)}")
    if method == "incremental":
        count = incremental_phrase_count
    elif method == "max-distinct":
        def count(block):
            return max_distinct_parse(block).c
    else:
        raise ValueError(f"unknown method {method!r}")
    blocks = [syms[i:i + ell] for i in range(0, len(syms), ell)]
    return BlockPhraseCounts(ell, tuple(count(b) for b in blocks), method)


# ---------------------------------------------------------------------------
# maximum number of distinct phrases

BRUTE_FORCE_LIMIT = 20


def _min_length_for(k: int, alpha: int) -> int:
    """Smallest total length of k distinct nonempty strings over alpha symbols."""
    total, ln, avail = 0, 1, alpha
    while k > 0:
        take = min(k, avail)
        total += take * ln
        k -= take
        ln += 1
        avail *= alpha
    return total


def brute_force_max_distinct(syms: Sequence[int], alpha: int | None = None) -> tuple[int, ...]:
    """Boundaries of a parsing with the most phrases, all distinct except possibly the last.

    Exhaustive depth-first search over boundary sets with an admissible
    length-based cutoff.
    """
    syms = tuple(syms)
    n = len(syms)
    if n == 0:
        return ()
    if alpha is None:
        alpha = max(2, max(syms) + 1)
    # max_more[r]: the most distinct phrases that can fit in r symbols
    max_more = [0] * (n + 1)
    k = 0
    for r in range(n + 1):
        while _min_length_for(k + 1, alpha) <= r:
            k += 1
        max_more[r] = k
    best: list[tuple[int, ...]] = [(n,)]
    used: set[tuple[int, ...]] = set()
    path: list[int] = []

    def search(pos: int):
        if pos == n:
            if len(path) > len(best[0]):
                best[0] = tuple(path)
            return
        # +1 for the exempt last phrase
        if len(path) + max_more[n - pos] + 1 <= len(best[0]):
            return
        for end in range(pos + 1, n + 1):
            ph = syms[pos:end]
            if ph in used:
                if end == n:
                    path.append(end)
                    search(n)
                    path.pop()
                continue
            used.add(ph)
            path.append(end)
            search(end)
            path.pop()
            used.discard(ph)

    search(0)
    return best[0]


def max_distinct_parse(x: SymbolSequence | Sequence[int], mode: str = "auto",
                       limit: int = BRUTE_FORCE_LIMIT) -> Parsing:
    """Parsing into distinct phrases (last one exempt) with as many phrases as found.

    ``mode="brute"`` is exact and limited to n <= ``limit``; ``mode="greedy"``
    is the incremental (shortest-unseen) parsing; ``"auto"`` picks brute
    force when allowed.
    """
    syms = _symbols(x)
    alpha = x.alpha if isinstance(x, SymbolSequence) else None
    if mode == "auto":
        mode = "brute" if len(syms) <= limit else "greedy"
    if not syms:
        return Parsing((), distinct=True)
    if mode == "greedy":
        return incremental_parse(syms)[0]
    if mode != "brute":
        raise ValueError(f"unknown mode {mode!r}")
    if len(syms) > limit:
        raise ValueError(f"brute force limited to n <= {limit}")
    bounds = brute_force_max_distinct(syms, alpha)
    starts = (0,) + bounds[:-1]
    phrases = [syms[a:b] for a, b in zip(starts, bounds)]
    return Parsing(bounds, distinct=True, last_incomplete=phrases[-1] in phrases[:-1])
