"""Joint incremental parsing of (x, u) pairs and the per-context LZ coder."""

from __future__ import annotations

from dataclasses import dataclass

from .cgf import LengthProfile
from .lz78 import ceil_log2, codeword_length, incremental_parse
from .seq import Parsing, SequenceError, SymbolSequence


@dataclass(frozen=True)
class JointParsing:
    parsing: Parsing
    u_phrases: tuple[tuple[int, ...], ...]   # u(1), u(2), ... in order of first appearance
    contexts: tuple[int, ...]                # k(i), 0-based index into u_phrases
    counts: tuple[int, ...]                  # c_k

    @property
    def c(self) -> int:
        return self.parsing.c

    @property
    def c_u(self) -> int:
        return len(self.u_phrases)


def _syms(x):
    return x.symbols if isinstance(x, SymbolSequence) else tuple(x)


def joint_incremental_parse(x, u) -> JointParsing:
    """Incremental parsing over the product alphabet, then grouping by u-phrase."""
    xs, us = _syms(x), _syms(u)
    if len(xs) != len(us):
        raise SequenceError(f"length mismatch: |x|={len(xs)}, |u|={len(us)}")
    if not xs:
        raise SequenceError("empty sequence")
    parsing, _ = incremental_parse(list(zip(xs, us)))
    u_index: dict[tuple[int, ...], int] = {}
    contexts = []
    counts: list[int] = []
    for a, b in parsing.spans():
        uw = us[a:b]
        k = u_index.get(uw)
        if k is None:
            k = u_index[uw] = len(counts)
            counts.append(0)
        counts[k] += 1
        contexts.append(k)
    return JointParsing(parsing, tuple(u_index), tuple(contexts), tuple(counts))


def conditional_lz_lengths(jp: JointParsing, alpha: int) -> LengthProfile:
    """The j-th phrase seen in a context costs ceil(log2(alpha * j)) bits."""
    seen = [0] * len(jp.counts)
    lengths = []
    for k in jp.contexts:
        seen[k] += 1
        lengths.append(codeword_length(seen[k], alpha))
    return LengthProfile(tuple(lengths), "phrase", source="conditional-lz", contexts=jp.contexts)


def per_context_lengths(jp: JointParsing, alpha: int) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in jp.counts]
    for k, ln in zip(jp.contexts, conditional_lz_lengths(jp, alpha).lengths):
        out[k].append(ln)
    return out


# ---------------------------------------------------------------------------
# demonstration codec with an explicit boundary side channel
#
# Payload for the j-th phrase of context k: ceil(log2(alpha*j)) bits holding
# r*alpha + last_symbol, where r < j indexes the x-prefixes already used in
# context k; r equal to that list's length means "new prefix", whose source
# (the global index of the pair phrase it equals, 0 = empty) goes to the
# side channel together with the phrase boundaries.

@dataclass(frozen=True)
class SideChannel:
    boundaries: tuple[int, ...]
    new_prefix_refs: tuple[int, ...]

    def bit_cost(self, n: int) -> int:
        width = ceil_log2(n + 1)
        refs = sum(ceil_log2(i + 1) for i in range(len(self.new_prefix_refs)))
        return width * len(self.boundaries) + refs


def conditional_lz_encode(x, u, alpha: int) -> tuple[str, list[int], SideChannel]:
    xs, us = _syms(x), _syms(u)
    jp = joint_incremental_parse(xs, us)
    spans = jp.parsing.spans()
    # global index (1-based) of each pair phrase, first occurrence
    pair_index: dict[tuple, int] = {((), ()): 0}
    prefixes: list[list[tuple[int, ...]]] = [[] for _ in jp.counts]
    seen = [0] * len(jp.counts)
    bits, lengths, refs = [], [], []
    for i, ((a, b), k) in enumerate(zip(spans, jp.contexts), start=1):
        xw, uw = xs[a:b], us[a:b]
        seen[k] += 1
        width = codeword_length(seen[k], alpha)
        prefix = xw[:-1]
        local = prefixes[k]
        if prefix in local:
            r = local.index(prefix)
        else:
            r = len(local)
            local.append(prefix)
            refs.append(pair_index[prefix, uw[:-1]])
        value = r * alpha + xw[-1]
        bits.append(format(value, f"0{width}b"))
        lengths.append(width)
        pair_index.setdefault((xw, uw), i)
    return "".join(bits), lengths, SideChannel(jp.parsing.boundaries, tuple(refs))


def conditional_lz_decode(bits: str, u, alpha: int, side: SideChannel) -> tuple[int, ...]:
    us = _syms(u)
    if side.boundaries and side.boundaries[-1] != len(us):
        raise SequenceError("side channel does not tile the side sequence")
    u_index: dict[tuple[int, ...], int] = {}
    prefixes: list[list[tuple[int, ...]]] = []
    seen: list[int] = []
    decoded: list[tuple[int, ...]] = [()]
    refs = iter(side.new_prefix_refs)
    out: list[int] = []
    pos, start = 0, 0
    for end in side.boundaries:
        uw = us[start:end]
        k = u_index.get(uw)
        if k is None:
            k = u_index[uw] = len(seen)
            seen.append(0)
            prefixes.append([])
        seen[k] += 1
        width = codeword_length(seen[k], alpha)
        if pos + width > len(bits):
            raise SequenceError("payload truncated")
        r, sym = divmod(int(bits[pos:pos + width], 2), alpha)
        pos += width
        local = prefixes[k]
        if r < len(local):
            prefix = local[r]
        elif r == len(local):
            prefix = decoded[next(refs)]
            local.append(prefix)
        else:
            raise SequenceError(f"prefix reference {r} out of range")
        xw = prefix + (sym,)
        if len(xw) != end - start:
            raise SequenceError("decoded phrase length disagrees with the side channel")
        decoded.append(xw)
        out.extend(xw)
        start = end
    return tuple(out)


def conditional_lz_roundtrip(x, u, alpha: int) -> tuple[bool, dict]:
    xs = _syms(x)
    bits, lengths, side = conditional_lz_encode(x, u, alpha)
    try:
        back = conditional_lz_decode(bits, u, alpha, side)
    except SequenceError as exc:
        return False, {"error": str(exc)}
    info = {"payload_bits": len(bits), "lengths": lengths, "side_channel_bits": side.bit_cost(len(xs))}
    return back == xs, info

