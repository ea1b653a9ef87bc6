"""Synthetic test sequences from a seeded ``random.Random`` generator."""

from __future__ import annotations

import random

from .seq import Alphabet, SequenceError, SymbolSequence

KINDS = ("uniform-random", "markov", "periodic", "constant")


def generate(kind: str, n: int, alpha: int = 2, seed: int = 0, pattern: str = "01",
             stay: float = 0.9) -> SymbolSequence:
    """``markov`` repeats the current symbol with probability ``stay`` and
    otherwise jumps to a uniformly chosen different symbol."""
    if n < 0:
        raise SequenceError("n must be nonnegative")
    alphabet = Alphabet.of_size(alpha)
    rng = random.Random(seed)
    if kind == "uniform-random":
        syms = [rng.randrange(alpha) for _ in range(n)]
    elif kind == "markov":
        if not 0 <= stay <= 1:
            raise SequenceError("stay probability must lie in [0, 1]")
        syms, cur = [], rng.randrange(alpha)
        for _ in range(n):
            syms.append(cur)
            if rng.random() >= stay:
                cur = (cur + rng.randrange(1, alpha)) % alpha
    elif kind == "periodic":
        period = [alphabet.index(ch) for ch in pattern]
        if not period:
            raise SequenceError("empty period pattern")
        syms = [period[i % len(period)] for i in range(n)]
    elif kind == "constant":
        syms = [0] * n
    else:
        raise SequenceError(f"unknown kind {kind!r}; choose from {KINDS}")
    return SymbolSequence(alphabet, syms)
