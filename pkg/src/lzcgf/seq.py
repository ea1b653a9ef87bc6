"""Alphabets, symbol sequences, parsings and phrase dictionaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class SequenceError(ValueError):
    """Raised for malformed sequences or inputs that violate a precondition."""


class UnknownSymbolError(SequenceError):
    pass


@dataclass(frozen=True)
class Alphabet:
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) < 2:
            raise SequenceError("alphabet needs at least 2 symbols")
        if len(set(self.labels)) != len(self.labels):
            raise SequenceError("alphabet labels must be distinct")

    @classmethod
    def of_size(cls, size: int) -> "Alphabet":
        """Digits ``0..size-1`` as labels (the usual toy alphabet)."""
        return cls(tuple(str(i) for i in range(size)))

    @classmethod
    def from_file(cls, path) -> "Alphabet":
        with open(path, encoding="utf-8") as fh:
            labels = [line.rstrip("\n") for line in fh]
        return cls(tuple(lab for lab in labels if lab != ""))

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, token: str) -> int:
        try:
            return self._lookup[token]
        except KeyError:
            raise UnknownSymbolError(f"symbol {token!r} not in alphabet") from None

    @property
    def _lookup(self) -> dict[str, int]:
        # cached lazily on the frozen instance
        try:
            return self.__dict__["_lookup_cache"]
        except KeyError:
            table = {lab: i for i, lab in enumerate(self.labels)}
            object.__setattr__(self, "_lookup_cache", table)
            return table

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class SymbolSequence:
    """A finite sequence of symbol indices over a declared alphabet."""

    alphabet: Alphabet
    symbols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        a = self.alphabet.size
        for i, s in enumerate(self.symbols):
            if not 0 <= s < a:
                raise UnknownSymbolError(f"symbol index {s} at position {i} outside alphabet of size {a}")

    @classmethod
    def from_string(cls, text: str, alphabet: Alphabet | int = 2) -> "SymbolSequence":
        """Build from a string with one character per symbol, e.g. ``"010001"``."""
        if isinstance(alphabet, int):
            alphabet = Alphabet.of_size(alphabet)
        return cls(alphabet, tuple(alphabet.index(ch) for ch in text))

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def alpha(self) -> int:
        return self.alphabet.size

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return SymbolSequence(self.alphabet, self.symbols[item])
        return self.symbols[item]

    def __iter__(self):
        return iter(self.symbols)

    def to_string(self, sep: str = "") -> str:
        return sep.join(self.alphabet.labels[s] for s in self.symbols)

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class Parsing:
    """Segmentation of a sequence into phrases.

    ``boundaries`` holds the phrase end indices n_1 < ... < n_c (n_0 = 0 is
    implicit), so phrase i covers ``x[boundaries[i-1]:boundaries[i]]``.
    """

    boundaries: tuple[int, ...]
    distinct: bool = True
    last_incomplete: bool = False

    def __post_init__(self):
        object.__setattr__(self, "boundaries", tuple(int(b) for b in self.boundaries))

    @property
    def c(self) -> int:
        return len(self.boundaries)

    def spans(self) -> list[tuple[int, int]]:
        starts = (0,) + self.boundaries[:-1]
        return list(zip(starts, self.boundaries))

    def phrases(self, x: SymbolSequence | Sequence[int]) -> list[tuple[int, ...]]:
        syms = x.symbols if isinstance(x, SymbolSequence) else tuple(x)
        return [syms[a:b] for a, b in self.spans()]

    def phrase_lengths(self) -> list[int]:
        return [b - a for a, b in self.spans()]

    @classmethod
    def from_phrase_lengths(cls, lengths: Iterable[int], **kw) -> "Parsing":
        out, pos = [], 0
        for ln in lengths:
            pos += ln
            out.append(pos)
        return cls(tuple(out), **kw)


@dataclass
class PhraseDictionary:
    """Phrase -> 1-based insertion index; the empty phrase is the root (index 0)."""

    index: dict[tuple[int, ...], int] = field(default_factory=lambda: {(): 0})

    def __contains__(self, phrase) -> bool:
        return tuple(phrase) in self.index

    def __len__(self) -> int:
        # excludes the root
        return len(self.index) - 1

    def add(self, phrase: tuple[int, ...]) -> int:
        phrase = tuple(phrase)
        if phrase in self.index:
            return self.index[phrase]
        idx = len(self.index)
        self.index[phrase] = idx
        return idx

    def get(self, phrase, default=None):
        return self.index.get(tuple(phrase), default)

    def is_prefix_closed(self) -> bool:
        return all(p[:-1] in self.index and self.index[p[:-1]] < i
                   for p, i in self.index.items() if p)


def load_sequence(raw: bytes, alphabet: Alphabet, format: str = "tokenized-text",
                  whitespace: bool | None = None) -> SymbolSequence:
    """Decode ``raw`` into a sequence over ``alphabet``.

    ``raw-bytes``: each byte value is a symbol index.
    ``tokenized-text``: UTF-8 text, one token per character, or whitespace
    separated tokens when ``whitespace`` is true. With ``whitespace=None``
    the text is split on whitespace only if some label is longer than one
    character.
    """
    if format == "raw-bytes":
        return SymbolSequence(alphabet, tuple(raw))
    if format != "tokenized-text":
        raise SequenceError(f"unknown input format {format!r}")
    text = raw.decode("utf-8")
    if whitespace is None:
        whitespace = any(len(lab) != 1 for lab in alphabet.labels)
    tokens = text.split() if whitespace else [ch for ch in text if not ch.isspace()]
    return SymbolSequence(alphabet, tuple(alphabet.index(t) for t in tokens))


def verify_parsing(x: SymbolSequence | Sequence[int], p: Parsing) -> tuple[bool, str]:
    """Check that ``p`` tiles ``x`` and, if flagged distinct, that phrases are distinct.

    Returns ``(True, "ok")`` or ``(False, <first violation>)``. The last
    phrase may repeat an earlier one only when ``p.last_incomplete`` is set.
    """
    syms = x.symbols if isinstance(x, SymbolSequence) else tuple(x)
    n = len(syms)
    prev = 0
    for i, b in enumerate(p.boundaries, start=1):
        if b <= prev:
            return False, f"boundary {i} ({b}) is not strictly increasing"
        prev = b
    end = p.boundaries[-1] if p.boundaries else 0
    if end != n:
        return False, f"does not tile: n_c={end} != n={n}"
    if p.distinct:
        seen: dict[tuple[int, ...], int] = {}
        phrases = p.phrases(syms)
        for i, ph in enumerate(phrases, start=1):
            if ph in seen and not (p.last_incomplete and i == len(phrases)):
                return False, f"distinctness fails at phrase {i}: repeats phrase {seen[ph]}"
            seen.setdefault(ph, i)
    return True, "ok"
