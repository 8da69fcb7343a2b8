"""Inverse-closed generating alphabets.

Symbols are single printable characters so that words are plain strings.
The conventional pairing maps a lowercase letter to its uppercase inverse
(``x`` and ``X``), but any involutive pairing is accepted.
"""
from __future__ import annotations

from typing import Iterable, Iterator

from .errors import AlphabetError


class GeneratorAlphabet:
    """Ordered alphabet whose symbols carry an involutive inversion map.

    The declaration order of the symbols is significant: word enumeration and
    every deterministic construction in the package iterate letters in this
    order.
    """

    def __init__(self, symbols: Iterable[str], inversion: dict[str, str]):
        self._symbols = tuple(symbols)
        if not self._symbols:
            raise AlphabetError("alphabet must not be empty")
        if len(set(self._symbols)) != len(self._symbols):
            raise AlphabetError("duplicate symbols in alphabet")
        for s in self._symbols:
            if len(s) != 1 or not s.isprintable() or s in "()|* \t\n$":
                raise AlphabetError(f"symbol {s!r} is not a single plain printable character")
        if set(inversion) != set(self._symbols):
            raise AlphabetError("inversion map must be total on the symbols")
        for s, t in inversion.items():
            if t not in inversion or inversion[t] != s:
                raise AlphabetError(f"inversion is not an involution at {s!r}")
        self._inverse = dict(inversion)
        self._index = {s: i for i, s in enumerate(self._symbols)}

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "GeneratorAlphabet":
        """Build an alphabet from (generator, inverse) pairs, declared in pair order."""
        symbols: list[str] = []
        inversion: dict[str, str] = {}
        for a, b in pairs:
            symbols.append(a)
            if b != a:
                symbols.append(b)
            inversion[a] = b
            inversion[b] = a
        return cls(symbols, inversion)

    @property
    def symbols(self) -> tuple[str, ...]:
        return self._symbols

    def inverse(self, symbol: str) -> str:
        try:
            return self._inverse[symbol]
        except KeyError:
            raise AlphabetError(f"unknown symbol {symbol!r}") from None

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise AlphabetError(f"unknown symbol {symbol!r}") from None

    def validate_word(self, word: str) -> str:
        for ch in word:
            if ch not in self._index:
                raise AlphabetError(f"word {word!r} uses unknown symbol {ch!r}")
        return word

    def reverse_invert_word(self, word: str) -> str:
        """Reverse a word and invert each letter; an involution on words."""
        self.validate_word(word)
        return "".join(self._inverse[ch] for ch in reversed(word))

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self._symbols)

    def __len__(self) -> int:
        return len(self._symbols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneratorAlphabet):
            return NotImplemented
        return self._symbols == other._symbols and self._inverse == other._inverse

    def __hash__(self) -> int:
        return hash((self._symbols, tuple(sorted(self._inverse.items()))))

    def __repr__(self) -> str:
        return f"GeneratorAlphabet({''.join(self._symbols)!r})"
