"""Group backends: word evaluation, word metric, and metric balls.

Three backends share one interface: free abelian groups (elements are integer
vectors), free groups (elements are reduced words stored as tuples of signed
generator indices), and finite groups given by a multiplication table
(elements are row indices).  Elements are plain hashable Python values; the
backend object holds the operations.
"""
from __future__ import annotations

import itertools
from collections import deque
from typing import Iterator, Union

from .alphabet import GeneratorAlphabet
from .errors import GroupError, UnreachableError

Element = Union[tuple[int, ...], int]

# Safety cap for breadth-first metric searches on infinite groups with
# non-standard generating images.  Standard images use closed forms instead.
_BFS_RADIUS_CAP = 64


def free_reduce(word: str, alphabet: GeneratorAlphabet) -> str:
    """Cancel adjacent mutually inverse letters until none remain."""
    alphabet.validate_word(word)
    out: list[str] = []
    for ch in word:
        if out and alphabet.inverse(out[-1]) == ch:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


class Ball:
    """All group elements within a given word-metric radius of the center.

    Elements are ordered lexicographically by their canonical serialization,
    which fixes the deterministic enumeration order used everywhere.
    """

    def __init__(self, center: Element, radius: int, elements: list[Element],
                 backend: "GroupBackend"):
        self.center = center
        self.radius = radius
        self.elements: tuple[Element, ...] = tuple(
            sorted(elements, key=backend.canon))
        self._index = frozenset(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self._index

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Ball(radius={self.radius}, size={len(self)})"


class GroupBackend:
    """Common interface of the group backends.

    ``images`` maps every alphabet symbol to a group element and must respect
    the alphabet's inversion pairing.  All operations are exact; no floating
    point is involved anywhere.
    """

    kind = "abstract"

    def __init__(self, alphabet: GeneratorAlphabet, images: dict[str, Element]):
        if set(images) != set(alphabet.symbols):
            raise GroupError("generator images must cover the alphabet exactly")
        self.alphabet = alphabet
        self.images = dict(images)
        self._ball_cache: dict[int, Ball] = {}
        for s in alphabet:
            got = self.images[alphabet.inverse(s)]
            want = self.inverse(self.images[s])
            if got != want:
                raise GroupError(
                    f"image of {alphabet.inverse(s)!r} is not the inverse of the image of {s!r}")

    # -- group operations ---------------------------------------------------

    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inverse(self, g: Element) -> Element:
        raise NotImplementedError

    def canon(self, g: Element) -> str:
        """Canonical serialization; used for ordering, hashing buckets, and logs."""
        raise NotImplementedError

    # -- words --------------------------------------------------------------

    def image(self, letter: str) -> Element:
        """Image of a single letter; the empty string denotes the identity."""
        if letter == "":
            return self.identity()
        try:
            return self.images[letter]
        except KeyError:
            raise GroupError(f"no image for symbol {letter!r}") from None

    def evaluate(self, word: str) -> Element:
        """Image of a word under the monoid homomorphism extending ``images``."""
        g = self.identity()
        for ch in word:
            g = self.multiply(g, self.image(ch))
        return g

    # -- metric -------------------------------------------------------------

    def word_metric(self, g: Element, h: Element) -> int:
        """Length of a shortest word over the generating images sending g to h."""
        return self._metric_from_identity(self.multiply(self.inverse(g), h))

    def norm(self, g: Element) -> int:
        return self._metric_from_identity(g)

    def _metric_from_identity(self, g: Element) -> int:
        raise NotImplementedError

    def ball(self, radius: int) -> Ball:
        """Metric ball of the given radius centered at the identity."""
        if radius < 0:
            raise GroupError("radius must be non-negative")
        if radius not in self._ball_cache:
            self._ball_cache[radius] = Ball(
                self.identity(), radius, self._ball_elements(radius), self)
        return self._ball_cache[radius]

    def _ball_elements(self, radius: int) -> list[Element]:
        raise NotImplementedError

    # -- BFS fallbacks for non-standard generating images --------------------

    def _bfs_from_identity(self, radius: int) -> dict[Element, int]:
        dist = {self.identity(): 0}
        frontier = deque([self.identity()])
        while frontier:
            g = frontier.popleft()
            d = dist[g]
            if d == radius:
                continue
            for s in self.alphabet:
                h = self.multiply(g, self.images[s])
                if h not in dist:
                    dist[h] = d + 1
                    frontier.append(h)
        return dist

    def _bfs_metric(self, g: Element) -> int:
        dist = self._bfs_from_identity(_BFS_RADIUS_CAP)
        if g not in dist:
            raise UnreachableError(
                f"element {self.canon(g)} not reachable within radius {_BFS_RADIUS_CAP}")
        return dist[g]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupBackend):
            return NotImplemented
        return (self.kind == other.kind and self.alphabet == other.alphabet
                and self.images == other.images and self._core() == other._core())

    def __hash__(self) -> int:
        return hash((self.kind, self.alphabet, tuple(sorted(self.images.items())),
                     self._core()))

    def _core(self) -> object:
        return None


class FreeAbelianBackend(GroupBackend):
    """Free abelian group of finite rank; elements are integer vectors."""

    kind = "free_abelian"

    def __init__(self, rank: int, alphabet: GeneratorAlphabet,
                 images: dict[str, Element]):
        if rank < 1:
            raise GroupError("rank must be positive")
        self.rank = rank
        for s, v in images.items():
            if not (isinstance(v, tuple) and len(v) == rank
                    and all(isinstance(c, int) for c in v)):
                raise GroupError(f"image of {s!r} must be an integer vector of length {rank}")
        super().__init__(alphabet, images)
        basis = {tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)}
        basis |= {tuple(-c for c in v) for v in basis}
        # The L1 closed form for the metric is only valid when the images are
        # exactly the signed standard basis vectors.
        self._standard = set(self.images.values()) == basis

    def identity(self) -> Element:
        return (0,) * self.rank

    def multiply(self, g: Element, h: Element) -> Element:
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g: Element) -> Element:
        return tuple(-a for a in g)

    def canon(self, g: Element) -> str:
        return "(" + ",".join(str(c) for c in g) + ")"

    def _metric_from_identity(self, g: Element) -> int:
        if self._standard:
            return sum(abs(c) for c in g)
        return self._bfs_metric(g)

    def _ball_elements(self, radius: int) -> list[Element]:
        if not self._standard:
            dist = self._bfs_from_identity(radius)
            return list(dist)
        ranges = [range(-radius, radius + 1)] * self.rank
        return [v for v in itertools.product(*ranges)
                if sum(abs(c) for c in v) <= radius]

    def _core(self) -> object:
        return self.rank


class FreeGroupBackend(GroupBackend):
    """Free group of finite rank; elements are reduced tuples of signed indices.

    Generator i (1-based) is stored as +i and its inverse as -i.  The
    canonical serialization spells elements with the alphabet symbols whose
    images are the corresponding one-letter elements, falling back to ``g1``,
    ``G1``, ... when no such symbol exists.
    """

    kind = "free_group"

    def __init__(self, rank: int, alphabet: GeneratorAlphabet,
                 images: dict[str, Element]):
        if rank < 1:
            raise GroupError("rank must be positive")
        self.rank = rank
        for s, v in images.items():
            if not (isinstance(v, tuple) and all(
                    isinstance(c, int) and c != 0 and abs(c) <= rank for c in v)):
                raise GroupError(f"image of {s!r} must be a tuple of signed indices in 1..{rank}")
            if v != self._reduce(v):
                raise GroupError(f"image of {s!r} is not freely reduced")
        super().__init__(alphabet, images)
        self._names: dict[int, str] = {}
        for i in range(1, rank + 1):
            for signed, fallback in ((i, f"g{i}"), (-i, f"G{i}")):
                name = fallback
                for s in alphabet:
                    if self.images[s] == (signed,):
                        name = s
                        break
                self._names[signed] = name
        letters = {(i,) for i in range(1, rank + 1)}
        letters |= {(-i,) for i in range(1, rank + 1)}
        self._standard = set(self.images.values()) == letters

    @staticmethod
    def _reduce(seq: tuple[int, ...]) -> tuple[int, ...]:
        out: list[int] = []
        for c in seq:
            if out and out[-1] == -c:
                out.pop()
            else:
                out.append(c)
        return tuple(out)

    def identity(self) -> Element:
        return ()

    def multiply(self, g: Element, h: Element) -> Element:
        i = len(g)
        j = 0
        while i > 0 and j < len(h) and g[i - 1] == -h[j]:
            i -= 1
            j += 1
        return g[:i] + h[j:]

    def inverse(self, g: Element) -> Element:
        return tuple(-c for c in reversed(g))

    def canon(self, g: Element) -> str:
        return "".join(self._names[c] for c in g)

    def _metric_from_identity(self, g: Element) -> int:
        if self._standard:
            return len(g)
        return self._bfs_metric(g)

    def _ball_elements(self, radius: int) -> list[Element]:
        if not self._standard:
            return list(self._bfs_from_identity(radius))
        out: list[Element] = [()]
        frontier: list[tuple[int, ...]] = [()]
        for _ in range(radius):
            nxt: list[tuple[int, ...]] = []
            for g in frontier:
                for c in range(1, self.rank + 1):
                    for signed in (c, -c):
                        if g and g[-1] == -signed:
                            continue
                        nxt.append(g + (signed,))
            out.extend(nxt)
            frontier = nxt
        return out

    def _core(self) -> object:
        return self.rank


class FiniteTableBackend(GroupBackend):
    """Finite group presented by a full multiplication table.

    The table is validated eagerly: identity behavior, existence of inverses,
    and associativity (cubic in the order, fine for the intended sizes).
    """

    kind = "finite_table"

    def __init__(self, table: list[list[int]], identity: int,
                 alphabet: GeneratorAlphabet, images: dict[str, Element]):
        n = len(table)
        if n == 0:
            raise GroupError("multiplication table must be non-empty")
        for row in table:
            if len(row) != n or any(not isinstance(e, int) or not 0 <= e < n for e in row):
                raise GroupError("multiplication table must be square over element indices")
        if not 0 <= identity < n:
            raise GroupError("identity index out of range")
        self.table = tuple(tuple(row) for row in table)
        self.order = n
        self._identity = identity
        for g in range(n):
            if self.table[identity][g] != g or self.table[g][identity] != g:
                raise GroupError(f"index {identity} is not a two-sided identity")
        self._inv = [-1] * n
        for g in range(n):
            for h in range(n):
                if self.table[g][h] == identity and self.table[h][g] == identity:
                    self._inv[g] = h
                    break
            if self._inv[g] < 0:
                raise GroupError(f"element {g} has no inverse")
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise GroupError(f"table is not associative at ({a},{b},{c})")
        for s, v in images.items():
            if not isinstance(v, int) or not 0 <= v < n:
                raise GroupError(f"image of {s!r} must be an element index")
        super().__init__(alphabet, images)
        self._dist: dict[Element, int] | None = None

    def identity(self) -> Element:
        return self._identity

    def multiply(self, g: Element, h: Element) -> Element:
        return self.table[g][h]

    def inverse(self, g: Element) -> Element:
        return self._inv[g]

    def canon(self, g: Element) -> str:
        return str(g)

    def _distances(self) -> dict[Element, int]:
        if self._dist is None:
            self._dist = self._bfs_from_identity(self.order)
        return self._dist

    def _metric_from_identity(self, g: Element) -> int:
        dist = self._distances()
        if g not in dist:
            raise UnreachableError(
                f"element {g} not generated by the images of the alphabet")
        return dist[g]

    def _ball_elements(self, radius: int) -> list[Element]:
        return [g for g, d in self._distances().items() if d <= radius]

    def _core(self) -> object:
        return (self.table, self._identity)


def standard_free_abelian(pairs: list[tuple[str, str]]) -> FreeAbelianBackend:
    """Rank-r free abelian backend with the i-th pair mapping to ±e_i."""
    alphabet = GeneratorAlphabet.from_pairs(pairs)
    rank = len(pairs)
    images: dict[str, Element] = {}
    for i, (a, b) in enumerate(pairs):
        e = tuple(1 if j == i else 0 for j in range(rank))
        images[a] = e
        images[b] = tuple(-c for c in e)
    return FreeAbelianBackend(rank, alphabet, images)


def standard_free_group(pairs: list[tuple[str, str]]) -> FreeGroupBackend:
    """Rank-r free group backend with the i-th pair mapping to the i-th letter."""
    alphabet = GeneratorAlphabet.from_pairs(pairs)
    images: dict[str, Element] = {}
    for i, (a, b) in enumerate(pairs):
        images[a] = (i + 1,)
        images[b] = (-(i + 1),)
    return FreeGroupBackend(len(pairs), alphabet, images)
