"""Paths traced by words in the Cayley graph and their synchronous distance.

The path of a word starts at the identity, moves one generator per time step,
and stays at its endpoint for good once the word is exhausted.  Distances are
evaluated at integer times only; all constants in this package refer to that
convention.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .alphabet import GeneratorAlphabet
from .errors import GroupError
from .groups import Element, GroupBackend


@dataclass(frozen=True)
class HatPath:
    """Unit-speed path of a word: the sequence of its prefix images."""

    word: str
    backend: GroupBackend
    points: tuple[Element, ...] = field(compare=False)

    def __len__(self) -> int:
        return len(self.word)

    def point_at(self, t: int) -> Element:
        """Position at integer time t; constant at the endpoint beyond the end."""
        if t < 0:
            raise GroupError("time must be non-negative")
        return self.points[min(t, len(self.points) - 1)]

    def endpoint(self) -> Element:
        return self.points[-1]


def path_of(word: str, backend: GroupBackend) -> HatPath:
    """Hat path of a word; its points are the images of all prefixes."""
    backend.alphabet.validate_word(word)
    points = [backend.identity()]
    for ch in word:
        points.append(backend.multiply(points[-1], backend.image(ch)))
    return HatPath(word, backend, tuple(points))


def reverse_path_word(word: str, alphabet: GeneratorAlphabet) -> str:
    """The word tracing the reversed path: reverse and invert the letters."""
    return alphabet.reverse_invert_word(word)


def distance_profile(p: HatPath, q: HatPath) -> list[int]:
    """Pointwise word-metric distances at integer times 0..max(len(p),len(q))."""
    if p.backend != q.backend:
        raise GroupError("paths live over different backends")
    metric = p.backend.word_metric
    horizon = max(len(p.points), len(q.points))
    return [metric(p.point_at(t), q.point_at(t)) for t in range(horizon)]


def synchronous_distance(p: HatPath, q: HatPath) -> int:
    """Maximum over integer times of the pointwise distance of the two paths."""
    return max(distance_profile(p, q))


def synchronous_distance_at(p: HatPath, q: HatPath) -> tuple[int, int]:
    """Synchronous distance together with the earliest time attaining it."""
    profile = distance_profile(p, q)
    d = max(profile)
    return d, profile.index(d)
