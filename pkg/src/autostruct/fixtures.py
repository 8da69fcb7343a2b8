"""Built-in structures used throughout the tests and shipped as data files.

Three fixtures:

* ``z2``: the plane with the loop-tailed normal forms
  ``(x*|X*)(y*|Y*)(xyXY)*``.  Right fellow-traveling holds at 3, the
  two-sided condition at 4, and the reversed-inverted language is not
  fellow-traveling for any constant (see :func:`witness_family_z2`).
* ``z``: the line with ``(x*|X*)(xX)*``; same phenomenon one rank down.
* ``control``: the plane with the bare normal forms ``(x*|X*)(y*|Y*)``;
  the image map is finite-to-one (in fact injective), which makes it the
  well-behaved baseline for the length-difference and constant-propagation
  checks.

Exponent blocks are sign-split (``x*|X*``): a power of a single sign, so
mixed heads like ``xX...`` are intentionally not members.

The parametric families return words, not verdicts; each family's defining
identity (membership, image equality, or exact distance) is re-asserted at
construction so a stale fixture cannot silently drift.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, NamedTuple

from .checkers import Structure
from .groups import FreeAbelianBackend, standard_free_abelian
from .alphabet import GeneratorAlphabet
from .paths import path_of, synchronous_distance

FIXTURE_NAMES = ("z2", "z", "control")


@dataclass(frozen=True)
class Fixture:
    """A named structure with its measured fellow-traveler constants and the
    parametric word families that exhibit them.

    ``documented_constants`` maps a condition name to the least constant at
    which the bounded check holds; the test suite reconfirms each value (and
    that the value minus one fails) on every run.
    """

    name: str
    structure: Structure
    documented_constants: dict[str, int] = field(default_factory=dict)
    families: dict[str, Callable] = field(default_factory=dict)


@lru_cache(maxsize=None)
def fixture_z2() -> Fixture:
    backend = standard_free_abelian([("x", "X"), ("y", "Y")])
    structure = Structure.from_regex(backend, "(x*|X*)(y*|Y*)(xyXY)*",
                                     name="z2")
    return Fixture(
        name="z2",
        structure=structure,
        documented_constants={"right_ft_k": 3, "two_sided_k": 4},
        families={"inverse_pair": witness_family_z2,
                  "two_sided_slack": two_sided_family},
    )


@lru_cache(maxsize=None)
def fixture_z() -> Fixture:
    alphabet = GeneratorAlphabet.from_pairs([("x", "X")])
    backend = FreeAbelianBackend(1, alphabet, {"x": (1,), "X": (-1,)})
    structure = Structure.from_regex(backend, "(x*|X*)(xX)*", name="z")
    return Fixture(
        name="z",
        structure=structure,
        documented_constants={"right_ft_k": 2},
    )


@lru_cache(maxsize=None)
def fixture_control() -> Fixture:
    backend = standard_free_abelian([("x", "X"), ("y", "Y")])
    structure = Structure.from_regex(backend, "(x*|X*)(y*|Y*)",
                                     name="control")
    return Fixture(
        name="control",
        structure=structure,
        documented_constants={"right_ft_k": 2, "two_sided_k": 4},
        families={"two_sided_slack": two_sided_family},
    )


def fixture(name: str) -> Fixture:
    try:
        return {"z2": fixture_z2, "z": fixture_z,
                "control": fixture_control}[name]()
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}") from None


def fixture_file(name: str) -> Path:
    """Path of the shipped structure-definition file for a fixture."""
    if name not in FIXTURE_NAMES:
        raise ValueError(f"unknown fixture {name!r}")
    return Path(str(resources.files("autostruct").joinpath(f"data/{name}.json")))


def witness_family_z2(n: int) -> tuple[str, str]:
    """The pair w1 = (yxYX)^n x^n, w2 = x^n in the reversed-inverted z2
    language whose paths reach synchronous distance exactly n+1: w2 heads
    straight for the common endpoint (n, 0) while w1 first spends 4n steps
    looping at the origin, falling n+1 behind just as w2 arrives."""
    if n < 1:
        raise ValueError("the witness family needs n >= 1")
    w1 = "yxYX" * n + "x" * n
    w2 = "x" * n
    inverted = fixture_z2().structure.inverted()
    backend = inverted.backend
    assert inverted.language.member(w1) and inverted.language.member(w2)
    distance = synchronous_distance(path_of(w1, backend),
                                    path_of(w2, backend))
    assert distance == n + 1
    return w1, w2


class TwoSidedWords(NamedTuple):
    w1: str
    w2: str
    a: str
    b: str

    @property
    def left_word(self) -> str:
        return self.a + self.w1 + self.b


def two_sided_family(m: int, n: int, loops: int) -> TwoSidedWords:
    """Words exercising the two-sided condition with both slack letters in
    use: w2 = x^m y^n against w1 = x^{m+1} y^{n+1} (xyXY)^loops with a = "Y"
    prepended and b = "X" appended, so image(a w1 b) = image(w2)."""
    if m < 0 or n < 0 or loops < 0:
        raise ValueError("family parameters must be non-negative")
    words = TwoSidedWords("x" * (m + 1) + "y" * (n + 1) + "xyXY" * loops,
                          "x" * m + "y" * n, "Y", "X")
    backend = fixture_z2().structure.backend
    assert backend.evaluate(words.left_word) == backend.evaluate(words.w2)
    return words
