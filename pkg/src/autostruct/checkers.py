"""Checks for the fellow-traveler conditions of automatic structures.

A structure couples a group backend with a regular language over the same
inverse-closed alphabet.  Three kinds of procedures live here:

* bounded scans over all language pairs up to a length budget, which either
  find a violating witness (always re-checkable by direct path simulation)
  or report HOLDS as bounded evidence;
* a ball-bounded certifier that explores the synchronized difference machine
  of the two paths inside a metric ball and can return an unconditional
  HOLDS certificate, an exact FAILS witness, or UNKNOWN with the boundary
  configurations that blocked the analysis;
* the arithmetic on constants: the pigeonhole length-difference bound and
  the constants it propagates to the inverse and two-sided conditions.

All searches are deterministic.  Words are enumerated shortest-first and
lexicographically in alphabet declaration order, slack letters run through
the empty letter first and then the alphabet in order, and candidate
partners are taken in enumeration order, so the first witness found is a
canonical one and repeated runs agree byte for byte.

Distance conventions (integer-time synchronous distance throughout):

* right condition: the path of ``w1·a`` against the path of ``w2``;
* two-sided condition: the path of ``a·w1·b`` against the path of ``w2``;
* length-difference condition: the path of ``a·w1`` against the path of
  ``w2`` (the slack letter is prepended and no image equality is required).
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

from .automata import FiniteAutomaton, compile_regex, reverse_invert
from .errors import CheckError, StructureError
from .finiteness import (FinitenessResult, PumpWitness, finite_to_one_analysis,
                         lp_feasible)
from .groups import Element, FreeAbelianBackend, GroupBackend
from .paths import path_of, synchronous_distance_at

# Condition labels; these appear verbatim in reports and on the CLI.
RIGHT_FT = "right-ft"
TWO_SIDED_FT = "two-sided-ft"
INVERSE_RIGHT_FT = "inverse-right-ft"
BIAUTOMATIC = "biautomatic"
FINITE_TO_ONE = "finite-to-one"
LENGTH_DIFFERENCE = "length-difference"
SURJECTIVE = "surjective"

WITNESS_CONDITIONS = (RIGHT_FT, TWO_SIDED_FT, INVERSE_RIGHT_FT)

# How many scanned words between progress callbacks.
_PROGRESS_STRIDE = 500
# Cap on boundary configurations listed in an UNKNOWN report.
_BOUNDARY_REPORT_CAP = 50
# Cap on escape/re-entry displacement queries before giving up on a
# certificate (UNKNOWN is always a sound answer).
_VIABILITY_BUDGET = 4096


class Status(enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class FTWitness:
    """A violating pair for a fellow-traveler condition.

    For the one-sided conditions the slack letter sits in ``a`` and is
    appended (the compared path is ``w1·a``); for the two-sided condition
    ``a`` is prepended and ``b`` appended.  ``distance`` is the synchronous
    distance of the two paths and ``time`` the earliest moment attaining it.
    """

    w1: str
    w2: str
    a: str = ""
    b: str = ""
    time: int = 0
    distance: int = 0

    def to_json(self) -> dict:
        return {"w1": self.w1, "a": self.a, "b": self.b, "w2": self.w2,
                "time": self.time, "distance": self.distance}


Witness = Union[FTWitness, PumpWitness]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: status, the condition and constant checked, the
    budget that bounds the claim, and a witness or certificate."""

    status: Status
    condition: str
    k: Optional[int]
    bound_used: dict
    witness: Optional[Witness] = None
    certificate: Optional[dict] = None

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    def to_json(self) -> dict:
        data = {
            "status": self.status.value,
            "condition": self.condition,
            "k": self.k,
            "bound_used": self.bound_used,
        }
        if self.witness is not None:
            if isinstance(self.witness, FTWitness):
                data["witness"] = self.witness.to_json()
            else:
                data["witness"] = _pump_witness_json(self.witness)
        if self.certificate is not None:
            data["certificate"] = self.certificate
        return data


def _pump_witness_json(pw: PumpWitness) -> dict:
    return {
        "cycles": [{"label": label, "state": state}
                   for label, state in pw.components],
        "skeleton": list(pw.skeleton),
        "samples": [pw.word(t) for t in range(3)],
    }


# -- structures and language indexes ------------------------------------------

class Structure:
    """A group backend together with a regular language over its alphabet."""

    def __init__(self, backend: GroupBackend, language: FiniteAutomaton,
                 name: str = ""):
        if language.alphabet != backend.alphabet:
            raise StructureError(
                "language and backend are over different alphabets")
        self.backend = backend
        self.alphabet = backend.alphabet
        self.language = language
        self.name = name
        self.dfa = language.trim_dfa()
        self._inverted: Optional[Structure] = None
        self._indexes: dict[int, LanguageIndex] = {}

    @classmethod
    def from_regex(cls, backend: GroupBackend, regex: str,
                   name: str = "") -> "Structure":
        return cls(backend, compile_regex(regex, backend.alphabet), name)

    def inverted(self) -> "Structure":
        """The structure on the reversed-inverted language (same backend)."""
        if self._inverted is None:
            inv = Structure(self.backend, reverse_invert(self.dfa),
                            name=f"{self.name}^-1" if self.name else "")
            inv._inverted = self
            self._inverted = inv
        return self._inverted

    def index(self, max_len: int) -> "LanguageIndex":
        if max_len < 0:
            raise CheckError("max_len must be non-negative")
        if max_len not in self._indexes:
            self._indexes[max_len] = LanguageIndex(self, max_len)
        return self._indexes[max_len]

    def __repr__(self) -> str:
        return f"Structure({self.name or self.backend.kind}, states={self.dfa.n_states})"


class LanguageIndex:
    """All language words up to a length budget, with their images and
    image-keyed buckets.  Prefix point sequences are cached lazily because
    only a small, scan-dependent subset of words is ever compared."""

    def __init__(self, structure: Structure, max_len: int):
        self.structure = structure
        self.max_len = max_len
        backend = structure.backend
        dfa = structure.dfa
        words: list[str] = []
        elems: dict[str, Element] = {}
        buckets: dict[str, list[str]] = {}
        if dfa.n_states:
            accepting = set(dfa.accepting)
            canon = backend.canon

            def admit(word: str, elem: Element) -> None:
                words.append(word)
                elems[word] = elem
                buckets.setdefault(canon(elem), []).append(word)

            stratum = [(dfa.initial[0], "", backend.identity())]
            if dfa.initial[0] in accepting:
                admit("", backend.identity())
            for _ in range(max_len):
                nxt = []
                for state, word, elem in stratum:
                    for letter in structure.alphabet:
                        targets = dfa.targets(state, letter)
                        if not targets:
                            continue
                        child = word + letter
                        image = backend.multiply(elem, backend.images[letter])
                        nxt.append((targets[0], child, image))
                        if targets[0] in accepting:
                            admit(child, image)
                if not nxt:
                    break
                stratum = nxt
        self.words = words
        self.elems = elems
        self.buckets = buckets
        self._points: dict[str, list[Element]] = {}

    def bucket(self, elem: Element) -> list[str]:
        """Words whose image equals the given element, enumeration order."""
        return self.buckets.get(self.structure.backend.canon(elem), [])

    def points(self, word: str) -> list[Element]:
        """Prefix images of a word: the integer-time positions of its path."""
        cached = self._points.get(word)
        if cached is None:
            backend = self.structure.backend
            out = [backend.identity()]
            for ch in word:
                out.append(backend.multiply(out[-1], backend.images[ch]))
            self._points[word] = cached = out
        return cached


# -- pointwise distance helpers ------------------------------------------------

def _exceeds(left: list, right: list, metric, k: int) -> bool:
    """Whether the synchronous distance of two point sequences exceeds k.
    Sequences are clamped at their endpoint; exits on the first excess."""
    nl, nr = len(left), len(right)
    last_l, last_r = left[-1], right[-1]
    for t in range(max(nl, nr)):
        lp = left[t] if t < nl else last_l
        rp = right[t] if t < nr else last_r
        if metric(lp, rp) > k:
            return True
    return False


ProgressFn = Callable[[int, int], None]


def _resimulate(structure: Structure, left_word: str, w2: str) -> tuple[int, int]:
    """Full distance profile of the two words, computed independently of the
    scan loops; returns (distance, earliest time attaining it)."""
    backend = structure.backend
    return synchronous_distance_at(path_of(left_word, backend),
                                   path_of(w2, backend))


# -- bounded scans ---------------------------------------------------------------

def check_right_ft_bounded(structure: Structure, k: int, max_len: int = 16,
                           progress: Optional[ProgressFn] = None) -> Verdict:
    """Scan every pair w1, w2 of language words up to max_len and every slack
    letter a (empty first) with image(w1·a) = image(w2), and compare the paths
    of w1·a and w2.  FAILS carries the first violating witness in scan order;
    HOLDS is bounded evidence only."""
    _validate_k(k)
    idx = structure.index(max_len)
    backend = structure.backend
    metric = backend.word_metric
    images = backend.images
    slacks = ("",) + structure.alphabet.symbols
    pairs = 0
    total = len(idx.words)
    for n1, w1 in enumerate(idx.words):
        if progress is not None and n1 % _PROGRESS_STRIDE == 0:
            progress(n1, total)
        pts1 = idx.points(w1)
        e1 = idx.elems[w1]
        for a in slacks:
            if a:
                end = backend.multiply(e1, images[a])
                left = pts1 + [end]
            else:
                end = e1
                left = pts1
            partners = idx.bucket(end)
            pairs += len(partners)
            for w2 in partners:
                if w2 == w1 and not a:
                    pairs -= 1
                    continue
                if _exceeds(left, idx.points(w2), metric, k):
                    dist, time = _resimulate(structure, w1 + a, w2)
                    witness = FTWitness(w1, w2, a, "", time, dist)
                    return Verdict(Status.FAILS, RIGHT_FT, k,
                                   {"max_len": max_len}, witness=witness)
    return Verdict(Status.HOLDS, RIGHT_FT, k, {"max_len": max_len},
                   certificate=_bounded_certificate(total, pairs))


def check_two_sided_ft_bounded(structure: Structure, k: int, max_len: int = 16,
                               progress: Optional[ProgressFn] = None) -> Verdict:
    """Like the right check but with slack on both sides: the path of a·w1·b
    against the path of w2, for a, b running over the empty letter and the
    alphabet in order."""
    _validate_k(k)
    idx = structure.index(max_len)
    backend = structure.backend
    metric = backend.word_metric
    images = backend.images
    identity = backend.identity()
    slacks = ("",) + structure.alphabet.symbols
    pairs = 0
    total = len(idx.words)
    for n1, w1 in enumerate(idx.words):
        if progress is not None and n1 % _PROGRESS_STRIDE == 0:
            progress(n1, total)
        pts1 = idx.points(w1)
        for a in slacks:
            if a:
                ia = images[a]
                base = [identity] + [backend.multiply(ia, p) for p in pts1]
            else:
                base = pts1
            for b in slacks:
                if b:
                    end = backend.multiply(base[-1], images[b])
                    left = base + [end]
                else:
                    end = base[-1]
                    left = base
                partners = idx.bucket(end)
                pairs += len(partners)
                for w2 in partners:
                    if w2 == w1 and not a and not b:
                        pairs -= 1
                        continue
                    if _exceeds(left, idx.points(w2), metric, k):
                        dist, time = _resimulate(structure, a + w1 + b, w2)
                        witness = FTWitness(w1, w2, a, b, time, dist)
                        return Verdict(Status.FAILS, TWO_SIDED_FT, k,
                                       {"max_len": max_len}, witness=witness)
    return Verdict(Status.HOLDS, TWO_SIDED_FT, k, {"max_len": max_len},
                   certificate=_bounded_certificate(total, pairs))


def check_biautomatic_bounded(structure: Structure, k: int, max_len: int = 16,
                              progress: Optional[ProgressFn] = None
                              ) -> tuple[Verdict, Verdict]:
    """The right condition on the language and on its reversal-inversion."""
    right = check_right_ft_bounded(structure, k, max_len, progress)
    inverse = check_right_ft_bounded(structure.inverted(), k, max_len, progress)
    return right, replace(inverse, condition=INVERSE_RIGHT_FT)


def search_witness(structure: Structure, condition: str, k: int,
                   max_len: int = 16,
                   progress: Optional[ProgressFn] = None) -> Verdict:
    """Deterministic shortest-first search for a violating witness of one of
    the fellow-traveler conditions; FAILS means a witness was found."""
    if condition == RIGHT_FT:
        return check_right_ft_bounded(structure, k, max_len, progress)
    if condition == TWO_SIDED_FT:
        return check_two_sided_ft_bounded(structure, k, max_len, progress)
    if condition == INVERSE_RIGHT_FT:
        verdict = check_right_ft_bounded(structure.inverted(), k, max_len,
                                         progress)
        return replace(verdict, condition=INVERSE_RIGHT_FT)
    raise CheckError(f"unknown witness condition {condition!r}")


def _bounded_certificate(words: int, pairs: int) -> dict:
    return {"evidence": "bounded", "words_scanned": words,
            "pairs_compared": pairs}


def _validate_k(k: int) -> None:
    if k < 0:
        raise CheckError("k must be non-negative")


# -- witness re-verification -----------------------------------------------------

def verify_ft_witness(structure: Structure, condition: str,
                      witness: FTWitness, k: int) -> bool:
    """Re-check a claimed violating witness by direct simulation, using none
    of the scan machinery: membership, image equality, and the full distance
    profile are recomputed from scratch."""
    target = structure.inverted() if condition == INVERSE_RIGHT_FT else structure
    if condition in (RIGHT_FT, INVERSE_RIGHT_FT):
        if witness.b:
            return False
        left_word = witness.w1 + witness.a
    elif condition == TWO_SIDED_FT:
        left_word = witness.a + witness.w1 + witness.b
    else:
        raise CheckError(f"unknown witness condition {condition!r}")
    language = target.language
    if not language.member(witness.w1) or not language.member(witness.w2):
        return False
    backend = target.backend
    if backend.evaluate(left_word) != backend.evaluate(witness.w2):
        return False
    dist, time = _resimulate(target, left_word, witness.w2)
    return dist > k and dist == witness.distance and time == witness.time


def verify_pump_witness(structure: Structure, witness: PumpWitness,
                        repeats: Iterable[int] = (0, 1, 2, 5)) -> bool:
    """Re-check an infinite-to-one witness: the pumped words must be distinct
    language members sharing one image."""
    words = [witness.word(t) for t in repeats]
    if len(set(words)) != len(words):
        return False
    backend = structure.backend
    images = {backend.canon(backend.evaluate(w)) for w in words}
    return len(images) == 1 and all(structure.language.member(w) for w in words)


# -- ball-bounded certification ---------------------------------------------------

_TAG_READ = "read"    # the track consumes a letter of its own word
_TAG_PRE = "pre"      # left track consumes the prepended slack letter
_TAG_SLACK = "slack"  # left track consumes the appended slack letter
_TAG_PAD = "pad"      # no letter; a finished track stays parked


class _DifferenceMachine:
    """Two synchronized tracks over the language with a running difference.

    The left track spells the slack-extended word (``w1·a`` for the right
    condition, ``a·w1·b`` for the two-sided one), the right track a bare
    language word.  A configuration (left, right, g) after t steps has g
    equal to inverse(left position) * (right position), so norm(g) is the
    pointwise path distance at time t.  Pad steps park finished tracks,
    mirroring how hat paths stay at their endpoint, and acceptance is both
    tracks finished with g the identity.
    """

    def __init__(self, structure: Structure, two_sided: bool):
        dfa = structure.dfa
        backend = structure.backend
        alphabet = structure.alphabet
        n = dfa.n_states
        accepting = set(dfa.accepting)
        self.backend = backend
        self.two_sided = two_sided
        self.end_left = n
        self.pre = n + 1 if two_sided else None
        self.end_right = n
        left: list[list[tuple[Optional[str], int, str]]] = []
        for q in range(n):
            moves: list[tuple[Optional[str], int, str]] = []
            for letter in alphabet:
                targets = dfa.targets(q, letter)
                if targets:
                    moves.append((letter, targets[0], _TAG_READ))
            if q in accepting:
                for letter in alphabet:
                    moves.append((letter, self.end_left, _TAG_SLACK))
                moves.append((None, self.end_left, _TAG_PAD))
            left.append(moves)
        left.append([(None, self.end_left, _TAG_PAD)])
        if two_sided:
            q0 = dfa.initial[0]
            moves = []
            for letter in alphabet:
                moves.append((letter, q0, _TAG_PRE))
                targets = dfa.targets(q0, letter)
                if targets:
                    moves.append((letter, targets[0], _TAG_READ))
                if q0 in accepting:
                    moves.append((letter, self.end_left, _TAG_SLACK))
            if q0 in accepting:
                moves.append((None, self.end_left, _TAG_PAD))
            left.append(moves)
        self.left_moves = left
        right: list[list[tuple[Optional[str], int, str]]] = []
        for q in range(n):
            moves = []
            for letter in alphabet:
                targets = dfa.targets(q, letter)
                if targets:
                    moves.append((letter, targets[0], _TAG_READ))
            if q in accepting:
                moves.append((None, self.end_right, _TAG_PAD))
            right.append(moves)
        right.append([(None, self.end_right, _TAG_PAD)])
        self.right_moves = right
        self.left_rev = _reverse_moves(self.left_moves)
        self.right_rev = _reverse_moves(self.right_moves)
        start_left = self.pre if two_sided else dfa.initial[0]
        self.initial = (start_left, dfa.initial[0], backend.identity())
        self.accept = (self.end_left, self.end_right, backend.identity())
        self.img = {letter: backend.images[letter] for letter in alphabet}
        self.inv_img = {letter: backend.inverse(v)
                        for letter, v in self.img.items()}

    def step(self, g: Element, la: Optional[str], rb: Optional[str]) -> Element:
        h = self.backend.multiply(self.inv_img[la], g) if la else g
        return self.backend.multiply(h, self.img[rb]) if rb else h

    def unstep(self, g: Element, la: Optional[str], rb: Optional[str]) -> Element:
        h = self.backend.multiply(g, self.inv_img[rb]) if rb else g
        return self.backend.multiply(self.img[la], h) if la else h

    def left_name(self, state: int) -> str:
        if state == self.end_left:
            return "end"
        if self.pre is not None and state == self.pre:
            return "pre"
        return f"q{state}"

    def right_name(self, state: int) -> str:
        return "end" if state == self.end_right else f"q{state}"


def _reverse_moves(moves: list[list[tuple[Optional[str], int, str]]]
                   ) -> list[list[tuple[int, Optional[str], str]]]:
    rev: list[list[tuple[int, Optional[str], str]]] = [[] for _ in moves]
    for src, out in enumerate(moves):
        for letter, dst, tag in out:
            rev[dst].append((src, letter, tag))
    return rev


def certify_ft(structure: Structure, k: int, cutoff: Optional[int] = None,
               condition: str = RIGHT_FT) -> Verdict:
    """Ball-bounded certification of a fellow-traveler condition.

    Explores the difference machine inside the metric ball of radius
    ``cutoff`` (default 2k+2).  Outcomes:

    * FAILS with a simulation-verified witness: a violating accepted run
      exists entirely inside the ball;
    * HOLDS with a certificate: no accepted run can leave the ball, and no
      in-ball run both exceeds distance k and reaches acceptance, so the
      condition holds unconditionally;
    * UNKNOWN: some run could escape the ball and re-enter in a way the
      displacement analysis cannot rule out; the boundary is reported.
    """
    _validate_k(k)
    if condition == INVERSE_RIGHT_FT:
        inner = certify_ft(structure.inverted(), k, cutoff, RIGHT_FT)
        return replace(inner, condition=INVERSE_RIGHT_FT)
    if condition not in (RIGHT_FT, TWO_SIDED_FT):
        raise CheckError(f"condition {condition!r} cannot be certified")
    if cutoff is None:
        cutoff = 2 * k + 2
    if cutoff < k:
        raise CheckError(f"cutoff {cutoff} is smaller than k={k}")
    bound = {"cutoff": cutoff}
    if structure.dfa.n_states == 0:
        return Verdict(Status.HOLDS, condition, k, bound,
                       certificate={"evidence": "certified",
                                    "reason": "empty language"})
    backend = structure.backend
    machine = _DifferenceMachine(structure, condition == TWO_SIDED_FT)
    ball = backend.ball(cutoff)
    norms: dict[Element, int] = {}

    def norm(g: Element) -> int:
        value = norms.get(g)
        if value is None:
            norms[g] = value = backend.norm(g)
        return value

    # Forward closure of reachable in-ball configurations; escapes are the
    # pruned successors that stepped outside the ball.
    parents: dict[tuple, Optional[tuple]] = {machine.initial: None}
    order = [machine.initial]
    escapes: set[tuple] = set()
    queue = deque([machine.initial])
    while queue:
        cfg = queue.popleft()
        l, r, g = cfg
        for la, l2, ltag in machine.left_moves[l]:
            for rb, r2, rtag in machine.right_moves[r]:
                g2 = machine.step(g, la, rb)
                nxt = (l2, r2, g2)
                if g2 in ball:
                    if nxt not in parents:
                        parents[nxt] = (cfg, la, rb, ltag, rtag)
                        order.append(nxt)
                        queue.append(nxt)
                else:
                    escapes.add(nxt)

    # Backward closure over all in-ball configurations (reached or not):
    # a run that leaves the ball may re-enter at configurations the forward
    # pass never saw.
    next_hop: dict[tuple, Optional[tuple]] = {machine.accept: None}
    queue = deque([machine.accept])
    while queue:
        cfg = queue.popleft()
        l, r, g = cfg
        for lp, la, ltag in machine.left_rev[l]:
            for rp, rb, rtag in machine.right_rev[r]:
                gp = machine.unstep(g, la, rb)
                if gp in ball:
                    prev = (lp, rp, gp)
                    if prev not in next_hop:
                        next_hop[prev] = (cfg, la, rb, ltag, rtag)
                        queue.append(prev)

    for cfg in order:
        if norm(cfg[2]) > k and cfg in next_hop:
            witness = _decode_run(structure, machine, condition, cfg,
                                  parents, next_hop)
            if not verify_ft_witness(structure, condition, witness, k):
                raise CheckError(
                    "internal error: reconstructed witness failed re-simulation")
            return Verdict(Status.FAILS, condition, k, bound, witness=witness)

    verdict = _escape_analysis(structure, machine, cutoff, escapes,
                               next_hop, norm)
    if verdict is not None:
        boundary = _boundary_report(machine, backend, escapes, norm)
        certificate = {"evidence": "inconclusive", "cutoff": cutoff,
                       "boundary": boundary,
                       "boundary_total": len(escapes)}
        certificate.update(verdict)
        return Verdict(Status.UNKNOWN, condition, k, bound,
                       certificate=certificate)
    difference = sorted({backend.canon(g) for _, _, g in parents})
    certificate = {"evidence": "certified", "cutoff": cutoff,
                   "configurations_explored": len(parents),
                   "difference_elements": difference}
    return Verdict(Status.HOLDS, condition, k, bound, certificate=certificate)


def _decode_run(structure: Structure, machine: _DifferenceMachine,
                condition: str, cfg: tuple, parents: dict,
                next_hop: dict) -> FTWitness:
    """Rebuild the words of the accepted run through a violating
    configuration and re-simulate its full distance profile."""
    moves: list[tuple] = []
    cursor = cfg
    while parents[cursor] is not None:
        prev, la, rb, ltag, rtag = parents[cursor]
        moves.append((la, rb, ltag, rtag))
        cursor = prev
    moves.reverse()
    cursor = cfg
    while next_hop[cursor] is not None:
        nxt, la, rb, ltag, rtag = next_hop[cursor]
        moves.append((la, rb, ltag, rtag))
        cursor = nxt
    w1_parts: list[str] = []
    w2_parts: list[str] = []
    pre_letter = ""
    slack_letter = ""
    for la, rb, ltag, rtag in moves:
        if ltag == _TAG_READ:
            w1_parts.append(la)
        elif ltag == _TAG_PRE:
            pre_letter = la
        elif ltag == _TAG_SLACK:
            slack_letter = la
        if rtag == _TAG_READ:
            w2_parts.append(rb)
    w1 = "".join(w1_parts)
    w2 = "".join(w2_parts)
    if condition == TWO_SIDED_FT:
        a, b = pre_letter, slack_letter
        left_word = a + w1 + b
    else:
        a, b = slack_letter, ""
        left_word = w1 + a
    dist, time = _resimulate(structure, left_word, w2)
    return FTWitness(w1, w2, a, b, time, dist)


def _boundary_report(machine: _DifferenceMachine, backend: GroupBackend,
                     escapes: set, norm) -> list[dict]:
    ordered = sorted(escapes, key=lambda c: (c[0], c[1], backend.canon(c[2])))
    return [_config_json(machine, backend, cfg, norm)
            for cfg in ordered[:_BOUNDARY_REPORT_CAP]]


def _config_json(machine: _DifferenceMachine, backend: GroupBackend,
                 cfg: tuple, norm) -> dict:
    l, r, g = cfg
    return {"left": machine.left_name(l), "right": machine.right_name(r),
            "difference": backend.canon(g), "norm": norm(g)}


def _escape_analysis(structure: Structure, machine: _DifferenceMachine,
                     cutoff: int, escapes: set, next_hop: dict,
                     norm) -> Optional[dict]:
    """Decide whether any escaped run could re-enter the ball and still reach
    acceptance.  Returns None when every escape is refuted (the certificate
    stands) and a blocking description otherwise.

    A run that leaves the ball exits at an escape configuration and, if it is
    ever accepted, makes a last re-entry at a co-accessible configuration of
    norm at least cutoff-1 (each step changes the norm by at most 2).  The
    segment between them projects to a walk in the state-pair graph; over a
    free abelian backend its displacement is a tree-path displacement plus a
    non-negative integer combination of fundamental cycle values, so
    membership of the required displacement in both the integer lattice and
    the rational cone of those values is necessary.  For other backends only
    pair reachability is used, which is coarser but still sound.
    """
    if not escapes:
        return None
    backend = structure.backend
    candidates = [cfg for cfg in next_hop if norm(cfg[2]) >= cutoff - 1]
    if not candidates:
        return None

    esc_by_pair: dict[tuple[int, int], list[Element]] = {}
    for l, r, g in sorted(escapes, key=lambda c: (c[0], c[1],
                                                  backend.canon(c[2]))):
        esc_by_pair.setdefault((l, r), []).append(g)
    cand_by_pair: dict[tuple[int, int], list[Element]] = {}
    for l, r, g in sorted(candidates, key=lambda c: (c[0], c[1],
                                                     backend.canon(c[2]))):
        cand_by_pair.setdefault((l, r), []).append(g)

    pair_succ: dict[tuple[int, int], set[tuple[int, int]]] = {}
    pair_edges: dict[tuple[tuple[int, int], tuple[int, int]], set] = {}
    abelian = isinstance(backend, FreeAbelianBackend)
    for l in range(len(machine.left_moves)):
        for r in range(len(machine.right_moves)):
            succ = pair_succ.setdefault((l, r), set())
            for la, l2, _ in machine.left_moves[l]:
                for rb, r2, _ in machine.right_moves[r]:
                    succ.add((l2, r2))
                    if abelian:
                        delta = machine.step(backend.identity(), la, rb)
                        pair_edges.setdefault(((l, r), (l2, r2)),
                                              set()).add(delta)

    reach_cache: dict[tuple[int, int], set] = {}
    coreach_cache: dict[tuple[int, int], set] = {}

    def reach(start: tuple[int, int]) -> set:
        if start not in reach_cache:
            reach_cache[start] = _pair_closure(start, pair_succ)
        return reach_cache[start]

    pair_pred: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for src, succ in pair_succ.items():
        for dst in succ:
            pair_pred.setdefault(dst, set()).add(src)

    def coreach(end: tuple[int, int]) -> set:
        if end not in coreach_cache:
            coreach_cache[end] = _pair_closure(end, pair_pred)
        return coreach_cache[end]

    budget = _VIABILITY_BUDGET
    for ep in sorted(esc_by_pair):
        reachable = reach(ep)
        for cp in sorted(cand_by_pair):
            if cp not in reachable:
                continue
            if not abelian:
                return {"blocking": _blocking_json(
                    structure, machine, ep, esc_by_pair[ep][0],
                    cp, cand_by_pair[cp][0], norm)}
            base, lattice, cone = _displacement_data(
                ep, cp, reachable & coreach(cp), pair_edges, backend)
            for ge in esc_by_pair[ep]:
                for gc in cand_by_pair[cp]:
                    budget -= 1
                    if budget < 0:
                        return {"note": "displacement analysis budget "
                                        "exhausted"}
                    delta = _vsub(gc, ge)
                    reduced = _vsub(delta, base)
                    if reduced in lattice and _cone_member(cone, reduced):
                        return {"blocking": _blocking_json(
                            structure, machine, ep, ge, cp, gc, norm)}
    return None


def _blocking_json(structure: Structure, machine: _DifferenceMachine,
                   ep: tuple[int, int], ge: Element,
                   cp: tuple[int, int], gc: Element, norm) -> dict:
    backend = structure.backend
    return {
        "escape": _config_json(machine, backend, (ep[0], ep[1], ge), norm),
        "reentry": _config_json(machine, backend, (cp[0], cp[1], gc), norm),
    }


def _pair_closure(start: tuple[int, int], adjacency: dict) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in adjacency.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _displacement_data(ep, cp, h_nodes: set, pair_edges: dict,
                       backend: FreeAbelianBackend):
    """Potentials over the escape-to-re-entry pair subgraph: the displacement
    of any walk ep -> cp equals pot(cp) plus a non-negative integer
    combination of the fundamental cycle values F(e)."""
    edges = []
    for (u, v), deltas in pair_edges.items():
        if u in h_nodes and v in h_nodes:
            for delta in sorted(deltas):
                edges.append((u, v, delta))
    edges.sort()
    neighbors: dict[tuple[int, int], list] = {}
    for u, v, delta in edges:
        neighbors.setdefault(u, []).append((v, delta, 1))
        neighbors.setdefault(v, []).append((u, delta, -1))
    zero = backend.identity()
    pot = {ep: zero}
    queue = deque([ep])
    while queue:
        node = queue.popleft()
        for other, delta, sign in neighbors.get(node, ()):
            if other not in pot:
                if sign > 0:
                    pot[other] = _vadd(pot[node], delta)
                else:
                    pot[other] = _vsub(pot[node], delta)
                queue.append(other)
    values: list[tuple[int, ...]] = []
    seen = set()
    for u, v, delta in edges:
        f = _vsub(_vadd(pot[u], delta), pot[v])
        if any(f) and f not in seen:
            seen.add(f)
            values.append(f)
    lattice = _IntegerLattice(values, backend.rank)
    return pot[cp], lattice, values


def _vadd(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a + b for a, b in zip(u, v))


def _vsub(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a - b for a, b in zip(u, v))


class _IntegerLattice:
    """Membership in the integer span of a set of vectors, via an integer
    echelon form computed once."""

    def __init__(self, gens: Iterable[tuple[int, ...]], dim: int):
        self.dim = dim
        active = [list(g) for g in gens if any(g)]
        self.pivots: list[tuple[int, list[int]]] = []
        for col in range(dim):
            nz = [row for row in active if row[col]]
            active = [row for row in active if not row[col]]
            while len(nz) > 1:
                nz.sort(key=lambda row: abs(row[col]))
                head = nz[0]
                keep = [head]
                for row in nz[1:]:
                    q = row[col] // head[col]
                    rest = [a - q * b for a, b in zip(row, head)]
                    if rest[col]:
                        keep.append(rest)
                    elif any(rest):
                        active.append(rest)
                nz = keep
            if nz:
                self.pivots.append((col, nz[0]))

    def __contains__(self, target: tuple[int, ...]) -> bool:
        t = list(target)
        for col, row in self.pivots:
            if t[col] % row[col] == 0:
                q = t[col] // row[col]
                t = [a - q * b for a, b in zip(t, row)]
        return not any(t)


def _cone_member(gens: list[tuple[int, ...]],
                 target: tuple[int, ...]) -> bool:
    """Whether the target is a non-negative rational combination of the
    generator vectors (exact rational feasibility)."""
    if not any(target):
        return True
    columns = [g for g in gens if any(g)]
    if not columns:
        return False
    rows = [[Fraction(g[i]) for g in columns] for i in range(len(target))]
    rhs = [Fraction(c) for c in target]
    return lp_feasible(rows, rhs) is not None


# -- finite-to-one ---------------------------------------------------------------

def check_finite_to_one(structure: Structure) -> Verdict:
    """Whether the image map is finite-to-one on the language.  FAILS carries
    a pumping-family witness; UNKNOWN reports the search caps that ran out."""
    result: FinitenessResult = finite_to_one_analysis(structure.dfa,
                                                      structure.backend)
    status = {"finite": Status.HOLDS, "infinite": Status.FAILS,
              "unknown": Status.UNKNOWN}[result.status]
    return Verdict(status, FINITE_TO_ONE, None, {},
                   witness=result.witness,
                   certificate=result.detail or None)


# -- length-difference bound ------------------------------------------------------

@dataclass(frozen=True)
class LengthBound:
    """The pigeonhole bound: words of k-fellow-traveling paths differ in
    length by at most (automaton states) * (size of the k-ball)."""

    k: int
    n_states: int
    ball_size: int

    @property
    def bound(self) -> int:
        return self.n_states * self.ball_size

    def to_json(self) -> dict:
        return {"k": self.k, "n_states": self.n_states,
                "ball_size": self.ball_size, "bound": self.bound}


def length_difference_bound(structure: Structure, k: int,
                            warn: bool = True) -> LengthBound:
    """Compute the length-difference bound N for the structure; meaningful
    only when the image map is finite-to-one (warned, not enforced)."""
    _validate_k(k)
    if warn and not check_finite_to_one(structure).holds:
        import warnings
        warnings.warn(
            "length-difference bound on a structure whose image map is not "
            "finite-to-one is vacuous", RuntimeWarning, stacklevel=2)
    return LengthBound(k, structure.dfa.n_states,
                       len(structure.backend.ball(k)))


def check_length_difference_bounded(structure: Structure, k: int,
                                    max_len: int = 16) -> Verdict:
    """Empirical validation of the length-difference bound: every pair w1, w2
    of language words whose paths (with any slack letter prepended to w1)
    k-fellow-travel must satisfy | |a·w1| - |w2| | <= N."""
    bound = length_difference_bound(structure, k)
    n = bound.bound
    idx = structure.index(max_len)
    backend = structure.backend
    metric = backend.word_metric
    images = backend.images
    identity = backend.identity()
    offsets = list(backend.ball(k))
    slacks = ("",) + structure.alphabet.symbols
    pairs = 0
    observed = 0
    observed_pair: Optional[dict] = None
    for w1 in idx.words:
        pts1 = idx.points(w1)
        for a in slacks:
            if a:
                ia = images[a]
                left = [identity] + [backend.multiply(ia, p) for p in pts1]
            else:
                left = pts1
            end = left[-1]
            length_left = len(left) - 1
            for offset in offsets:
                for w2 in idx.bucket(backend.multiply(end, offset)):
                    if _exceeds(left, idx.points(w2), metric, k):
                        continue
                    pairs += 1
                    difference = abs(length_left - len(w2))
                    if difference > observed:
                        observed = difference
                        observed_pair = {"w1": w1, "a": a, "w2": w2,
                                         "difference": difference}
                    if difference > n:
                        return Verdict(
                            Status.FAILS, LENGTH_DIFFERENCE, k,
                            {"max_len": max_len},
                            certificate={"w1": w1, "a": a, "w2": w2,
                                         "difference": difference,
                                         "bound": bound.to_json()})
    certificate = {"evidence": "bounded", "bound": bound.to_json(),
                   "pairs_compared": pairs, "observed_max": observed}
    if observed_pair is not None:
        certificate["observed_pair"] = observed_pair
    return Verdict(Status.HOLDS, LENGTH_DIFFERENCE, k, {"max_len": max_len},
                   certificate=certificate)


@dataclass(frozen=True)
class PropagatedBounds:
    """Constants carried from a one-sided bound k and a length bound N to the
    inverse-language and two-sided conditions."""

    k: int
    n_bound: int

    @property
    def inverse_bound(self) -> int:
        return self.n_bound + self.k

    @property
    def two_sided_bound(self) -> int:
        return self.n_bound + 2 * self.k + 1

    def to_json(self) -> dict:
        return {"k": self.k, "n_bound": self.n_bound,
                "inverse_bound": self.inverse_bound,
                "two_sided_bound": self.two_sided_bound}


def propagate_constants(k: int, n_bound: int) -> PropagatedBounds:
    _validate_k(k)
    if n_bound < 0:
        raise CheckError("the length bound must be non-negative")
    return PropagatedBounds(k, n_bound)


# -- surjectivity (advisory) -------------------------------------------------------

def check_surjective_bounded(structure: Structure, radius: int,
                             max_len: int = 16) -> Verdict:
    """Whether every element of the given ball is the image of some language
    word of length at most max_len.  Advisory: bounded in both directions."""
    if radius < 0:
        raise CheckError("radius must be non-negative")
    idx = structure.index(max_len)
    backend = structure.backend
    covered = {backend.canon(e) for e in idx.elems.values()}
    missing = [backend.canon(g) for g in backend.ball(radius)
               if backend.canon(g) not in covered]
    if missing:
        return Verdict(Status.FAILS, SURJECTIVE, None,
                       {"max_len": max_len, "radius": radius},
                       certificate={"missing": missing[:20],
                                    "missing_total": len(missing)})
    return Verdict(Status.HOLDS, SURJECTIVE, None,
                   {"max_len": max_len, "radius": radius},
                   certificate={"evidence": "bounded",
                                "covered": len(covered)})
