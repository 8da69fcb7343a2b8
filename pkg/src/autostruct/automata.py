"""Finite automata over generator alphabets.

Covers the regular-language toolkit the checkers need: regex compilation
(Thompson construction), subset determinization, trimming, products,
complement, equivalence, length-then-lexicographic word enumeration, the
reversal-inversion operator on languages, and loop languages at a state.

All constructions are deterministic: letters are always iterated in alphabet
declaration order and states are numbered in BFS discovery order, so repeated
runs produce identical automata, enumerations, and witnesses.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .alphabet import GeneratorAlphabet
from .errors import AutomatonError, RegexError

# Label used for empty moves inside nondeterministic machines.
EPSILON = ""


# -- regular expression syntax tree ------------------------------------------

class Regex:
    """Base class of regex nodes: empty word, letter, concat, union, star."""
    __slots__ = ()


@dataclass(frozen=True)
class Eps(Regex):
    __slots__ = ()


@dataclass(frozen=True)
class Lit(Regex):
    letter: str


@dataclass(frozen=True)
class Cat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Alt(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


def parse_regex(text: str, alphabet: GeneratorAlphabet) -> Regex:
    """Parse the concrete syntax: letters, juxtaposition, ``|``, ``*``, parens.

    Star binds tighter than concatenation, which binds tighter than union.
    Whitespace is ignored; the empty string denotes the empty word.
    """
    toks = [ch for ch in text if not ch.isspace()]
    pos = 0

    def peek() -> str | None:
        return toks[pos] if pos < len(toks) else None

    def union() -> Regex:
        nonlocal pos
        node = concat()
        while peek() == "|":
            pos += 1
            node = Alt(node, concat())
        return node

    def concat() -> Regex:
        nonlocal pos
        node: Regex | None = None
        while True:
            ch = peek()
            if ch is None or ch in "|)":
                break
            atom_node = atom()
            node = atom_node if node is None else Cat(node, atom_node)
        return node if node is not None else Eps()

    def atom() -> Regex:
        nonlocal pos
        ch = peek()
        if ch == "(":
            pos += 1
            node = union()
            if peek() != ")":
                raise RegexError("unbalanced parenthesis")
            pos += 1
        elif ch == "*":
            raise RegexError("star must follow a letter or group")
        else:
            assert ch is not None
            if ch not in alphabet:
                raise RegexError(f"letter {ch!r} not in alphabet")
            node = Lit(ch)
            pos += 1
        while peek() == "*":
            pos += 1
            node = Star(node)
        return node

    node = union()
    if pos != len(toks):
        raise RegexError(f"unexpected {toks[pos]!r} at position {pos}")
    return node


# -- automata -----------------------------------------------------------------

class FiniteAutomaton:
    """A finite automaton over a generator alphabet.

    States are the integers ``0..n_states-1``.  Transitions may be
    nondeterministic and may carry the empty label ``EPSILON``.  Instances are
    immutable by convention; derived machines (determinization, trimming) are
    cached on first use.
    """

    def __init__(self, alphabet: GeneratorAlphabet, n_states: int,
                 initial: list[int] | tuple[int, ...] | set[int],
                 accepting: list[int] | tuple[int, ...] | set[int],
                 transitions: list[tuple[int, str, int]]):
        self.alphabet = alphabet
        self.n_states = n_states
        self.initial = tuple(sorted(set(initial)))
        self.accepting = tuple(sorted(set(accepting)))
        for q in self.initial + self.accepting:
            if not 0 <= q < n_states:
                raise AutomatonError(f"state {q} out of range")
        delta: dict[int, dict[str, list[int]]] = {}
        seen: set[tuple[int, str, int]] = set()
        for src, letter, dst in transitions:
            if not (0 <= src < n_states and 0 <= dst < n_states):
                raise AutomatonError(f"transition ({src},{letter!r},{dst}) out of range")
            if letter != EPSILON and letter not in alphabet:
                raise AutomatonError(f"transition letter {letter!r} not in alphabet")
            if (src, letter, dst) in seen:
                continue
            seen.add((src, letter, dst))
            delta.setdefault(src, {}).setdefault(letter, []).append(dst)
        for row in delta.values():
            for targets in row.values():
                targets.sort()
        self._delta = delta
        self._dfa: FiniteAutomaton | None = None
        self._trim_dfa: FiniteAutomaton | None = None

    # -- introspection --------------------------------------------------------

    def targets(self, state: int, letter: str) -> tuple[int, ...]:
        return tuple(self._delta.get(state, {}).get(letter, ()))

    def transitions(self) -> list[tuple[int, str, int]]:
        out = []
        for src in sorted(self._delta):
            for letter, targets in self._delta[src].items():
                for dst in targets:
                    out.append((src, letter, dst))
        out.sort(key=lambda t: (t[0], self._letter_rank(t[1]), t[2]))
        return out

    def _letter_rank(self, letter: str) -> int:
        return -1 if letter == EPSILON else self.alphabet.index(letter)

    @property
    def deterministic(self) -> bool:
        if len(self.initial) > 1:
            return False
        for row in self._delta.values():
            if EPSILON in row:
                return False
            if any(len(t) > 1 for t in row.values()):
                return False
        return True

    def has_epsilon(self) -> bool:
        return any(EPSILON in row for row in self._delta.values())

    # -- core constructions ----------------------------------------------------

    def _eps_closure(self, states: frozenset[int]) -> frozenset[int]:
        out = set(states)
        stack = list(states)
        while stack:
            q = stack.pop()
            for t in self.targets(q, EPSILON):
                if t not in out:
                    out.add(t)
                    stack.append(t)
        return frozenset(out)

    def determinize(self) -> "FiniteAutomaton":
        """Subset construction; the result has a single initial state and no
        empty moves.  Missing transitions mean rejection (no explicit sink)."""
        if self._dfa is not None:
            return self._dfa
        start = self._eps_closure(frozenset(self.initial))
        ids: dict[frozenset[int], int] = {start: 0}
        order = [start]
        transitions: list[tuple[int, str, int]] = []
        queue = deque([start])
        while queue:
            subset = queue.popleft()
            src = ids[subset]
            for letter in self.alphabet:
                merged: set[int] = set()
                for q in subset:
                    merged.update(self.targets(q, letter))
                if not merged:
                    continue
                closed = self._eps_closure(frozenset(merged))
                if closed not in ids:
                    ids[closed] = len(order)
                    order.append(closed)
                    queue.append(closed)
                transitions.append((src, letter, ids[closed]))
        accepting = [ids[s] for s in order if any(q in s for q in self.accepting)]
        dfa = FiniteAutomaton(self.alphabet, len(order), [0], accepting, transitions)
        dfa._dfa = dfa
        self._dfa = dfa
        return dfa

    def trim(self) -> "FiniteAutomaton":
        """Restrict to states that are both accessible and co-accessible."""
        forward: set[int] = set()
        queue = deque(self.initial)
        forward.update(self.initial)
        while queue:
            q = queue.popleft()
            for row in (self._delta.get(q, {}),):
                for targets in row.values():
                    for t in targets:
                        if t not in forward:
                            forward.add(t)
                            queue.append(t)
        reverse_adj: dict[int, set[int]] = {}
        for src, _, dst in self.transitions():
            reverse_adj.setdefault(dst, set()).add(src)
        backward: set[int] = set(self.accepting)
        queue = deque(self.accepting)
        while queue:
            q = queue.popleft()
            for p in reverse_adj.get(q, ()):
                if p not in backward:
                    backward.add(p)
                    queue.append(p)
        keep = sorted(forward & backward)
        remap = {old: new for new, old in enumerate(keep)}
        transitions = [(remap[s], letter, remap[t]) for s, letter, t in self.transitions()
                       if s in remap and t in remap]
        initial = [remap[q] for q in self.initial if q in remap]
        accepting = [remap[q] for q in self.accepting if q in remap]
        return FiniteAutomaton(self.alphabet, len(keep), initial, accepting, transitions)

    def trim_dfa(self) -> "FiniteAutomaton":
        """Trimmed determinization; the normal form the checkers work on."""
        if self._trim_dfa is None:
            self._trim_dfa = self.determinize().trim()
        return self._trim_dfa

    def complete(self) -> "FiniteAutomaton":
        """Deterministic automaton with a total transition function."""
        dfa = self.determinize()
        n = dfa.n_states
        sink = n
        transitions = dfa.transitions()
        used_sink = False
        for q in range(n):
            for letter in self.alphabet:
                if not dfa.targets(q, letter):
                    transitions.append((q, letter, sink))
                    used_sink = True
        if used_sink or n == 0:
            for letter in self.alphabet:
                transitions.append((sink, letter, sink))
            return FiniteAutomaton(self.alphabet, n + 1,
                                   dfa.initial if n else [sink],
                                   dfa.accepting, transitions)
        return dfa

    def complement(self) -> "FiniteAutomaton":
        total = self.complete()
        accepting = [q for q in range(total.n_states) if q not in set(total.accepting)]
        return FiniteAutomaton(self.alphabet, total.n_states, total.initial,
                               accepting, total.transitions())

    # -- queries ----------------------------------------------------------------

    def member(self, word: str) -> bool:
        """Exact membership of a word in the language."""
        self.alphabet.validate_word(word)
        dfa = self.determinize()
        if not dfa.initial:
            return False
        q = dfa.initial[0]
        for ch in word:
            targets = dfa.targets(q, ch)
            if not targets:
                return False
            q = targets[0]
        return q in set(dfa.accepting)

    def enumerate_words(self, max_len: int) -> list[str]:
        """All accepted words of length at most ``max_len``, shortest first and
        lexicographic by alphabet declaration order within each length."""
        if max_len < 0:
            raise AutomatonError("max_len must be non-negative")
        dfa = self.trim_dfa()
        out: list[str] = []
        if dfa.n_states == 0:
            return out
        accepting = set(dfa.accepting)
        stratum: list[tuple[int, str]] = [(dfa.initial[0], "")]
        if dfa.initial[0] in accepting:
            out.append("")
        for _ in range(max_len):
            nxt: list[tuple[int, str]] = []
            for q, w in stratum:
                for letter in self.alphabet:
                    for t in dfa.targets(q, letter):
                        word = w + letter
                        nxt.append((t, word))
                        if t in accepting:
                            out.append(word)
            stratum = nxt
            if not stratum:
                break
        return out

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "states": self.n_states,
            "initial": list(self.initial),
            "accepting": list(self.accepting),
            "transitions": [[s, letter, t] for s, letter, t in self.transitions()],
        }

    @classmethod
    def from_json(cls, data: dict, alphabet: GeneratorAlphabet) -> "FiniteAutomaton":
        try:
            n = data["states"]
            initial = data["initial"]
            accepting = data["accepting"]
            transitions = [(int(s), str(letter), int(t))
                           for s, letter, t in data["transitions"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise AutomatonError(f"malformed automaton data: {exc}") from exc
        return cls(alphabet, n, initial, accepting, transitions)

    def __repr__(self) -> str:
        return (f"FiniteAutomaton(states={self.n_states}, "
                f"initial={list(self.initial)}, accepting={list(self.accepting)})")


# -- module-level operations ----------------------------------------------------


def compile_regex(regex: str | Regex, alphabet: GeneratorAlphabet) -> FiniteAutomaton:
    """Thompson construction from a regex (text or syntax tree)."""
    node = parse_regex(regex, alphabet) if isinstance(regex, str) else regex
    transitions: list[tuple[int, str, int]] = []
    counter = [0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    def build(n: Regex) -> tuple[int, int]:
        if isinstance(n, Eps):
            s = fresh()
            return s, s
        if isinstance(n, Lit):
            s, t = fresh(), fresh()
            transitions.append((s, n.letter, t))
            return s, t
        if isinstance(n, Cat):
            s1, t1 = build(n.left)
            s2, t2 = build(n.right)
            transitions.append((t1, EPSILON, s2))
            return s1, t2
        if isinstance(n, Alt):
            s, t = fresh(), fresh()
            s1, t1 = build(n.left)
            s2, t2 = build(n.right)
            transitions.extend([(s, EPSILON, s1), (s, EPSILON, s2),
                                (t1, EPSILON, t), (t2, EPSILON, t)])
            return s, t
        if isinstance(n, Star):
            s, t = fresh(), fresh()
            s1, t1 = build(n.inner)
            transitions.extend([(s, EPSILON, s1), (s, EPSILON, t),
                                (t1, EPSILON, s1), (t1, EPSILON, t)])
            return s, t
        raise RegexError(f"unknown regex node {n!r}")

    start, end = build(node)
    return FiniteAutomaton(alphabet, counter[0], [start], [end], transitions)


def product(a: FiniteAutomaton, b: FiniteAutomaton) -> FiniteAutomaton:
    """Automaton for the intersection of the two languages."""
    _require_same_alphabet(a, b)
    da, db = a.determinize(), b.determinize()
    if not da.initial or not db.initial:
        return FiniteAutomaton(a.alphabet, 0, [], [], [])
    start = (da.initial[0], db.initial[0])
    ids = {start: 0}
    order = [start]
    transitions: list[tuple[int, str, int]] = []
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        src = ids[(p, q)]
        for letter in a.alphabet:
            tp = da.targets(p, letter)
            tq = db.targets(q, letter)
            if not tp or not tq:
                continue
            dst = (tp[0], tq[0])
            if dst not in ids:
                ids[dst] = len(order)
                order.append(dst)
                queue.append(dst)
            transitions.append((src, letter, ids[dst]))
    acc_a, acc_b = set(da.accepting), set(db.accepting)
    accepting = [ids[s] for s in order if s[0] in acc_a and s[1] in acc_b]
    return FiniteAutomaton(a.alphabet, len(order), [0], accepting, transitions)


def is_empty(a: FiniteAutomaton) -> bool:
    return a.trim_dfa().n_states == 0


def equivalent(a: FiniteAutomaton, b: FiniteAutomaton) -> bool:
    """Language equality via emptiness of the symmetric difference."""
    _require_same_alphabet(a, b)
    da, db = a.complete(), b.complete()
    acc_a, acc_b = set(da.accepting), set(db.accepting)
    start = (da.initial[0], db.initial[0])
    seen = {start}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        if (p in acc_a) != (q in acc_b):
            return False
        for letter in a.alphabet:
            dst = (da.targets(p, letter)[0], db.targets(q, letter)[0])
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    return True


def reverse_invert_word(word: str, alphabet: GeneratorAlphabet) -> str:
    """Reverse the word and invert each letter (an involution on words)."""
    return alphabet.reverse_invert_word(word)


def reverse_invert(a: FiniteAutomaton) -> FiniteAutomaton:
    """Automaton for the reversal-inversion of the language: reverse every
    transition, relabel it with the inverse letter, and swap the roles of the
    initial and accepting states."""
    transitions = []
    for src, letter, dst in a.transitions():
        inv = EPSILON if letter == EPSILON else a.alphabet.inverse(letter)
        transitions.append((dst, inv, src))
    return FiniteAutomaton(a.alphabet, a.n_states, a.accepting, a.initial, transitions)


def loop_language(a: FiniteAutomaton, state: int) -> FiniteAutomaton:
    """Language of labels of nonempty closed walks at a state of ``trim(a)``.

    Built by cloning the state into a fresh entry copy (outgoing edges) and a
    fresh exit copy (incoming edges); the original state stays so walks may
    pass through it.  The empty word is never accepted.
    """
    t = a.trim()
    if not 0 <= state < t.n_states:
        raise AutomatonError(f"state {state} not in the trimmed automaton "
                             f"(it has {t.n_states} states)")
    entry = t.n_states
    exit_ = t.n_states + 1
    transitions = list(t.transitions())
    for src, letter, dst in t.transitions():
        if src == state:
            transitions.append((entry, letter, dst))
        if dst == state:
            transitions.append((src, letter, exit_))
        if src == state and dst == state:
            transitions.append((entry, letter, exit_))
    return FiniteAutomaton(t.alphabet, t.n_states + 2, [entry], [exit_], transitions)


def _require_same_alphabet(a: FiniteAutomaton, b: FiniteAutomaton) -> None:
    if a.alphabet != b.alphabet:
        raise AutomatonError("automata are over different alphabets")
