"""Deciding whether the representation map of a structure is finite-to-one.

The map is infinite-to-one exactly when some collection of cycles of the
trimmed automaton, all attached to one accepting path, admits a non-trivial
non-negative combination whose total image is the identity: pumping those
cycles in lockstep produces unboundedly many words with the same image.

Backend-specific decision procedures:

* free abelian - exact rational feasibility of a zero-weight circulation
  supported on the cyclic strongly connected components of one chain of the
  condensation order (complete);
* finite table - cycle detection on the product of the automaton with the
  Cayley action (complete);
* free group - empty-word saturation for identity-labelled cycles plus a
  bounded search for conjugate cycle pairs (sound; UNKNOWN when neither a
  certificate nor a witness is found).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .automata import EPSILON, FiniteAutomaton, loop_language
from .errors import AutomatonError, GroupError
from .groups import (Element, FiniteTableBackend, FreeAbelianBackend,
                     FreeGroupBackend, GroupBackend)

# Caps for the bounded free-group searches.
_LOOP_WORD_CAP = 6
_CONNECTOR_CAP = 6
_WITNESS_RAW_CAP = 64


@dataclass(frozen=True)
class PumpWitness:
    """A pumping family certifying that the map is infinite-to-one.

    ``components`` are (cycle label, base state) pairs and ``skeleton`` the
    connecting words around them; ``word(t)`` interleaves them with every
    cycle repeated ``t`` times.  All members share one image.
    """

    components: tuple[tuple[str, int], ...]
    skeleton: tuple[str, ...]

    def word(self, t: int) -> str:
        parts = [self.skeleton[0]]
        for (label, _), conn in zip(self.components, self.skeleton[1:]):
            parts.append(label * t)
            parts.append(conn)
        return "".join(parts)

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.components)


@dataclass(frozen=True)
class FinitenessResult:
    status: str                      # "finite" | "infinite" | "unknown"
    witness: PumpWitness | None
    detail: dict


def finite_to_one_analysis(dfa: FiniteAutomaton,
                           backend: GroupBackend) -> FinitenessResult:
    """Decide finite-to-one-ness of the map on the language of a trimmed DFA."""
    if dfa.n_states == 0:
        return FinitenessResult("finite", None, {"reason": "empty language"})
    if isinstance(backend, FreeAbelianBackend):
        return _abelian_analysis(dfa, backend)
    if isinstance(backend, FiniteTableBackend):
        return _table_analysis(dfa, backend)
    if isinstance(backend, FreeGroupBackend):
        return _free_analysis(dfa, backend)
    raise GroupError(f"unsupported backend kind {backend.kind!r}")


# -- graph helpers -------------------------------------------------------------


def _edges(dfa: FiniteAutomaton) -> list[tuple[int, str, int]]:
    return dfa.transitions()


def strongly_connected_components(n: int,
                                  adj: dict[int, list[int]]) -> list[list[int]]:
    """Iterative Tarjan; components are returned in topological order."""
    index = [0]
    idx: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components: list[list[int]] = []

    for root in range(n):
        if root in idx:
            continue
        work = [(root, iter(adj.get(root, ())))]
        idx[root] = low[root] = index[0]
        index[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in idx:
                    idx[w] = low[w] = index[0]
                    index[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], idx[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == idx[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(sorted(comp))
    # Tarjan yields reverse topological order.
    components.reverse()
    return components


def _shortest_word(dfa: FiniteAutomaton, sources: list[int],
                   targets: set[int]) -> str | None:
    """Shortest word (lexicographic tie-break) along a path between state sets."""
    seen = set(sources)
    queue = deque((s, "") for s in sources)
    while queue:
        q, w = queue.popleft()
        if q in targets:
            return w
        for letter in dfa.alphabet:
            for t in dfa.targets(q, letter):
                if t not in seen:
                    seen.add(t)
                    queue.append((t, w + letter))
    return None


def _canonical_rotation(tour: list[tuple[int, str, int]],
                        alphabet) -> tuple[str, int]:
    """Rotate a closed edge walk so its label is lexicographically least; returns
    the label and the state the rotated walk starts at."""
    n = len(tour)
    best = None
    best_start = -1
    for r in range(n):
        key = tuple(alphabet.index(tour[(r + i) % n][1]) for i in range(n))
        if best is None or key < best:
            best = key
            best_start = r
    label = "".join(tour[(best_start + i) % n][1] for i in range(n))
    return label, tour[best_start][0]


# -- exact rational LP feasibility ----------------------------------------------


def lp_feasible(rows: list[list[Fraction]],
                rhs: list[Fraction]) -> list[Fraction] | None:
    """Find x >= 0 with rows.x = rhs, or None.  Phase-one simplex with Bland's
    rule; all arithmetic is exact rational."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    tab = []
    for i in range(m):
        row = [Fraction(v) for v in rows[i]]
        b = Fraction(rhs[i])
        if b < 0:
            row = [-v for v in row]
            b = -b
        art = [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        tab.append(row + art + [b])
    basis = [n + i for i in range(m)]
    width = n + m
    # Objective row for minimizing the artificial sum.
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            obj[j] -= tab[i][j]
    for i in range(m):
        obj[n + i] = Fraction(0)

    while True:
        enter = -1
        for j in range(width):
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best: Fraction | None = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][width] / tab[i][enter]
                if best is None or ratio < best or (ratio == best
                                                    and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            # Unbounded phase-one cannot happen (objective bounded below by 0),
            # but guard anyway.
            return None
        pivot = tab[leave][enter]
        tab[leave] = [v / pivot for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [a - f * b for a, b in zip(obj, tab[leave])]
        basis[leave] = enter

    if obj[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][width]
    return x


# -- free abelian backend ---------------------------------------------------------


def _abelian_analysis(dfa: FiniteAutomaton,
                      backend: FreeAbelianBackend) -> FinitenessResult:
    edges = _edges(dfa)
    adj: dict[int, list[int]] = {}
    for src, _, dst in edges:
        adj.setdefault(src, []).append(dst)
    for v in adj:
        adj[v] = sorted(set(adj[v]))
    comps = strongly_connected_components(dfa.n_states, adj)
    scc_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            scc_of[v] = ci
    intra: dict[int, list[int]] = {ci: [] for ci in range(len(comps))}
    for ei, (src, _, dst) in enumerate(edges):
        if scc_of[src] == scc_of[dst]:
            intra[scc_of[src]].append(ei)
    cyclic = sorted(ci for ci, es in intra.items() if es)
    if not cyclic:
        return FinitenessResult("finite", None, {"reason": "acyclic automaton"})

    reach = _scc_reachability(len(comps), edges, scc_of)
    chains = _maximal_chains(cyclic, reach)
    for chain in chains:
        edge_ids = sorted(ei for ci in chain for ei in intra[ci])
        flow = _zero_circulation(edge_ids, edges, backend)
        if flow is None:
            continue
        edge_ids = _minimize_support(edge_ids, flow, edges, backend)
        flow = _zero_circulation(edge_ids, edges, backend)
        assert flow is not None
        witness = _circulation_witness(edge_ids, flow, edges, dfa, scc_of, reach)
        return FinitenessResult("infinite", witness,
                                {"chain_size": len(chain)})
    return FinitenessResult(
        "finite", None,
        {"reason": "no zero-weight circulation on any chain of components",
         "chains_checked": len(chains)})


def _scc_reachability(n_comps: int, edges, scc_of) -> list[set[int]]:
    dag: dict[int, set[int]] = {ci: set() for ci in range(n_comps)}
    for src, _, dst in edges:
        a, b = scc_of[src], scc_of[dst]
        if a != b:
            dag[a].add(b)
    reach: list[set[int]] = [set() for _ in range(n_comps)]
    # Components arrive in topological order, so sweep backwards.
    for ci in range(n_comps - 1, -1, -1):
        r = {ci}
        for nb in dag[ci]:
            r |= reach[nb]
        reach[ci] = r
    return reach


def _maximal_chains(cyclic: list[int], reach: list[set[int]]) -> list[list[int]]:
    """Maximal chains of cyclic components under the reachability order."""
    below = {c: [d for d in cyclic if d != c and c in reach[d]] for c in cyclic}
    above = {c: [d for d in cyclic if d != c and d in reach[c]] for c in cyclic}
    chains: list[list[int]] = []
    roots = sorted(c for c in cyclic if not below[c])

    def extend(chain: list[int]) -> None:
        last = chain[-1]
        # Step only to covers: successors with no cyclic component in between.
        nexts = [d for d in above[last]
                 if not any(d in above[e] for e in above[last] if e != d)]
        if not nexts:
            chains.append(chain)
            return
        for d in sorted(nexts):
            extend(chain + [d])

    for r in roots:
        extend([r])
    return chains


def _zero_circulation(edge_ids: list[int], edges, backend) -> list[Fraction] | None:
    """Non-negative flow on the given edges: conserved at every vertex, total
    image zero, total mass one."""
    if not edge_ids:
        return None
    vertices = sorted({edges[ei][0] for ei in edge_ids}
                      | {edges[ei][2] for ei in edge_ids})
    vrow = {v: i for i, v in enumerate(vertices)}
    rank = backend.rank
    n = len(edge_ids)
    m = len(vertices) + rank + 1
    rows = [[Fraction(0)] * n for _ in range(m)]
    rhs = [Fraction(0)] * m
    for col, ei in enumerate(edge_ids):
        src, letter, dst = edges[ei]
        rows[vrow[src]][col] += 1
        rows[vrow[dst]][col] -= 1
        w = backend.image(letter)
        for i in range(rank):
            rows[len(vertices) + i][col] += w[i]
        rows[m - 1][col] = Fraction(1)
    rhs[m - 1] = Fraction(1)
    return lp_feasible(rows, rhs)


def _minimize_support(edge_ids: list[int], flow: list[Fraction],
                      edges, backend) -> list[int]:
    """Greedily drop edges while a zero circulation still exists, producing an
    inclusion-minimal, deterministic support."""
    current = [ei for ei, f in zip(edge_ids, flow) if f > 0]
    for ei in list(current):
        trial = [e for e in current if e != ei]
        sol = _zero_circulation(trial, edges, backend)
        if sol is not None:
            current = [e for e, f in zip(trial, sol) if f > 0]
    return current


def _circulation_witness(edge_ids: list[int], flow: list[Fraction], edges,
                         dfa: FiniteAutomaton, scc_of, reach) -> PumpWitness:
    denom = 1
    for f in flow:
        denom = denom * f.denominator // _gcd(denom, f.denominator)
    mult = {ei: int(f * denom) for ei, f in zip(edge_ids, flow) if f > 0}
    components = _euler_components(mult, edges, dfa.alphabet)
    # Order components along the chain so consecutive base states are connected.
    components.sort(key=lambda item: (_topo_key(item[1], scc_of), item[1]))
    skeleton = [_req_word(dfa, list(dfa.initial), {components[0][1]})]
    for (_, a), (_, b) in zip(components, components[1:]):
        skeleton.append(_req_word(dfa, [a], {b}))
    skeleton.append(_req_word(dfa, [components[-1][1]], set(dfa.accepting)))
    return PumpWitness(tuple(components), tuple(skeleton))


def _topo_key(state: int, scc_of) -> int:
    return scc_of[state]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _req_word(dfa, sources, targets) -> str:
    w = _shortest_word(dfa, sources, targets)
    if w is None:
        raise AutomatonError("witness components are not connected by the automaton")
    return w


def _euler_components(mult: dict[int, int], edges,
                      alphabet) -> list[tuple[str, int]]:
    """Split a conserved integer flow into closed walks, one per connected
    component of its support, each labelled canonically."""
    remaining = {ei: m for ei, m in mult.items() if m > 0}
    out_edges: dict[int, list[int]] = {}
    for ei in sorted(remaining):
        out_edges.setdefault(edges[ei][0], []).append(ei)
    for v in out_edges:
        out_edges[v].sort(key=lambda ei: (alphabet.index(edges[ei][1]), edges[ei][2]))
    components: list[tuple[str, int]] = []
    while remaining:
        start = min(edges[ei][0] for ei in remaining)
        tour = _hierholzer(start, remaining, out_edges, edges)
        label, base = _canonical_rotation(tour, alphabet)
        components.append((label, base))
    return components


def _hierholzer(start: int, remaining: dict[int, int], out_edges, edges):
    def next_edge(v: int) -> int | None:
        for ei in out_edges.get(v, ()):
            if remaining.get(ei, 0) > 0:
                return ei
        return None

    circuit: list[tuple[int, str, int]] = []
    v = start
    walk: list[int] = []
    while True:
        ei = next_edge(v)
        if ei is not None:
            remaining[ei] -= 1
            if remaining[ei] == 0:
                del remaining[ei]
            walk.append(ei)
            v = edges[ei][2]
            continue
        # Backtrack: splice completed loops into the circuit.
        if not walk:
            break
        circuit.append(edges[walk[-1]])
        v = edges[walk[-1]][0]
        walk.pop()
    circuit.reverse()
    return circuit


# -- finite table backend ----------------------------------------------------------


def _table_analysis(dfa: FiniteAutomaton,
                    backend: FiniteTableBackend) -> FinitenessResult:
    start = (dfa.initial[0], backend.identity())
    ids = {start: 0}
    order = [start]
    adj: dict[int, list[tuple[int, str]]] = {}
    queue = deque([start])
    while queue:
        q, g = queue.popleft()
        src = ids[(q, g)]
        for letter in dfa.alphabet:
            for t in dfa.targets(q, letter):
                node = (t, backend.multiply(g, backend.image(letter)))
                if node not in ids:
                    ids[node] = len(order)
                    order.append(node)
                    queue.append(node)
                adj.setdefault(src, []).append((ids[node], letter))
    plain = {v: sorted({w for w, _ in nbrs}) for v, nbrs in adj.items()}
    comps = strongly_connected_components(len(order), plain)
    for comp in comps:
        has_cycle = len(comp) > 1 or any(
            w == comp[0] for w, _ in adj.get(comp[0], ()))
        if not has_cycle:
            continue
        base = comp[0]
        tour = _product_cycle(base, adj, set(comp))
        label, start_idx = _canonical_rotation(
            [(edges_src, letter, edges_dst) for edges_src, letter, edges_dst in tour],
            dfa.alphabet)
        base_state = order[start_idx][0]
        u0 = _req_word_product(dfa, backend, order, ids, start_idx)
        u1 = _req_word(dfa, [base_state], set(dfa.accepting))
        return FinitenessResult(
            "infinite", PumpWitness(((label, base_state),), (u0, u1)),
            {"product_states": len(order)})
    return FinitenessResult(
        "finite", None,
        {"reason": "product of the automaton with the group action is acyclic",
         "product_states": len(order)})


def _product_cycle(base: int, adj, comp: set[int]) -> list[tuple[int, str, int]]:
    """Shortest closed walk at ``base`` within one strongly connected component."""
    parent: dict[int, tuple[int, str]] = {}
    queue = deque([base])
    seen = {base}
    closing: tuple[int, str] | None = None
    while queue and closing is None:
        v = queue.popleft()
        for w, letter in adj.get(v, ()):
            if w not in comp:
                continue
            if w == base:
                closing = (v, letter)
                break
            if w not in seen:
                seen.add(w)
                parent[w] = (v, letter)
                queue.append(w)
    assert closing is not None
    v, letter = closing
    rev: list[tuple[int, str, int]] = [(v, letter, base)]
    while v != base:
        p, plet = parent[v]
        rev.append((p, plet, v))
        v = p
    rev.reverse()
    return rev


def _req_word_product(dfa, backend, order, ids, target_idx) -> str:
    """Shortest word from the initial product node to a given product node."""
    start = (dfa.initial[0], backend.identity())
    seen = {ids[start]}
    queue = deque([(ids[start], "")])
    while queue:
        v, w = queue.popleft()
        if v == target_idx:
            return w
        q, g = order[v]
        for letter in dfa.alphabet:
            for t in dfa.targets(q, letter):
                node = (t, backend.multiply(g, backend.image(letter)))
                nid = ids[node]
                if nid not in seen:
                    seen.add(nid)
                    queue.append((nid, w + letter))
    raise AutomatonError("product node unreachable")


# -- free group backend -------------------------------------------------------------


def _faithful(backend: FreeGroupBackend) -> bool:
    values = list(backend.images.values())
    letters = {(i,) for i in range(1, backend.rank + 1)}
    letters |= {(-i,) for i in range(1, backend.rank + 1)}
    return set(values) == letters and len(set(values)) == len(values)


def _free_analysis(dfa: FiniteAutomaton,
                   backend: FreeGroupBackend) -> FinitenessResult:
    edges = _edges(dfa)
    adj: dict[int, list[int]] = {}
    for src, _, dst in edges:
        adj.setdefault(src, []).append(dst)
    acyclic = not any(
        len(c) > 1 or c[0] in adj.get(c[0], [])
        for c in strongly_connected_components(
            dfa.n_states, {v: sorted(set(ts)) for v, ts in adj.items()}))
    if acyclic:
        return FinitenessResult("finite", None, {"reason": "acyclic automaton"})

    if not _faithful(backend):
        return FinitenessResult(
            "unknown", None,
            {"reason": "free-group analysis requires the symbols to map "
                       "bijectively onto the generators and their inverses"})

    # An identity-labelled cycle at any state gives a one-cycle pump.
    for q in range(dfa.n_states):
        loops = loop_language(dfa, q)
        if _accepts_identity(loops):
            label = _word_with_value(loops, backend, backend.identity())
            label, base = _rebase_cycle(dfa, q, label)
            u0 = _req_word(dfa, list(dfa.initial), {base})
            u1 = _req_word(dfa, [base], set(dfa.accepting))
            return FinitenessResult(
                "infinite", PumpWitness(((label, base),), (u0, u1)),
                {"method": "identity cycle"})

    if not _has_cancelling_factor(dfa, backend):
        return FinitenessResult(
            "finite", None,
            {"reason": "all accepted words are freely reduced, so the map is "
                       "injective on the language"})

    pair = _conjugate_pair_scan(dfa, backend)
    if pair is not None:
        return FinitenessResult("infinite", pair, {"method": "conjugate cycle pair"})
    return FinitenessResult(
        "unknown", None,
        {"reason": "no identity cycle; bounded conjugate-pair search found "
                   "nothing",
         "loop_word_cap": _LOOP_WORD_CAP, "connector_cap": _CONNECTOR_CAP})


def _rebase_cycle(dfa: FiniteAutomaton, q: int, label: str) -> tuple[str, int]:
    """Choose the lexicographically least rotation of a cycle word that is still
    a closed walk in the DFA, together with its base state."""
    best: tuple[tuple[int, ...], str, int] | None = None
    for r in range(len(label)):
        rotated = label[r:] + label[:r]
        state = _walk(dfa, q, label[:r])
        if state is None:
            continue
        if _walk(dfa, state, rotated) == state:
            key = tuple(dfa.alphabet.index(ch) for ch in rotated)
            if best is None or key < best[0]:
                best = (key, rotated, state)
    assert best is not None
    return best[1], best[2]


def _walk(dfa: FiniteAutomaton, q: int, word: str) -> int | None:
    for ch in word:
        targets = dfa.targets(q, ch)
        if not targets:
            return None
        q = targets[0]
    return q


def _saturate(auto: FiniteAutomaton) -> set[tuple[int, int]]:
    """Empty-word saturation: the pairs (p, q) joined by some word whose free
    reduction is empty (including the empty word itself)."""
    n = auto.n_states
    eps: set[tuple[int, int]] = {(p, p) for p in range(n)}
    letter_edges: list[tuple[int, str, int]] = []
    for src, letter, dst in auto.transitions():
        if letter == EPSILON:
            eps.add((src, dst))
        else:
            letter_edges.append((src, letter, dst))
    by_letter: dict[str, list[tuple[int, int]]] = {}
    for src, letter, dst in letter_edges:
        by_letter.setdefault(letter, []).append((src, dst))

    def close() -> None:
        changed = True
        while changed:
            changed = False
            for (a, b) in list(eps):
                for (c, d) in list(eps):
                    if b == c and (a, d) not in eps:
                        eps.add((a, d))
                        changed = True

    close()
    changed = True
    while changed:
        changed = False
        for letter, pairs in by_letter.items():
            inv = auto.alphabet.inverse(letter)
            for (p, r) in pairs:
                for (s, t) in by_letter.get(inv, ()):
                    if (r, s) in eps and (p, t) not in eps:
                        eps.add((p, t))
                        changed = True
        if changed:
            close()
    return eps


def _accepts_identity(auto: FiniteAutomaton) -> bool:
    """Whether some accepted word evaluates to the identity."""
    eps = _saturate(auto)
    acc = set(auto.accepting)
    return any((i, f) in eps for i in auto.initial for f in acc)


def _word_with_value(auto: FiniteAutomaton, backend: FreeGroupBackend,
                     value: Element) -> str:
    """Shortest accepted word with the given image, by breadth-first search over
    (state, reduced value) pairs.  Only called once existence is certain."""
    acc = set(auto.accepting)
    start_nodes = [(q, backend.identity()) for q in auto.initial]
    seen = set(start_nodes)
    queue = deque((node, "") for node in start_nodes)
    while queue:
        (q, g), w = queue.popleft()
        if q in acc and g == value and w != "":
            return w
        if len(w) >= _WITNESS_RAW_CAP:
            continue
        for letter in auto.alphabet:
            img = backend.image(letter)
            for t in auto.targets(q, letter):
                node = (t, backend.multiply(g, img))
                if node not in seen:
                    seen.add(node)
                    queue.append((node, w + letter))
        for t in auto.targets(q, EPSILON):
            node = (t, g)
            if node not in seen:
                seen.add(node)
                queue.append((node, w))
    raise AutomatonError("no witness word below the search cap")


def _has_cancelling_factor(dfa: FiniteAutomaton,
                           backend: FreeGroupBackend) -> bool:
    """Whether the language contains a word with an adjacent cancelling pair."""
    for q in range(dfa.n_states):
        for letter in dfa.alphabet:
            for t in dfa.targets(q, letter):
                if dfa.targets(t, dfa.alphabet.inverse(letter)):
                    return True
    return False


def _conjugate_pair_scan(dfa: FiniteAutomaton,
                         backend: FreeGroupBackend) -> PumpWitness | None:
    """Bounded search for cycles c1 at q1 and c2 at q2 with a connector m such
    that the image of c2 equals m^-1 c1^-1 m; pumping both in lockstep then
    fixes the image of the word."""
    reach = _state_reachability(dfa)
    loops_cache: dict[int, FiniteAutomaton] = {}
    words_cache: dict[int, list[str]] = {}

    def loops(q: int) -> FiniteAutomaton:
        if q not in loops_cache:
            loops_cache[q] = loop_language(dfa, q)
        return loops_cache[q]

    def loop_words(q: int) -> list[str]:
        if q not in words_cache:
            words_cache[q] = [w for w in loops(q).enumerate_words(_LOOP_WORD_CAP)
                              if backend.evaluate(w) != backend.identity()]
        return words_cache[q]

    for q1 in range(dfa.n_states):
        for q2 in sorted(reach[q1]):
            connectors = _connecting_words(dfa, q1, q2)
            if not connectors:
                continue
            for c1 in loop_words(q1):
                v1 = backend.evaluate(c1)
                for m in connectors:
                    vm = backend.evaluate(m)
                    target = backend.multiply(
                        backend.multiply(backend.inverse(vm), backend.inverse(v1)), vm)
                    if target == backend.identity():
                        continue
                    if _value_in_language(loops(q2), backend, target):
                        c2 = _word_with_value(loops(q2), backend, target)
                        u0 = _req_word(dfa, list(dfa.initial), {q1})
                        u1 = _req_word(dfa, [q2], set(dfa.accepting))
                        return PumpWitness(((c1, q1), (c2, q2)), (u0, m, u1))
    return None


def _state_reachability(dfa: FiniteAutomaton) -> list[set[int]]:
    reach: list[set[int]] = []
    for q in range(dfa.n_states):
        seen = {q}
        queue = deque([q])
        while queue:
            v = queue.popleft()
            for letter in dfa.alphabet:
                for t in dfa.targets(v, letter):
                    if t not in seen:
                        seen.add(t)
                        queue.append(t)
        reach.append(seen)
    return reach


def _connecting_words(dfa: FiniteAutomaton, q1: int, q2: int) -> list[str]:
    """Words labelling paths from q1 to q2, up to the connector cap."""
    sub = FiniteAutomaton(dfa.alphabet, dfa.n_states, [q1], [q2],
                          dfa.transitions())
    return sub.enumerate_words(_CONNECTOR_CAP)


def _value_in_language(auto: FiniteAutomaton, backend: FreeGroupBackend,
                       value: Element) -> bool:
    """Exact membership of a group element in the image of a regular language,
    via saturation of the language concatenated with the inverse element."""
    spelled = _spell(backend, backend.inverse(value))
    n = auto.n_states
    transitions = list(auto.transitions())
    prev = list(auto.accepting)
    state = n
    for ch in spelled:
        for p in prev:
            transitions.append((p, ch, state))
        prev = [state]
        state += 1
    ext = FiniteAutomaton(auto.alphabet, state, auto.initial, prev, transitions)
    eps = _saturate(ext)
    acc = set(ext.accepting)
    return any((i, f) in eps for i in ext.initial for f in acc)


def _spell(backend: FreeGroupBackend, g: Element) -> str:
    """A word over the alphabet evaluating to g (faithful images required)."""
    rev = {v: s for s, v in backend.images.items()}
    return "".join(rev[(c,)] for c in g)
