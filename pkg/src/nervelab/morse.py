"""Discrete Morse machinery: vector fields, gradient (acyclicity) checks,
V-path and element heights, stratified collapse execution, and a greedy
random collapsibility certifier.

The modified Hasse diagram points from each simplex down to its facets,
except matched pairs which point up; a field is a gradient field iff this
digraph is acyclic.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Sequence

from .complexes import SimplicialComplex, Simplex
from .errors import InternalInconsistencyError, SchemaError


class DiscreteVectorField:
    """A partition of a complex into facet-coface pairs and critical simplices."""

    __slots__ = ("complex", "pairs", "critical", "partner")

    def __init__(self, K: SimplicialComplex, pairs: Iterable[tuple],
                 critical: Iterable[Simplex]):
        self.complex = K
        self.pairs = frozenset((tuple(t), tuple(s)) for t, s in pairs)
        self.critical = frozenset(tuple(s) for s in critical)
        self.partner = {}
        for t, s in self.pairs:
            self.partner[t] = s
            self.partner[s] = t

    def to_json(self) -> dict:
        return {
            "pairs": [[list(t), list(s)] for t, s in sorted(self.pairs)],
            "critical": [list(s) for s in sorted(self.critical, key=lambda s: (len(s), s))],
        }

    @classmethod
    def all_critical(cls, K: SimplicialComplex) -> "DiscreteVectorField":
        return cls(K, (), K.simplices)


def is_vector_field(K: SimplicialComplex, V: DiscreteVectorField) -> bool:
    """Partition and facet conditions: every simplex exactly once, each pair
    is (facet, coface) with a dimension gap of one."""
    seen: set = set()
    for t, s in V.pairs:
        if t not in K.simplices or s not in K.simplices:
            return False
        if len(s) != len(t) + 1 or not set(t) < set(s):
            return False
        if t in seen or s in seen or t == s:
            return False
        seen.update((t, s))
    for c in V.critical:
        if c not in K.simplices or c in seen:
            return False
        seen.add(c)
    return seen == set(K.simplices)


def _modified_hasse(K: SimplicialComplex, V: DiscreteVectorField) -> dict:
    """Adjacency of the modified Hasse diagram: facet arcs point down unless
    the pair is in V, in which case the arc is reversed (facet -> coface)."""
    adj: dict = {s: [] for s in K.simplices}
    for s in K.simplices:
        if len(s) == 1:
            continue
        for t in combinations(s, len(s) - 1):
            if (t, s) in V.pairs:
                adj[t].append(s)
            else:
                adj[s].append(t)
    return adj


def _has_cycle(adj: dict) -> bool:
    """Iterative three-color DFS; recursion depth must not bound instance size."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in adj}
    for root in adj:
        if color[root] != WHITE:
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GRAY:
                    return True
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return False


def is_gradient(K: SimplicialComplex, V: DiscreteVectorField) -> bool:
    """True iff the modified Hasse diagram has no directed cycle."""
    if not is_vector_field(K, V):
        raise SchemaError("not a discrete vector field")
    return not _has_cycle(_modified_hasse(K, V))


def v_path_height(K: SimplicialComplex, V: DiscreteVectorField, sigma: Simplex) -> int:
    """Longest V-path length starting at sigma: each step follows the matched
    coface and exits through one of its other facets.  Iterative DFS with an
    explicit stack; a dependency cycle (closed V-path) raises."""
    sigma = tuple(sigma)
    if sigma not in K.simplices:
        raise SchemaError(f"{sigma} is not a simplex")

    def deps(t):
        mu = V.partner.get(t)
        if mu is None or len(mu) != len(t) + 1:
            return ()
        return tuple(t2 for t2 in combinations(mu, len(mu) - 1) if t2 != t)

    memo: dict = {}
    onstack: set = set()
    stack = [(sigma, False)]
    while stack:
        t, processed = stack.pop()
        if processed:
            ds = deps(t)
            memo[t] = 1 + max(memo[d] for d in ds) if ds else 0
            onstack.discard(t)
            continue
        if t in memo or t in onstack:
            continue
        onstack.add(t)
        stack.append((t, True))
        for d in deps(t):
            if d in onstack:
                raise SchemaError("closed V-path: field is not a gradient")
            if d not in memo:
                stack.append((d, False))
    return memo[sigma]


def _element_of(V: DiscreteVectorField, s: Simplex):
    mu = V.partner.get(s)
    if mu is None:
        return (s,)
    return (s, mu) if len(mu) > len(s) else (mu, s)


def element_heights(K: SimplicialComplex, V: DiscreteVectorField) -> dict:
    """Longest descending chain below each element of V in the induced order:
    A is below B when some member of A is a proper face of a member of B."""
    elements = sorted({_element_of(V, s) for s in K.simplices})
    idx = {e: i for i, e in enumerate(elements)}
    preds: list = [set() for _ in elements]  # j in preds[i]: element j < element i
    for s in K.simplices:
        if len(s) == 1:
            continue
        ei = idx[_element_of(V, s)]
        for t in combinations(s, len(s) - 1):
            ej = idx[_element_of(V, t)]
            if ej != ei:
                preds[ei].add(ej)
    indeg_order = _topo_order(preds)
    hts = [0] * len(elements)
    for i in indeg_order:
        for j in preds[i]:
            hts[i] = max(hts[i], hts[j] + 1)
    return {e: hts[idx[e]] for e in elements}


def _topo_order(preds: Sequence[set]) -> list:
    n = len(preds)
    succ: list = [[] for _ in range(n)]
    indeg = [0] * n
    for i in range(n):
        for j in preds[i]:
            succ[j].append(i)
            indeg[i] += 1
    order = [i for i in range(n) if indeg[i] == 0]
    head = 0
    while head < len(order):
        i = order[head]
        head += 1
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                order.append(j)
    if len(order) != n:
        raise SchemaError("element order has a cycle: field is not a gradient")
    return order


def element_height(K: SimplicialComplex, V: DiscreteVectorField, A) -> int:
    A = tuple(tuple(s) for s in A)
    hts = element_heights(K, V)
    if A not in hts:
        raise SchemaError(f"{A} is not an element of the vector field")
    return hts[A]


def collapse(K: SimplicialComplex, V: DiscreteVectorField,
             L: SimplicialComplex) -> tuple:
    """Execute the collapse encoded by a gradient field whose critical set is L.

    Pairs are removed stratum by stratum in decreasing element height,
    lexicographically by coface within a stratum.  Each elementary collapse is
    validated: the removed facet must have exactly one proper coface at
    removal time.  Returns (list of (free_facet, coface) steps, final complex).
    """
    if frozenset(L.simplices) != V.critical:
        raise SchemaError("critical set of the field must equal the target subcomplex")
    if not is_gradient(K, V):
        raise SchemaError("field is not a gradient vector field")
    hts = element_heights(K, V)
    pair_elems = [e for e in hts if len(e) == 2]
    pair_elems.sort(key=lambda e: (-hts[e], e[1]))
    current = set(K.simplices)
    trace = []
    for t, s in pair_elems:
        cofaces = [c for c in current if len(c) == len(t) + 1 and set(t) < set(c)]
        if cofaces != [s]:
            raise InternalInconsistencyError(
                f"pair ({t}, {s}) is not free at its stratum: cofaces {sorted(cofaces)}")
        current.discard(t)
        current.discard(s)
        trace.append((t, s))
    final = SimplicialComplex(current)
    if final != L:
        raise InternalInconsistencyError("collapse did not terminate at the critical set")
    return trace, final


def trace_to_json(trace: Sequence[tuple]) -> list:
    return [{"free_facet": list(t), "coface": list(s)} for t, s in trace]


def greedy_gradient_search(K: SimplicialComplex, seeds: Iterable[int] = range(32),
                           stop_when_collapsed: bool = True) -> DiscreteVectorField:
    """Greedy random collapse certifier: per seed, repeatedly remove a free
    facet pair (chosen from the candidates by the seeded generator), declaring
    a maximal simplex critical when stuck.  Returns the field with the fewest
    critical simplices over the seeds tried."""
    best = None
    for seed in seeds:
        rng = random.Random(seed)
        field = _greedy_once(K, rng)
        if best is None or len(field.critical) < len(best.critical):
            best = field
        if stop_when_collapsed and best is not None and len(best.critical) == 1:
            break
    return best if best is not None else DiscreteVectorField.all_critical(K)


def _greedy_once(K: SimplicialComplex, rng: random.Random) -> DiscreteVectorField:
    current = set(K.simplices)
    cofaces: dict = {s: set() for s in current}
    for s in current:
        if len(s) > 1:
            for t in combinations(s, len(s) - 1):
                cofaces[t].add(s)
    pairs = []
    critical = []
    while current:
        free = sorted((t, next(iter(cofaces[t]))) for t in current if len(cofaces[t]) == 1)
        if free:
            t, s = free[rng.randrange(len(free))]
            pairs.append((t, s))
            for x in (t, s):
                current.discard(x)
                if len(x) > 1:
                    for f in combinations(x, len(x) - 1):
                        if f in cofaces:
                            cofaces[f].discard(x)
                cofaces.pop(x, None)
        else:
            maximal = sorted(t for t in current if not cofaces[t])
            c = maximal[rng.randrange(len(maximal))]
            critical.append(c)
            current.discard(c)
            if len(c) > 1:
                for f in combinations(c, len(c) - 1):
                    if f in cofaces:
                        cofaces[f].discard(c)
            cofaces.pop(c, None)
    return DiscreteVectorField(K, pairs, critical)


def collapses_to_point(K: SimplicialComplex, seeds: Iterable[int] = range(32)):
    """A gradient field witnessing collapsibility to a single vertex, or None."""
    if not len(K):
        return None
    field = greedy_gradient_search(K, seeds)
    if len(field.critical) == 1 and len(next(iter(field.critical))) == 1:
        return field
    return None


def modified_hasse_dot(K: SimplicialComplex, V: DiscreteVectorField) -> str:
    """DOT export of the modified Hasse diagram; reversed (matched) arcs are
    highlighted."""
    simps = K.all_simplices()
    idx = {s: i for i, s in enumerate(simps)}
    lines = ["digraph modified_hasse {"]
    for s in simps:
        lines.append(f'  n{idx[s]} [label="{list(s)}"];')
    for s in simps:
        if len(s) == 1:
            continue
        for t in combinations(s, len(s) - 1):
            if (t, s) in V.pairs:
                lines.append(f"  n{idx[t]} -> n{idx[s]} [color=red, penwidth=2];")
            else:
                lines.append(f"  n{idx[s]} -> n{idx[t]};")
    lines.append("}")
    return "\n".join(lines)
