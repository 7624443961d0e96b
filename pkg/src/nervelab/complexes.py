"""Finite abstract simplicial complexes, face posets, flag complexes and
barycentric subdivision, plus exact barycentric coordinate conversions
between a complex and its subdivision.

Vertices are non-negative integers.  A simplex is a strictly increasing
tuple of vertex ids; a complex is a face-closed finite set of simplices.
All types are immutable after construction and safe to share across
threads; every operation is a pure function.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import CHAIN_CAP, ResourceCapError, SchemaError

Simplex = tuple  # strictly increasing tuple of vertex ids


def as_simplex(vertices: Iterable[int]) -> Simplex:
    """Canonicalize an iterable of vertices into a sorted simplex tuple."""
    vs = list(vertices)
    out = tuple(sorted(set(vs)))
    if not out:
        raise SchemaError("a simplex must have at least one vertex")
    if len(out) != len(vs):
        raise SchemaError(f"repeated vertices in simplex {vs}")
    return out


class SimplicialComplex:
    """A finite, face-closed set of simplices."""

    __slots__ = ("_simplices", "_vertices")

    def __init__(self, simplices: Iterable[Simplex]):
        simps = frozenset(tuple(s) for s in simplices)
        for s in simps:
            if not s:
                raise SchemaError("empty simplex not allowed")
            if any(s[i] >= s[i + 1] for i in range(len(s) - 1)):
                raise SchemaError(f"simplex {s} is not strictly increasing")
            if len(s) > 1:
                for facet in combinations(s, len(s) - 1):
                    if facet not in simps:
                        raise SchemaError(f"complex is not face-closed: {facet} missing")
        self._simplices = simps
        self._vertices = tuple(sorted({v for s in simps for v in s}))

    @property
    def simplices(self) -> frozenset:
        return self._simplices

    @property
    def vertices(self) -> tuple:
        return self._vertices

    def __contains__(self, s) -> bool:
        return tuple(s) in self._simplices

    def __len__(self) -> int:
        return len(self._simplices)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.all_simplices())

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._simplices == other._simplices

    def __hash__(self) -> int:
        return hash(self._simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self._simplices)} simplices, dim {self.dim()})"

    def dim(self) -> int:
        """Dimension, or -1 for the empty complex."""
        return max((len(s) for s in self._simplices), default=0) - 1

    def all_simplices(self) -> list:
        return sorted(self._simplices, key=lambda s: (len(s), s))

    def simplices_of_dim(self, n: int) -> list:
        return sorted(s for s in self._simplices if len(s) == n + 1)

    def maximal_simplices(self) -> list:
        out = []
        for s in self._simplices:
            sset = set(s)
            if not any(len(t) > len(s) and sset < set(t) for t in self._simplices):
                out.append(s)
        return sorted(out, key=lambda s: (len(s), s))

    def skeleton(self, k: int) -> "SimplicialComplex":
        return SimplicialComplex(s for s in self._simplices if len(s) <= k + 1)

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self._simplices <= other._simplices

    def star(self, v: int) -> list:
        """Simplices containing the vertex v."""
        return sorted((s for s in self._simplices if v in s), key=lambda s: (len(s), s))

    def to_json(self) -> dict:
        """JSON form listing maximal simplices only; closure is implied."""
        return {
            "vertices": list(self._vertices),
            "simplices": [list(s) for s in self.maximal_simplices()],
        }

    @classmethod
    def from_json(cls, data) -> "SimplicialComplex":
        if not isinstance(data, dict) or "simplices" not in data:
            raise SchemaError("complex JSON must be an object with a 'simplices' list")
        try:
            gens = [as_simplex(s) for s in data["simplices"]]
        except (TypeError, SchemaError) as exc:
            raise SchemaError(f"bad simplex list: {exc}") from exc
        cx = closure(gens)
        extra = [as_simplex([v]) for v in data.get("vertices", []) if (v,) not in cx.simplices]
        if extra:
            cx = SimplicialComplex(cx.simplices | {s for s in extra})
        return cx


def closure(generators: Iterable[Simplex]) -> SimplicialComplex:
    """Smallest face-closed complex containing the generators."""
    out = set()
    for g in generators:
        g = tuple(sorted(set(g)))
        for k in range(1, len(g) + 1):
            out.update(combinations(g, k))
    return SimplicialComplex(out)


EMPTY = SimplicialComplex(())


class SimplicialMap:
    """A vertex map whose image of every simplex (after dedup) is a simplex."""

    __slots__ = ("source", "target", "vertex_map")

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex,
                 vertex_map: Mapping[int, int]):
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        for v in source.vertices:
            if v not in self.vertex_map:
                raise SchemaError(f"vertex {v} has no image")
        for s in source.simplices:
            if self.image_simplex(s) not in target.simplices:
                raise SchemaError(f"image of {s} is not a simplex of the target")

    def image_simplex(self, s: Simplex) -> Simplex:
        return tuple(sorted({self.vertex_map[v] for v in s}))

    def __call__(self, s: Simplex) -> Simplex:
        return self.image_simplex(s)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SimplicialMap) and self.source == other.source
                and self.target == other.target
                and all(self.vertex_map[v] == other.vertex_map[v] for v in self.source.vertices))

    @classmethod
    def identity(cls, K: SimplicialComplex) -> "SimplicialMap":
        return cls(K, K, {v: v for v in K.vertices})

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """self after other (self о other)."""
        if other.target != self.source:
            raise SchemaError("maps are not composable")
        return SimplicialMap(other.source, self.target,
                             {v: self.vertex_map[w] for v, w in other.vertex_map.items()})


class Poset:
    """A finite poset stored as strict cover edges plus reachability bitsets.

    Elements are kept in a canonical sorted order; ``above[i]`` is the bitmask
    of indices strictly greater than element i.
    """

    __slots__ = ("elements", "index", "_above", "_covers", "_name", "_rank")

    def __init__(self, elements: Sequence, covers: Mapping[int, Iterable[int]],
                 name: str = "poset"):
        # covers maps element index -> indices covering it (immediately above)
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise SchemaError("duplicate poset elements")
        n = len(self.elements)
        self._covers = [sorted(covers.get(i, ())) for i in range(n)]
        self._name = name
        self._above = self._reachability()

    def _reachability(self) -> list:
        n = len(self.elements)
        indeg = [0] * n
        for i in range(n):
            for j in self._covers[i]:
                indeg[j] += 1
        order = [i for i in range(n) if indeg[i] == 0]
        head = 0
        while head < len(order):
            i = order[head]
            head += 1
            for j in self._covers[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    order.append(j)
        if len(order) != n:
            raise SchemaError("cover relation has a cycle; not a partial order")
        self._rank = [0] * n
        for pos_, i in enumerate(order):
            self._rank[i] = pos_
        above = [0] * n
        for i in reversed(order):
            acc = 0
            for j in self._covers[i]:
                acc |= above[j] | (1 << j)
            above[i] = acc
        return above

    def chain_order(self, indices: Iterable[int]) -> tuple:
        """Sort mutually comparable element indices into increasing order."""
        return tuple(sorted(indices, key=lambda i: self._rank[i]))

    @classmethod
    def from_leq(cls, elements: Iterable, leq: Callable, name: str = "poset") -> "Poset":
        elems = tuple(sorted(set(elements)))
        n = len(elems)
        above = [[j for j in range(n) if j != i and leq(elems[i], elems[j])] for i in range(n)]
        above_sets = [set(a) for a in above]
        covers: dict[int, list] = {}
        for i in range(n):
            cov = [j for j in above[i]
                   if not any(j in above_sets[k] for k in above[i] if k != j)]
            covers[i] = cov
        return cls(elems, covers, name=name)

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, a, b) -> bool:
        ia, ib = self.index[a], self.index[b]
        return ia == ib or bool(self._above[ia] >> ib & 1)

    def above_mask(self, i: int) -> int:
        return self._above[i]

    def cover_edges(self) -> list:
        return [(self.elements[i], self.elements[j])
                for i in range(len(self.elements)) for j in self._covers[i]]

    def op(self) -> "Poset":
        """The opposite poset (order reversed, same element order)."""
        n = len(self.elements)
        covers: dict[int, list] = {i: [] for i in range(n)}
        for i in range(n):
            for j in self._covers[i]:
                covers[j].append(i)
        return Poset(self.elements, covers, name=self._name + "_op")

    def chains(self, cap: int = CHAIN_CAP, allowed_mask: int | None = None,
               start_mask: int | None = None, max_len: int | None = None) -> list:
        """All non-empty chains (as tuples of element indices, increasing order).

        ``allowed_mask``/``start_mask`` restrict which elements may appear /
        start a chain; ``max_len`` bounds the chain length.  Raises
        ResourceCapError beyond ``cap`` chains.
        """
        n = len(self.elements)
        full = (1 << n) - 1
        allowed = full if allowed_mask is None else allowed_mask
        start = allowed if start_mask is None else (start_mask & allowed)
        out: list = []
        above = self._above
        stack: list = []
        for i in range(n):
            if not (start >> i) & 1:
                continue
            stack.append(((i,), above[i] & allowed))
            while stack:
                chain, cand = stack.pop()
                out.append(chain)
                if len(out) > cap:
                    raise ResourceCapError(f"chain enumeration exceeded cap {cap}")
                if max_len is not None and len(chain) >= max_len:
                    continue
                m = cand
                while m:
                    j = (m & -m).bit_length() - 1
                    m &= m - 1
                    stack.append((chain + (j,), cand & above[j]))
        return out

    def to_dot(self) -> str:
        """DOT source of the Hasse diagram (one edge per cover relation)."""
        lines = [f"digraph {self._name} {{"]
        for i, e in enumerate(self.elements):
            lines.append(f'  n{i} [label="{_dot_label(e)}"];')
        for i in range(len(self.elements)):
            for j in self._covers[i]:
                lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines)


def _dot_label(e) -> str:
    return json.dumps(e, default=list).replace('"', "'")


class PosetMap:
    """An order-preserving map between posets."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source: Poset, target: Poset, mapping: Mapping):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        for e in source.elements:
            if e not in self.mapping:
                raise SchemaError(f"poset element {e!r} has no image")
        for a, b in source.cover_edges():
            if not target.leq(self.mapping[a], self.mapping[b]):
                raise SchemaError(f"map is not order-preserving at {a!r} < {b!r}")

    def __call__(self, e):
        return self.mapping[e]

    def __eq__(self, other) -> bool:
        return (isinstance(other, PosetMap) and self.source.elements == other.source.elements
                and all(self.mapping[e] == other.mapping[e] for e in self.source.elements))

    def compose(self, other: "PosetMap") -> "PosetMap":
        return PosetMap(other.source, self.target,
                        {e: self.mapping[other.mapping[e]] for e in other.source.elements})


def pos(K: SimplicialComplex) -> Poset:
    """Face poset of a complex: elements are simplices, order is inclusion."""
    elems = tuple(sorted(K.simplices, key=lambda s: (len(s), s)))
    elems = tuple(sorted(elems))
    index = {e: i for i, e in enumerate(elems)}
    covers: dict[int, list] = {i: [] for i in range(len(elems))}
    for s in elems:
        if len(s) > 1:
            for facet in combinations(s, len(s) - 1):
                covers[index[facet]].append(index[s])
    return Poset(elems, covers, name="pos")


class FlagComplex:
    """A flag complex together with the poset labelling of its vertices.

    Vertex i of ``complex`` corresponds to ``poset.elements[i]``; each simplex
    is a chain of poset elements.
    """

    __slots__ = ("poset", "complex")

    def __init__(self, poset: Poset, cx: SimplicialComplex):
        self.poset = poset
        self.complex = cx

    def label(self, v: int):
        return self.poset.elements[v]

    def vertex(self, element) -> int:
        return self.poset.index[element]

    def chain_labels(self, s: Simplex) -> tuple:
        """Labels of a flag simplex in increasing poset order."""
        return tuple(self.poset.elements[v] for v in self.poset.chain_order(s))


def flag(P: Poset, cap: int = CHAIN_CAP) -> FlagComplex:
    """Flag complex of a poset: simplices are the non-empty chains."""
    chains = P.chains(cap=cap)
    cx = SimplicialComplex(tuple(sorted(ch)) for ch in chains)
    return FlagComplex(P, cx)


class Subdivision(FlagComplex):
    """Barycentric subdivision flag(pos(K)) with its base complex attached."""

    __slots__ = ("base",)

    def __init__(self, base: SimplicialComplex):
        fc = flag(pos(base))
        super().__init__(fc.poset, fc.complex)
        self.base = base


def sd(K: SimplicialComplex) -> Subdivision:
    """Barycentric subdivision of K; Sd-vertices are labelled by simplices of K."""
    return Subdivision(K)


def sd_map(f: SimplicialMap, sd_src: Subdivision | None = None,
           sd_tgt: Subdivision | None = None) -> SimplicialMap:
    """Induced map on barycentric subdivisions: vertex s maps to vertex f(s).

    Chains map to chains after deduplicating equal images.
    """
    sd_src = sd_src if sd_src is not None else sd(f.source)
    sd_tgt = sd_tgt if sd_tgt is not None else sd(f.target)
    vm = {sd_src.vertex(s): sd_tgt.vertex(f.image_simplex(s))
          for s in sd_src.poset.elements}
    return SimplicialMap(sd_src.complex, sd_tgt.complex, vm)


def bst(K: SimplicialComplex, v: int, sdk: Subdivision | None = None) -> SimplicialComplex:
    """Closed barycentric star of vertex v: the subcomplex of Sd K of chains
    whose minimal simplex contains v (the closure of the star of {v} in Sd K)."""
    if (v,) not in K.simplices:
        raise SchemaError(f"{v} is not a vertex of the complex")
    sdk = sdk if sdk is not None else sd(K)
    keep = set()
    for s in sdk.complex.simplices:
        chain = sdk.chain_labels(s)
        if v in chain[0]:
            keep.add(s)
    return SimplicialComplex(keep)


def link(K: SimplicialComplex, v: int) -> SimplicialComplex:
    """Link of a vertex: simplices s with v not in s and s + {v} in K."""
    if (v,) not in K.simplices:
        raise SchemaError(f"{v} is not a vertex of the complex")
    out = set()
    for s in K.simplices:
        if v not in s and tuple(sorted(s + (v,))) in K.simplices:
            out.add(s)
    return SimplicialComplex(out)


def is_cone_with_apex(L: SimplicialComplex, w: int) -> bool:
    """True iff every simplex of L, joined with w, is again in L (vacuously
    true for the empty complex)."""
    if not len(L):
        return True
    if (w,) not in L.simplices:
        return False
    return all(tuple(sorted(set(s) | {w})) in L.simplices for s in L.simplices)


class BarycentricPoint:
    """A point of |K| given by its support simplex and positive coordinates.

    Coordinates are exact ``Fraction``s (or floats in geometric contexts) and
    must sum to 1; zero coordinates are dropped so the support is minimal.
    """

    __slots__ = ("complex", "support", "coords")

    def __init__(self, cx: SimplicialComplex, support: Simplex, coords: Sequence):
        support = tuple(support)
        coords = tuple(coords)
        if len(support) != len(coords):
            raise SchemaError("support and coordinates must align")
        keep = [(v, c) for v, c in zip(support, coords) if c != 0]
        support = tuple(v for v, _ in keep)
        coords = tuple(c for _, c in keep)
        if support not in cx.simplices:
            raise SchemaError(f"support {support} is not a simplex")
        if any(c < 0 for c in coords):
            raise SchemaError("coordinates must be non-negative")
        total = sum(coords)
        if isinstance(total, Fraction):
            if total != 1:
                raise SchemaError("coordinates must sum to 1")
        elif abs(total - 1.0) > 1e-9:
            raise SchemaError("coordinates must sum to 1 within 1e-9")
        self.complex = cx
        self.support = support
        self.coords = coords

    def coord_of(self, v) -> Fraction:
        try:
            return self.coords[self.support.index(v)]
        except ValueError:
            return Fraction(0)

    def __eq__(self, other) -> bool:
        return (isinstance(other, BarycentricPoint) and self.support == other.support
                and self.coords == other.coords)

    def __repr__(self) -> str:
        return f"BarycentricPoint({self.support}, {self.coords})"


def base_to_sd_coords(x: BarycentricPoint, sdk: Subdivision) -> BarycentricPoint:
    """Rewrite a point of |K| in the coordinates of |Sd K|.

    Vertices are sorted by descending coordinate (ties broken by ascending
    vertex id); the support is the chain of prefix simplices, with zero
    coordinates dropped.  With coordinates nu sorted this way, the chain
    coordinate at prefix i is (i+1)(nu_i - nu_{i+1}), and (m+1)nu_m at the top.
    """
    if x.complex is not sdk.base and x.complex != sdk.base:
        raise SchemaError("point does not live on the subdivision's base complex")
    order = sorted(zip(x.support, x.coords), key=lambda vc: (-vc[1], vc[0]))
    verts = [v for v, _ in order]
    nus = [c for _, c in order]
    m = len(verts) - 1
    support = []
    coords = []
    for i in range(m + 1):
        mu = (i + 1) * (nus[i] - nus[i + 1]) if i < m else (m + 1) * nus[m]
        if mu != 0:
            prefix = tuple(sorted(verts[: i + 1]))
            support.append(sdk.vertex(prefix))
            coords.append(mu)
    pairs = sorted(zip(support, coords))
    return BarycentricPoint(sdk.complex, tuple(v for v, _ in pairs),
                            tuple(c for _, c in pairs))


def sd_to_base_coords(x: BarycentricPoint, sdk: Subdivision) -> BarycentricPoint:
    """Rewrite a point of |Sd K| in the coordinates of |K|.

    Each chain entry t with coordinate mu contributes mu/|t| to every vertex
    of t; the result is supported on the top simplex of the chain.
    """
    if x.complex is not sdk.complex and x.complex != sdk.complex:
        raise SchemaError("point does not live on the subdivision")
    chain = [sdk.label(v) for v in x.support]
    order = sorted(range(len(chain)), key=lambda i: len(chain[i]))
    chain = [chain[i] for i in order]
    mus = [x.coords[i] for i in order]
    top = chain[-1]
    acc = {v: Fraction(0) for v in top}
    for t, mu in zip(chain, mus):
        share = Fraction(mu, len(t)) if isinstance(mu, (int, Fraction)) else mu / len(t)
        for v in t:
            acc[v] += share
    return BarycentricPoint(sdk.base, top, tuple(acc[v] for v in top))
