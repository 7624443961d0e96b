"""Indexed covers of a simplicial complex by subcomplexes: nerve extraction,
carried morphisms with their induced nerve maps, the canonical cover by
closed barycentric stars, duplicate-index collapses, and goodness
certification of intersections.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Iterable, Mapping

from .complexes import (EMPTY, SimplicialComplex, SimplicialMap, Simplex,
                        Subdivision, bst, sd)
from .errors import NERVE_SUBSET_CAP, ResourceCapError, SchemaError
from .homology import is_z2_acyclic
from . import morse


class IndexedCover:
    """A cover of a base complex by subcomplexes keyed by integer indices."""

    __slots__ = ("base", "elements", "index_set")

    def __init__(self, base: SimplicialComplex, elements: Mapping[int, SimplicialComplex]):
        self.base = base
        self.elements = dict(elements)
        self.index_set = tuple(sorted(self.elements))
        union: set = set()
        for i, Ki in self.elements.items():
            if not Ki.is_subcomplex_of(base):
                raise SchemaError(f"cover element {i} is not a subcomplex of the base")
            union |= set(Ki.simplices)
        if union != set(base.simplices):
            raise SchemaError("cover elements do not cover the base complex")

    def element(self, i: int) -> SimplicialComplex:
        return self.elements[i]

    def to_json(self) -> dict:
        return {"base": self.base.to_json(),
                "elements": {str(i): K.to_json() for i, K in sorted(self.elements.items())}}

    @classmethod
    def from_json(cls, data) -> "IndexedCover":
        if not isinstance(data, dict) or "base" not in data or "elements" not in data:
            raise SchemaError("cover JSON needs 'base' and 'elements'")
        base = SimplicialComplex.from_json(data["base"])
        try:
            elements = {int(k): SimplicialComplex.from_json(v)
                        for k, v in data["elements"].items()}
        except ValueError as exc:
            raise SchemaError(f"cover indices must be integers: {exc}") from exc
        return cls(base, elements)


def intersection(c: IndexedCover, J: Iterable[int]) -> SimplicialComplex:
    """Common subcomplex of the elements indexed by a non-empty J."""
    J = tuple(sorted(set(J)))
    if not J:
        raise SchemaError("intersection over an empty index set")
    simps = set(c.elements[J[0]].simplices)
    for i in J[1:]:
        simps &= c.elements[i].simplices
    return SimplicialComplex(simps) if simps else EMPTY


def nerve(c: IndexedCover, cap: int = NERVE_SUBSET_CAP) -> SimplicialComplex:
    """Nerve of the cover: J is a simplex iff the J-fold intersection is
    non-empty.  Breadth-first by cardinality; supersets of a non-simplex are
    never examined."""
    examined = 0
    simps: set = set()
    frontier: dict = {}
    for i in c.index_set:
        examined += 1
        if len(c.elements[i]):
            simps.add((i,))
            frontier[(i,)] = frozenset(c.elements[i].simplices)
    while frontier:
        nxt: dict = {}
        current = set(frontier)
        for J, inter in frontier.items():
            for i in c.index_set:
                if i <= J[-1]:
                    continue
                J2 = J + (i,)
                if any(J2[:k] + J2[k + 1:] not in simps for k in range(len(J2))):
                    continue
                if J2 in nxt:
                    continue
                examined += 1
                if examined > cap:
                    raise ResourceCapError(f"nerve enumeration exceeded cap {cap}")
                inter2 = inter & c.elements[i].simplices
                if inter2:
                    nxt[J2] = inter2
        simps.update(nxt)
        frontier = nxt
        current.clear()
    return SimplicialComplex(simps) if simps else EMPTY


def check_carried(f: SimplicialMap, phi: Mapping[int, int],
                  src: IndexedCover, dst: IndexedCover) -> bool:
    """True iff f maps each source element into the phi-indexed target element."""
    if f.source != src.base or f.target != dst.base:
        raise SchemaError("map must go between the cover bases")
    for i in src.index_set:
        if i not in phi:
            raise SchemaError(f"index {i} has no image under the index map")
        if phi[i] not in dst.elements:
            raise SchemaError(f"index map sends {i} outside the target index set")
    for i in src.index_set:
        target_elem = dst.elements[phi[i]]
        for s in src.elements[i].simplices:
            if f.image_simplex(s) not in target_elem.simplices:
                return False
    return True


class CoveredSpaceMorphism:
    """A simplicial map together with an index map satisfying the carried
    condition."""

    __slots__ = ("f", "phi", "src", "dst")

    def __init__(self, f: SimplicialMap, phi: Mapping[int, int],
                 src: IndexedCover, dst: IndexedCover):
        if not check_carried(f, phi, src, dst):
            raise SchemaError("the map is not carried by the index map")
        self.f = f
        self.phi = dict(phi)
        self.src = src
        self.dst = dst

    @classmethod
    def identity(cls, c: IndexedCover) -> "CoveredSpaceMorphism":
        return cls(SimplicialMap.identity(c.base), {i: i for i in c.index_set}, c, c)


def induced_nerve_map(m: CoveredSpaceMorphism,
                      src_nerve: SimplicialComplex | None = None,
                      dst_nerve: SimplicialComplex | None = None) -> SimplicialMap:
    """Vertex i of the source nerve maps to phi(i)."""
    src_nerve = src_nerve if src_nerve is not None else nerve(m.src)
    dst_nerve = dst_nerve if dst_nerve is not None else nerve(m.dst)
    return SimplicialMap(src_nerve, dst_nerve,
                         {i: m.phi[i] for i in src_nerve.vertices})


def bst_cover(K: SimplicialComplex, sdk: Subdivision | None = None) -> IndexedCover:
    """The cover of Sd K by closed barycentric stars, indexed by vertices of K."""
    if not len(K):
        raise SchemaError("bst cover of an empty complex")
    sdk = sdk if sdk is not None else sd(K)
    elements = {v: bst(K, v, sdk) for v in K.vertices}
    return IndexedCover(sdk.complex, elements)


def bst_pointing(K: SimplicialComplex, sdk: Subdivision | None = None) -> dict:
    """Canonical pointing of the bst cover: the nerve simplex J (a simplex of
    K) is pointed by the Sd-vertex labelled J itself."""
    sdk = sdk if sdk is not None else sd(K)
    return {s: sdk.vertex(s) for s in K.simplices}


class PointedSimplicialCover:
    """An indexed cover plus, per nerve simplex, a vertex of Sd(base) lying in
    every element indexed by it.  Points are supplied by the caller and only
    validated."""

    __slots__ = ("cover", "points", "nerve")

    def __init__(self, cover: IndexedCover, points: Mapping[Simplex, int],
                 nerve_cx: SimplicialComplex | None = None):
        self.cover = cover
        self.points = dict(points)
        self.nerve = nerve_cx if nerve_cx is not None else nerve(cover)
        sdk = sd(cover.base)
        for J in self.nerve.simplices:
            if J not in self.points:
                raise SchemaError(f"nerve simplex {J} has no point")
            v = self.points[J]
            label = sdk.label(v)  # the base simplex this Sd-vertex subdivides
            KJ = intersection(cover, J)
            if label not in KJ.simplices:
                raise SchemaError(f"point of {J} does not lie in the intersection")


def drop_duplicate(c: IndexedCover, j: int, l: int) -> tuple:
    """Collapse witness for removing a redundant index j with K_j contained in
    K_l: pairs every nerve simplex containing j but not l with its extension
    by l.  Returns (collapse trace, nerve of the reduced cover)."""
    if j == l:
        raise SchemaError("indices must differ")
    if j not in c.elements or l not in c.elements:
        raise SchemaError("unknown cover index")
    if not c.elements[j].is_subcomplex_of(c.elements[l]):
        raise SchemaError(f"element {j} is not contained in element {l}")
    N = nerve(c)
    pairs = []
    for s in N.simplices:
        if j in s and l not in s:
            pairs.append((s, tuple(sorted(s + (l,)))))
    critical = [s for s in N.simplices if j not in s]
    V = morse.DiscreteVectorField(N, pairs, critical)
    reduced = IndexedCover(c.base, {i: K for i, K in c.elements.items() if i != j})
    target = nerve(reduced)
    trace, final = morse.collapse(N, V, SimplicialComplex(critical))
    if final != target:
        raise SchemaError("collapse did not reach the nerve of the reduced cover")
    return trace, target


GOOD_COLLAPSIBLE = "Collapsible"
GOOD_Z2_ACYCLIC = "Z2Acyclic"
GOOD_UNKNOWN = "Unknown"


class GoodnessCertificate:
    """Per nerve simplex: Collapsible (with a witness field), Z2Acyclic, or
    Unknown."""

    __slots__ = ("statuses", "witnesses")

    def __init__(self, statuses: Mapping[Simplex, str], witnesses: Mapping[Simplex, object]):
        self.statuses = dict(statuses)
        self.witnesses = dict(witnesses)

    def all_collapsible(self) -> bool:
        return all(s == GOOD_COLLAPSIBLE for s in self.statuses.values())

    def all_acyclic(self) -> bool:
        return all(s in (GOOD_COLLAPSIBLE, GOOD_Z2_ACYCLIC) for s in self.statuses.values())

    def to_json(self) -> dict:
        return {",".join(map(str, J)): status
                for J, status in sorted(self.statuses.items(), key=lambda kv: (len(kv[0]), kv[0]))}


def _certify_intersection(K: SimplicialComplex, seeds) -> tuple:
    field = morse.collapses_to_point(K, seeds)
    if field is not None:
        return GOOD_COLLAPSIBLE, field
    if is_z2_acyclic(K):
        return GOOD_Z2_ACYCLIC, None
    return GOOD_UNKNOWN, None


def goodness_report(c: IndexedCover, seeds: Iterable[int] = range(32),
                    nerve_cx: SimplicialComplex | None = None) -> GoodnessCertificate:
    """Certify every non-empty intersection: greedy random collapse to a
    point, else reduced Z/2 acyclicity, else Unknown.  Per-simplex checks are
    independent; NERVELAB_THREADS > 1 runs them concurrently with a
    deterministic result regardless of schedule."""
    N = nerve_cx if nerve_cx is not None else nerve(c)
    seeds = list(seeds)
    Js = sorted(N.simplices, key=lambda s: (len(s), s))
    threads = int(os.environ.get("NERVELAB_THREADS", "1") or "1")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda J: _certify_intersection(intersection(c, J), seeds), Js))
    else:
        results = [_certify_intersection(intersection(c, J), seeds) for J in Js]
    statuses = {J: r[0] for J, r in zip(Js, results)}
    witnesses = {J: r[1] for J, r in zip(Js, results) if r[1] is not None}
    return GoodnessCertificate(statuses, witnesses)
