"""The pair poset of a cover (simplex, index set) with its two projections,
the comparison map between base and nerve posets, the distinguished
subcomplex of the flag complex that triangulates the blowup of the cover,
and the discrete gradient pairing that collapses the full flag complex
onto it.
"""

from __future__ import annotations

from typing import Iterable

from .complexes import (FlagComplex, Poset, PosetMap, SimplicialComplex,
                        SimplicialMap, flag, pos)
from .covers import CoveredSpaceMorphism, IndexedCover, intersection, nerve
from .errors import CHAIN_CAP, InternalInconsistencyError, SchemaError
from .morse import DiscreteVectorField


def pobar(c: IndexedCover, nerve_cx: SimplicialComplex | None = None) -> Poset:
    """Poset of pairs (sigma, J) with sigma in the J-fold intersection,
    ordered by sigma growing and J shrinking."""
    N = nerve_cx if nerve_cx is not None else nerve(c)
    members: dict = {}  # J -> frozenset of simplices of K_J
    for J in sorted(N.simplices, key=lambda s: (len(s), s)):
        members[J] = frozenset(intersection(c, J).simplices)
    elements = sorted((s, J) for J, simps in members.items() for s in simps)
    index = {e: i for i, e in enumerate(elements)}
    covers: dict = {i: [] for i in range(len(elements))}
    for (s, J) in elements:
        i = index[(s, J)]
        # grow sigma by one vertex inside K_J
        for v in c.base.vertices:
            if v in s:
                continue
            s2 = tuple(sorted(s + (v,)))
            if s2 in members[J]:
                covers[i].append(index[(s2, J)])
        # shrink J by one index
        if len(J) > 1:
            for k in range(len(J)):
                J2 = J[:k] + J[k + 1:]
                covers[i].append(index[(s, J2)])
    return Poset(elements, covers, name="pobar")


def lambda_s(c: IndexedCover, P: Poset | None = None,
             base_pos: Poset | None = None) -> PosetMap:
    """Projection to the base face poset: (sigma, J) maps to sigma."""
    P = P if P is not None else pobar(c)
    base_pos = base_pos if base_pos is not None else pos(c.base)
    return PosetMap(P, base_pos, {e: e[0] for e in P.elements})


def lambda_n(c: IndexedCover, P: Poset | None = None,
             nerve_pos_op: Poset | None = None) -> PosetMap:
    """Projection to the opposite nerve face poset: (sigma, J) maps to J."""
    P = P if P is not None else pobar(c)
    nerve_pos_op = nerve_pos_op if nerve_pos_op is not None else pos(nerve(c)).op()
    return PosetMap(P, nerve_pos_op, {e: e[1] for e in P.elements})


def f_map(c: IndexedCover, base_pos: Poset | None = None,
          nerve_pos_op: Poset | None = None) -> PosetMap:
    """Comparison map: a base simplex maps to the set of indices whose
    elements contain it; order-reversing into the nerve poset."""
    base_pos = base_pos if base_pos is not None else pos(c.base)
    nerve_pos_op = nerve_pos_op if nerve_pos_op is not None else pos(nerve(c)).op()
    mapping = {}
    for s in base_pos.elements:
        mapping[s] = tuple(sorted(i for i in c.index_set if s in c.elements[i].simplices))
    return PosetMap(base_pos, nerve_pos_op, mapping)


def mu_section(c: IndexedCover, P: Poset | None = None,
               base_pos: Poset | None = None) -> PosetMap:
    """The section sigma maps to (sigma, f(sigma)) of the base projection."""
    P = P if P is not None else pobar(c)
    base_pos = base_pos if base_pos is not None else pos(c.base)
    f = f_map(c, base_pos=base_pos, nerve_pos_op=pos(nerve(c)).op())
    return PosetMap(base_pos, P, {s: (s, f(s)) for s in base_pos.elements})


class TComplex(FlagComplex):
    """Subcomplex of the flag complex of the pair poset consisting of chains
    whose top simplex lies in the intersection indexed by the chain's bottom
    index set."""

    __slots__ = ("cover",)

    def __init__(self, cover: IndexedCover, poset: Poset, cx: SimplicialComplex):
        super().__init__(poset, cx)
        self.cover = cover


def t_complex(c: IndexedCover, P: Poset | None = None,
              nerve_cx: SimplicialComplex | None = None,
              max_dim: int | None = None, cap: int = CHAIN_CAP) -> TComplex:
    """Enumerate the triangulating subcomplex directly: from each bottom pair
    (sigma0, J0), extend only by pairs whose simplex stays inside K_J0."""
    N = nerve_cx if nerve_cx is not None else nerve(c)
    P = P if P is not None else pobar(c, nerve_cx=N)
    n = len(P.elements)
    member_mask: dict = {}  # J -> bitmask of pobar elements with sigma in K_J
    for J in N.simplices:
        KJ = frozenset(intersection(c, J).simplices)
        m = 0
        for i, (s, _) in enumerate(P.elements):
            if s in KJ:
                m |= 1 << i
        member_mask[J] = m
    max_len = None if max_dim is None else max_dim + 1
    chains: list = []
    for b in range(n):
        _, J0 = P.elements[b]
        allowed = (P.above_mask(b) & member_mask[J0]) | (1 << b)
        chains.extend(P.chains(cap=cap - len(chains), allowed_mask=allowed,
                               start_mask=1 << b, max_len=max_len))
    cx = SimplicialComplex(tuple(sorted(ch)) for ch in chains)
    return TComplex(c, P, cx)


def _chain_partner(chain_elems: tuple, in_KJ0) -> tuple:
    """Partner of a non-T chain (given as a tuple of pairs in chain order).

    Locate the smallest position whose simplex escapes the bottom
    intersection, walk back through the maximal run of equal index sets
    ending there, and toggle the pair (previous simplex, run index set):
    insert it below the run if absent, delete the run's first entry if it
    coincides with it.
    """
    sigmas = [s for s, _ in chain_elems]
    Js = [J for _, J in chain_elems]
    bad = next(k for k in range(len(chain_elems)) if not in_KJ0(sigmas[k], Js[0]))
    if bad == 0:
        raise InternalInconsistencyError("bottom pair escapes its own intersection")
    k = bad
    while k >= 1 and Js[k - 1] == Js[bad]:
        k -= 1
    if k == 0:
        raise InternalInconsistencyError("run of equal index sets reaches the bottom")
    if sigmas[k - 1] == sigmas[k]:
        return chain_elems[:k] + chain_elems[k + 1:]
    return chain_elems[:k] + ((sigmas[k - 1], Js[bad]),) + chain_elems[k:]


def collapse_pairing(c: IndexedCover, P: Poset | None = None,
                     fc: FlagComplex | None = None,
                     t: TComplex | None = None,
                     cap: int = CHAIN_CAP) -> DiscreteVectorField:
    """Discrete gradient pairing on the flag complex of the pair poset whose
    critical simplices are exactly the triangulating subcomplex.

    The pairing is validated to be a fixed-point-free involution exchanging
    facets with cofaces; any failure raises instead of being patched."""
    N = nerve(c)
    P = P if P is not None else pobar(c, nerve_cx=N)
    fc = fc if fc is not None else flag(P, cap=cap)
    t = t if t is not None else t_complex(c, P=P, nerve_cx=N, cap=cap)
    members = {J: frozenset(intersection(c, J).simplices) for J in N.simplices}

    def in_KJ0(sigma, J0):
        return sigma in members[J0]

    t_simplices = t.complex.simplices
    partner_of: dict = {}
    for s in fc.complex.simplices:
        if s in t_simplices:
            continue
        chain_elems = fc.chain_labels(s)
        partner_elems = _chain_partner(chain_elems, in_KJ0)
        partner = tuple(sorted(P.index[e] for e in partner_elems))
        if partner in t_simplices or partner not in fc.complex.simplices:
            raise InternalInconsistencyError(f"partner of {s} is not a non-T flag simplex")
        if abs(len(partner) - len(s)) != 1:
            raise InternalInconsistencyError("partner is not a facet or coface")
        partner_of[s] = partner
    pairs = []
    for s, p in partner_of.items():
        if partner_of.get(p) != s:
            raise InternalInconsistencyError(f"pairing of {s} is not an involution")
        if len(p) == len(s) + 1:
            pairs.append((s, p))
    return DiscreteVectorField(fc.complex, pairs, t_simplices)


def induced_pobar_map(m: CoveredSpaceMorphism, P_src: Poset | None = None,
                      P_dst: Poset | None = None) -> PosetMap:
    """(sigma, J) maps to (f(sigma), phi(J) deduplicated); order-preserving."""
    P_src = P_src if P_src is not None else pobar(m.src)
    P_dst = P_dst if P_dst is not None else pobar(m.dst)
    mapping = {}
    for (s, J) in P_src.elements:
        mapping[(s, J)] = (m.f.image_simplex(s), tuple(sorted({m.phi[i] for i in J})))
    return PosetMap(P_src, P_dst, mapping)


def induced_t_map(m: CoveredSpaceMorphism, t_src: TComplex, t_dst: TComplex) -> SimplicialMap:
    """Restriction of the induced pair-poset map to the triangulating
    subcomplexes, as a simplicial map."""
    pm = induced_pobar_map(m, P_src=t_src.poset, P_dst=t_dst.poset)
    vm = {t_src.poset.index[e]: t_dst.poset.index[pm(e)] for e in t_src.poset.elements}
    return SimplicialMap(t_src.complex, t_dst.complex, vm)


def blowup_report(c: IndexedCover, cap: int = CHAIN_CAP) -> dict:
    """Size summary of the construction plus the pairing split."""
    N = nerve(c)
    P = pobar(c, nerve_cx=N)
    fc = flag(P, cap=cap)
    t = t_complex(c, P=P, nerve_cx=N, cap=cap)
    V = collapse_pairing(c, P=P, fc=fc, t=t, cap=cap)
    return {
        "pobar_size": len(P),
        "t_size": len(t.complex),
        "flag_size": len(fc.complex),
        "paired": 2 * len(V.pairs),
        "critical": len(V.critical),
    }
