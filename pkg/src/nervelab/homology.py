"""Z/2 simplicial homology: Betti vectors, induced maps on chosen bases,
commuting-square verification, persistence barcodes for inclusion
filtrations, and connected components.

Chain groups use the sorted simplex order of each degree; columns of
boundary matrices are stored as Python-int bitmasks over row indices.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .complexes import SimplicialComplex, SimplicialMap, Simplex
from .errors import InternalInconsistencyError, SchemaError


def _boundary_columns(rows: Mapping[Simplex, int], cols: Sequence[Simplex]) -> list:
    out = []
    for s in cols:
        m = 0
        for facet in combinations(s, len(s) - 1):
            m |= 1 << rows[facet]
        out.append(m)
    return out


class ChainComplexZ2:
    """Boundary matrices of a complex over Z/2, one per positive degree."""

    __slots__ = ("complex", "basis", "index", "boundary")

    def __init__(self, K: SimplicialComplex):
        self.complex = K
        d = K.dim()
        self.basis = [K.simplices_of_dim(n) for n in range(d + 1)]
        self.index = [{s: i for i, s in enumerate(b)} for b in self.basis]
        self.boundary = [[]]  # degree 0 has no boundary
        for n in range(1, d + 1):
            self.boundary.append(_boundary_columns(self.index[n - 1], self.basis[n]))
        self._check_dd_zero()

    def _check_dd_zero(self) -> None:
        for n in range(2, len(self.basis)):
            rows = self.index[n - 2]
            for s in self.basis[n]:
                acc = 0
                for facet in combinations(s, len(s) - 1):
                    for ff in combinations(facet, len(facet) - 1):
                        acc ^= 1 << rows[ff]
                if acc:
                    raise InternalInconsistencyError("boundary of boundary is non-zero")

    def dim(self) -> int:
        return len(self.basis) - 1


def _reduce_columns(columns: Iterable[int]) -> tuple:
    """Column reduction over Z/2; returns (pivot_row -> reduced column, rank)."""
    pivots: dict[int, int] = {}
    for col in columns:
        while col:
            p = col.bit_length() - 1
            if p not in pivots:
                pivots[p] = col
                break
            col ^= pivots[p]
    return pivots, len(pivots)


def _kernel_basis(columns: Sequence[int]) -> list:
    """Basis of the kernel of the column matrix, as combination bitmasks."""
    pivots: dict[int, tuple] = {}
    kernel = []
    for j, col in enumerate(columns):
        comb = 1 << j
        while col:
            p = col.bit_length() - 1
            if p not in pivots:
                pivots[p] = (col, comb)
                break
            pc, pcomb = pivots[p]
            col ^= pc
            comb ^= pcomb
        else:
            kernel.append(comb)
    return kernel


class _QuotientSpace:
    """H_n = cycles / boundaries with a fixed representative basis and a
    coordinate solver for arbitrary cycles."""

    __slots__ = ("reps", "_echelon")

    def __init__(self, cycle_vectors: Sequence[int], boundary_vectors: Sequence[int]):
        # echelon rows: pivot -> (vector, coefficient bitmask over reps)
        self._echelon: dict[int, tuple] = {}
        for b in boundary_vectors:
            self._insert(b, 0)
        self.reps = []
        for z in cycle_vectors:
            if self._insert(z, 1 << len(self.reps)):
                self.reps.append(z)

    def _insert(self, vec: int, coeff: int) -> bool:
        while vec:
            p = vec.bit_length() - 1
            if p not in self._echelon:
                self._echelon[p] = (vec, coeff)
                return True
            pv, pc = self._echelon[p]
            vec ^= pv
            coeff ^= pc
        return False

    @property
    def rank(self) -> int:
        return len(self.reps)

    def coords(self, cycle: int) -> int:
        """Coordinates of a cycle's class in the representative basis."""
        vec, coeff = cycle, 0
        while vec:
            p = vec.bit_length() - 1
            if p not in self._echelon:
                raise InternalInconsistencyError("vector is not a cycle in the span")
            pv, pc = self._echelon[p]
            vec ^= pv
            coeff ^= pc
        return coeff


class HomologyBasis:
    """Per-degree homology bases of a complex with coordinate solvers."""

    __slots__ = ("chain", "spaces")

    def __init__(self, K: SimplicialComplex, max_degree: int | None = None):
        self.chain = ChainComplexZ2(K)
        top = self.chain.dim() if max_degree is None else min(max_degree, self.chain.dim())
        self.spaces = []
        for n in range(top + 1):
            if n == 0:
                cycles = [1 << i for i in range(len(self.chain.basis[0]))]
            else:
                # kernel combination masks over degree-n columns are the cycles
                cycles = _kernel_basis(self.chain.boundary[n])
            if n + 1 <= self.chain.dim():
                boundaries = list(self.chain.boundary[n + 1])
            else:
                boundaries = []
            self.spaces.append(_QuotientSpace(cycles, boundaries))

    def betti(self, n: int) -> int:
        return self.spaces[n].rank if 0 <= n < len(self.spaces) else 0


def betti_z2(K: SimplicialComplex, reduced: bool = False) -> tuple:
    """Z/2 Betti vector (beta_0, ..., beta_dim); reduced drops one from beta_0."""
    if not len(K):
        return ()
    cc = ChainComplexZ2(K)
    d = cc.dim()
    ranks = [0] * (d + 2)
    for n in range(1, d + 1):
        _, ranks[n] = _reduce_columns(cc.boundary[n])
    betti = tuple(len(cc.basis[n]) - ranks[n] - ranks[n + 1] for n in range(d + 1))
    if reduced:
        betti = (betti[0] - 1,) + betti[1:]
    return betti


def is_z2_acyclic(K: SimplicialComplex) -> bool:
    """True iff the reduced Z/2 Betti vector vanishes."""
    b = betti_z2(K, reduced=True)
    return bool(b) and not any(b)


class InducedMap:
    """Matrices of H_n(f) on the chosen homology bases, per degree."""

    __slots__ = ("map", "source", "target", "matrices")

    def __init__(self, f: SimplicialMap, source: HomologyBasis, target: HomologyBasis,
                 max_degree: int | None = None):
        self.map = f
        self.source = source
        self.target = target
        top = len(source.spaces) - 1
        if max_degree is not None:
            top = min(top, max_degree)
        self.matrices = []
        for n in range(top + 1):
            rows = target.betti(n)
            cols = source.betti(n)
            mat = np.zeros((rows, cols), dtype=np.uint8)
            tgt_index = target.chain.index[n] if n <= target.chain.dim() else {}
            for j, rep in enumerate(source.spaces[n].reps):
                img = 0
                m = rep
                while m:
                    i = (m & -m).bit_length() - 1
                    m &= m - 1
                    s = source.chain.basis[n][i]
                    t = f.image_simplex(s)
                    if len(t) == len(s):  # degenerate images vanish over Z/2
                        img ^= 1 << tgt_index[t]
                if n < len(target.spaces):
                    coeff = target.spaces[n].coords(img)
                elif img:
                    raise InternalInconsistencyError("non-zero image above target dimension")
                else:
                    coeff = 0
                for i in range(rows):
                    if (coeff >> i) & 1:
                        mat[i, j] = 1
            self.matrices.append(mat)

    def matrix(self, n: int) -> np.ndarray:
        if 0 <= n < len(self.matrices):
            return self.matrices[n]
        return np.zeros((self.target.betti(n), self.source.betti(n)), dtype=np.uint8)

    def is_isomorphism(self, n: int) -> bool:
        m = self.matrix(n)
        if m.shape[0] != m.shape[1]:
            return False
        return _gf2_rank(m) == m.shape[0]


def _gf2_rank(mat: np.ndarray) -> int:
    rows = [sum(int(b) << i for i, b in enumerate(row)) for row in mat]
    _, rank = _reduce_columns(rows)
    return rank


def induced_homology_map(f: SimplicialMap, source: HomologyBasis | None = None,
                         target: HomologyBasis | None = None,
                         max_degree: int | None = None) -> InducedMap:
    """Induced map on Z/2 homology; a simplex maps to its image, 0 if it
    degenerates."""
    source = source if source is not None else HomologyBasis(f.source, max_degree)
    target = target if target is not None else HomologyBasis(f.target, max_degree)
    return InducedMap(f, source, target, max_degree)


def check_square(f_top: SimplicialMap, g_left: SimplicialMap,
                 g_right: SimplicialMap, f_bottom: SimplicialMap,
                 max_degree: int | None = None,
                 bases: Mapping[int, HomologyBasis] | None = None) -> dict:
    """Per-degree commutativity of a homology square.

    The square is  A --f_top--> B,  A --g_left--> C,  B --g_right--> D,
    C --f_bottom--> D;  returns {degree: right∘top == bottom∘left}.
    """
    if f_top.source != g_left.source or f_top.target != g_right.source \
            or g_left.target != f_bottom.source or g_right.target != f_bottom.target:
        raise SchemaError("maps do not form a square")
    hb = dict(bases or {})

    def basis_for(K, key):
        if key not in hb:
            hb[key] = HomologyBasis(K, max_degree)
        return hb[key]

    A = basis_for(f_top.source, "A")
    B = basis_for(f_top.target, "B")
    C = basis_for(g_left.target, "C")
    D = basis_for(f_bottom.target, "D")
    top = InducedMap(f_top, A, B, max_degree)
    left = InducedMap(g_left, A, C, max_degree)
    right = InducedMap(g_right, B, D, max_degree)
    bottom = InducedMap(f_bottom, C, D, max_degree)
    degrees = range(len(A.spaces)) if max_degree is None else range(max_degree + 1)
    out = {}
    for n in degrees:
        lhs = (right.matrix(n) @ top.matrix(n)) % 2
        rhs = (bottom.matrix(n) @ left.matrix(n)) % 2
        if lhs.shape != rhs.shape:
            raise SchemaError(f"dimension mismatch in degree {n}")
        out[n] = bool(np.array_equal(lhs, rhs))
    return out


class InclusionFiltration:
    """A nested family of complexes indexed by increasing parameter values.

    Stored as birth values per simplex; the complex at t consists of all
    simplices born at or before t.
    """

    __slots__ = ("births",)

    def __init__(self, births: Mapping[Simplex, float]):
        self.births = dict(births)
        for s, b in self.births.items():
            if len(s) > 1:
                for facet in combinations(s, len(s) - 1):
                    if facet not in self.births:
                        raise SchemaError(f"filtration not face-closed at {s}")
                    if self.births[facet] > b:
                        raise SchemaError(f"face {facet} born after coface {s}")

    @classmethod
    def from_steps(cls, values: Sequence[float],
                   complexes: Sequence[SimplicialComplex]) -> "InclusionFiltration":
        if len(values) != len(complexes):
            raise SchemaError("values and complexes must align")
        if any(values[i] >= values[i + 1] for i in range(len(values) - 1)):
            raise SchemaError("parameter values must strictly increase")
        for i in range(len(complexes) - 1):
            if not complexes[i].is_subcomplex_of(complexes[i + 1]):
                raise SchemaError(f"step {i} is not included in step {i + 1}")
        births: dict = {}
        for t, K in zip(values, complexes):
            for s in K.simplices:
                births.setdefault(s, t)
        return cls(births)

    def values(self) -> list:
        return sorted(set(self.births.values()))

    def complex_at(self, t: float) -> SimplicialComplex:
        return SimplicialComplex(s for s, b in self.births.items() if b <= t)

    def max_complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.births.keys())

    def __len__(self) -> int:
        return len(self.births)


class Barcode:
    """Multisets of persistence intervals [birth, death) per degree; death is
    None for essential classes."""

    __slots__ = ("bars",)

    def __init__(self, bars: Mapping[int, Iterable[tuple]]):
        self.bars = {n: sorted(bs, key=lambda bd: (bd[0], bd[1] is None, bd[1]))
                     for n, bs in bars.items() if list(bs)}
        for n, bs in self.bars.items():
            for b, d in bs:
                if d is not None and not b < d:
                    raise SchemaError(f"degenerate bar [{b}, {d}) in degree {n}")

    def degree(self, n: int) -> list:
        return self.bars.get(n, [])

    def betti_at(self, t: float, n: int) -> int:
        return sum(1 for b, d in self.degree(n) if b <= t and (d is None or t < d))

    def to_json(self) -> list:
        return [{"degree": n, "bars": [[b, d] for b, d in bs]}
                for n, bs in sorted(self.bars.items())]

    def equals(self, other: "Barcode", tol: float = 0.0, degrees=None) -> bool:
        ns = set(self.bars) | set(other.bars)
        if degrees is not None:
            ns &= set(degrees)
        for n in ns:
            a, b = self.degree(n), other.degree(n)
            if len(a) != len(b):
                return False
            for (b1, d1), (b2, d2) in zip(a, b):
                if abs(b1 - b2) > tol:
                    return False
                if (d1 is None) != (d2 is None):
                    return False
                if d1 is not None and abs(d1 - d2) > tol:
                    return False
        return True


def barcode(F: InclusionFiltration, max_degree: int | None = None) -> Barcode:
    """Persistence barcode by standard Z/2 boundary-matrix reduction with
    simplices ordered by (birth, dimension, lexicographic).  Zero-length
    intervals are dropped."""
    simplices = sorted(F.births, key=lambda s: (F.births[s], len(s), s))
    index = {s: i for i, s in enumerate(simplices)}
    low_inverse: dict[int, int] = {}
    columns: dict[int, int] = {}
    pair_of: dict[int, int] = {}
    for j, s in enumerate(simplices):
        col = 0
        if len(s) > 1:
            for facet in combinations(s, len(s) - 1):
                col ^= 1 << index[facet]
        while col:
            p = col.bit_length() - 1
            if p not in low_inverse:
                low_inverse[p] = j
                columns[j] = col
                pair_of[p] = j
                break
            col ^= columns[low_inverse[p]]
    bars: dict[int, list] = {}
    for j, s in enumerate(simplices):
        if j in columns:  # negative simplex: kills the class born at its low
            continue
        n = len(s) - 1
        if max_degree is not None and n > max_degree:
            continue
        birth = F.births[s]
        death = F.births[simplices[pair_of[j]]] if j in pair_of else None
        if death is None or birth < death:
            bars.setdefault(n, []).append((birth, death))
    return Barcode(bars)


def components(K: SimplicialComplex) -> list:
    """Partition of the vertex set into connected components (union-find)."""
    parent = {v: v for v in K.vertices}

    def find(v):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    for e in K.simplices_of_dim(1):
        ra, rb = find(e[0]), find(e[1])
        if ra != rb:
            parent[rb] = ra
    groups: dict[int, list] = {}
    for v in K.vertices:
        groups.setdefault(find(v), []).append(v)
    return sorted(sorted(g) for g in groups.values())
