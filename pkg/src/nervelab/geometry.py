"""Point clouds in R^d: minimal enclosing balls, Cech nerves and
filtrations, 2D Delaunay and alpha complexes with exact predicates, pointed
covers, the affine map from the subdivided nerve into the covered space, and
the partition-of-unity map back, with carried-ness checks.

Geometric arithmetic is float with absolute tolerance 1e-9; Delaunay
predicates are evaluated exactly over rationals with an index-order
perturbation for cocircular inputs.
"""

from __future__ import annotations

import csv
import io
import math
import random
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linprog, minimize

from .complexes import EMPTY, BarycentricPoint, SimplicialComplex, Simplex, closure
from .errors import SchemaError
from .homology import InclusionFiltration

TOL = 1e-9


class PointCloud:
    """A finite list of points in R^d."""

    __slots__ = ("d", "points")

    def __init__(self, d: int, points: Iterable[Sequence[float]]):
        self.d = int(d)
        self.points = tuple(tuple(float(x) for x in p) for p in points)
        for p in self.points:
            if len(p) != self.d:
                raise SchemaError(f"point {p} does not have dimension {self.d}")

    def __len__(self) -> int:
        return len(self.points)

    def subset(self, indices: Iterable[int]) -> list:
        return [self.points[i] for i in indices]

    def to_json(self) -> dict:
        return {"d": self.d, "points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, data) -> "PointCloud":
        if not isinstance(data, dict) or "points" not in data:
            raise SchemaError("cloud JSON needs 'd' and 'points'")
        pts = data["points"]
        d = data.get("d", len(pts[0]) if pts else 2)
        return cls(d, pts)

    @classmethod
    def from_csv(cls, text: str) -> "PointCloud":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(f.strip() for f in r)]
        try:
            pts = [[float(x) for x in r] for r in rows]
        except ValueError as exc:
            raise SchemaError(f"bad CSV point row: {exc}") from exc
        if not pts:
            raise SchemaError("empty point CSV")
        return cls(len(pts[0]), pts)


# ---------------------------------------------------------------------------
# minimal enclosing balls

def _ball_from_support(pts: Sequence) -> tuple:
    """Ball with all support points on its boundary and center in their
    affine hull."""
    if not pts:
        return None, -1.0
    p0 = np.asarray(pts[0], dtype=float)
    if len(pts) == 1:
        return tuple(p0), 0.0
    V = np.asarray(pts[1:], dtype=float) - p0
    G = 2.0 * V @ V.T
    b = np.einsum("ij,ij->i", V, V)
    try:
        x = np.linalg.solve(G, b)
    except np.linalg.LinAlgError:
        x = np.linalg.lstsq(G, b, rcond=None)[0]
    center = p0 + x @ V
    radius = max(float(np.linalg.norm(np.asarray(p, float) - center)) for p in pts)
    return tuple(float(c) for c in center), radius


def meb(points: Sequence[Sequence[float]], tol: float = TOL, seed: int = 0) -> tuple:
    """Smallest enclosing ball (center, radius) by move-to-front recursion."""
    pts = [tuple(float(x) for x in p) for p in points]
    if not pts:
        raise SchemaError("minimal enclosing ball of an empty point set")
    d = len(pts[0])
    rng = random.Random(seed)
    rng.shuffle(pts)

    def contains(ball, p):
        c, r = ball
        return c is not None and math.dist(c, p) <= r + tol

    def welzl(P, R):
        if not P or len(R) == d + 1:
            return _ball_from_support(R)
        p = P[-1]
        ball = welzl(P[:-1], R)
        if contains(ball, p):
            return ball
        return welzl(P[:-1], R + [p])

    center, radius = welzl(pts, [])
    return tuple(center), float(radius)


def meb_radius(points: Sequence[Sequence[float]], tol: float = TOL) -> float:
    return meb(points, tol=tol)[1]


# ---------------------------------------------------------------------------
# cover elements

class Ball:
    __slots__ = ("center", "radius")

    def __init__(self, center: Sequence[float], radius: float):
        if radius < 0:
            raise SchemaError("ball radius must be non-negative")
        self.center = tuple(float(x) for x in center)
        self.radius = float(radius)

    @property
    def d(self) -> int:
        return len(self.center)

    def __repr__(self) -> str:
        return f"Ball({self.center}, {self.radius})"


class Polytope:
    """Convex hull of a non-empty vertex list in dimension at most 3."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[Sequence[float]]):
        self.vertices = tuple(tuple(float(x) for x in v) for v in vertices)
        if not self.vertices:
            raise SchemaError("polytope needs at least one vertex")
        if len(self.vertices[0]) > 3:
            raise SchemaError("polytopes are supported up to dimension 3")

    @property
    def d(self) -> int:
        return len(self.vertices[0])

    def __repr__(self) -> str:
        return f"Polytope({len(self.vertices)} vertices, d={self.d})"


def _point_to_hull_distance(x: Sequence[float], vertices: Sequence) -> float:
    """Distance from a point to a convex hull: project onto the affine hull of
    every vertex subset of size at most d+1 and keep feasible projections."""
    x = np.asarray(x, dtype=float)
    d = len(x)
    if _hull_membership(x, vertices):
        return 0.0
    best = math.inf
    verts = [np.asarray(v, dtype=float) for v in vertices]
    for k in range(1, min(len(verts), d + 1) + 1):
        for S in combinations(range(len(verts)), k):
            ps = [verts[i] for i in S]
            p0 = ps[0]
            if k == 1:
                proj, coords = p0, [1.0]
            else:
                V = np.stack([p - p0 for p in ps[1:]])
                G = V @ V.T
                b = V @ (x - p0)
                try:
                    lam = np.linalg.solve(G, b)
                except np.linalg.LinAlgError:
                    lam = np.linalg.lstsq(G, b, rcond=None)[0]
                proj = p0 + lam @ V
                coords = [1.0 - float(np.sum(lam))] + [float(t) for t in lam]
            if all(c >= -1e-9 for c in coords):
                best = min(best, float(np.linalg.norm(x - proj)))
    return best


def _hull_membership(x: Sequence[float], vertices: Sequence, tol: float = TOL) -> bool:
    """Convex-combination feasibility via linear programming."""
    V = np.asarray(vertices, dtype=float)
    n = V.shape[0]
    A_eq = np.vstack([V.T, np.ones(n)])
    b_eq = np.concatenate([np.asarray(x, dtype=float), [1.0]])
    res = linprog(np.zeros(n), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * n,
                  method="highs")
    if not res.success:
        return False
    recon = res.x @ V
    return float(np.linalg.norm(recon - np.asarray(x, float))) <= 1e-7


def element_distance(x: Sequence[float], e) -> float:
    """Distance from a point to a cover element (0 inside)."""
    if isinstance(e, Ball):
        return max(0.0, math.dist(tuple(x), e.center) - e.radius)
    if isinstance(e, Polytope):
        if len(x) != e.d:
            raise SchemaError("dimension mismatch")
        return _point_to_hull_distance(x, e.vertices)
    raise SchemaError(f"unsupported cover element {e!r}")


def element_membership(x: Sequence[float], e, tol: float = TOL) -> bool:
    if isinstance(e, Ball):
        return math.dist(tuple(x), e.center) <= e.radius + tol
    if isinstance(e, Polytope):
        if len(x) != e.d:
            raise SchemaError("dimension mismatch")
        return _hull_membership(x, e.vertices, tol)
    raise SchemaError(f"unsupported cover element {e!r}")


def element_pair_distance(a, b) -> float:
    """Distance between two cover elements; hull-to-hull distance reduces to
    the distance from the origin to the hull of pairwise differences."""
    if isinstance(a, Ball) and isinstance(b, Ball):
        return max(0.0, math.dist(a.center, b.center) - a.radius - b.radius)
    if isinstance(a, Ball):
        return max(0.0, element_distance(a.center, b) - a.radius)
    if isinstance(b, Ball):
        return element_pair_distance(b, a)
    diffs = [tuple(x - y for x, y in zip(v, w)) for v in a.vertices for w in b.vertices]
    return _point_to_hull_distance(np.zeros(a.d), diffs)


class GeometricCover:
    """Indexed cover of a subset of R^d by balls or convex polytopes."""

    __slots__ = ("d", "elements", "index_set")

    def __init__(self, d: int, elements: Mapping[int, object]):
        self.d = int(d)
        self.elements = dict(elements)
        self.index_set = tuple(sorted(self.elements))
        for i, e in self.elements.items():
            if e.d != self.d:
                raise SchemaError(f"element {i} has ambient dimension {e.d}, not {self.d}")

    def distances(self, x: Sequence[float]) -> dict:
        return {i: element_distance(x, e) for i, e in self.elements.items()}

    def gap(self, J: Iterable[int], tol: float = TOL) -> float:
        """min over x of the largest distance to the elements indexed by J;
        zero iff the intersection is non-empty."""
        J = tuple(sorted(set(J)))
        elems = [self.elements[i] for i in J]
        if len(elems) == 1:
            return 0.0
        if all(isinstance(e, Ball) for e in elems):
            radii = {e.radius for e in elems}
            if len(radii) == 1:
                return max(0.0, meb_radius([e.center for e in elems]) - radii.pop())
        # generic convex case: direct minimization of the max distance
        start = np.mean([np.asarray(e.center if isinstance(e, Ball) else e.vertices[0],
                                    dtype=float) for e in elems], axis=0)

        def worst(x):
            return max(element_distance(x, e) for e in elems)

        res = minimize(worst, start, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
        return max(0.0, float(res.fun))


def geometric_nerve(cover: GeometricCover, max_dim: int | None = None,
                    tol: float = TOL) -> SimplicialComplex:
    """Nerve of a geometric cover: J enters iff its gap vanishes.  Subsets
    larger than d+1 are decided by their facets (convex elements)."""
    d = cover.d
    simps: set = set()
    frontier = []
    for i in cover.index_set:
        simps.add((i,))
        frontier.append((i,))
    size = 1
    while frontier and (max_dim is None or size <= max_dim):
        nxt = []
        for J in frontier:
            for i in cover.index_set:
                if i <= J[-1]:
                    continue
                J2 = J + (i,)
                if any(J2[:k] + J2[k + 1:] not in simps for k in range(len(J2))):
                    continue
                if J2 in simps:
                    continue
                if len(J2) > d + 1 or cover.gap(J2) <= tol:
                    simps.add(J2)
                    nxt.append(J2)
        frontier = nxt
        size += 1
    return SimplicialComplex(simps) if simps else EMPTY


def thickening_eps(cover: GeometricCover, tol: float = TOL) -> float:
    """Largest safe metric thickening: half the smallest gap over minimal
    empty index sets (of size at most d+1, by convexity); 1 if none are
    empty."""
    nerve_small = geometric_nerve(cover, max_dim=cover.d, tol=tol)
    gaps = []
    idx = cover.index_set
    for k in range(2, min(len(idx), cover.d + 1) + 1):
        for J in combinations(idx, k):
            if J in nerve_small.simplices:
                continue
            if any(J[:m] + J[m + 1:] not in nerve_small.simplices for m in range(len(J))):
                continue  # not minimal
            gaps.append(cover.gap(J))
    positive = [g for g in gaps if g > tol]
    if not positive:
        return 1.0
    return min(positive) / 2.0


# ---------------------------------------------------------------------------
# Cech complexes and filtrations

def cech_nerve(cloud: PointCloud, r: float, max_dim: int | None = None,
               tol: float = TOL) -> SimplicialComplex:
    """Simplices are point subsets whose minimal enclosing ball has radius at
    most r (closed balls); subsets beyond d+1 points follow from their facets."""
    if r < 0:
        raise SchemaError("radius must be non-negative")
    births = _cech_births(cloud, max_dim)
    simps = {s for s, b in births.items() if b <= r + tol}
    return SimplicialComplex(simps) if simps else EMPTY


def _cech_births(cloud: PointCloud, max_dim: int | None) -> dict:
    n = len(cloud)
    d = cloud.d
    births: dict = {(i,): 0.0 for i in range(n)}
    frontier = [(i,) for i in range(n)]
    size = 1
    while frontier and (max_dim is None or size <= max_dim):
        nxt = []
        for s in frontier:
            for i in range(s[-1] + 1, n):
                s2 = s + (i,)
                if s2 in births:
                    continue
                facets = [s2[:k] + s2[k + 1:] for k in range(len(s2))]
                if any(f not in births for f in facets):
                    continue
                lower = max(births[f] for f in facets)
                if len(s2) <= d + 1:
                    b = max(meb_radius(cloud.subset(s2)), lower)
                else:
                    b = lower  # Helly: determined by the (d+1)-subsets
                births[s2] = b
                nxt.append(s2)
        frontier = nxt
        size += 1
    return births


def cech_filtration(cloud: PointCloud, max_dim: int | None = None) -> InclusionFiltration:
    """Each simplex is born at its minimal enclosing ball radius."""
    return InclusionFiltration(_cech_births(cloud, max_dim))


# ---------------------------------------------------------------------------
# 2D Delaunay and alpha complexes with exact predicates

def _orient(a, b, c) -> int:
    ax, ay = map(Fraction, a)
    bx, by = map(Fraction, b)
    cx, cy = map(Fraction, c)
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (det > 0) - (det < 0)


def _incircle_perturbed(pts: Sequence, ia: int, ib: int, ic: int, idx: int) -> bool:
    """True iff point idx lies strictly inside the circumcircle of the CCW
    triangle (ia, ib, ic), after perturbing the lifted heights in index order
    (lower index dominates).  Exact rational arithmetic throughout."""
    rows = [ia, ib, ic, idx]
    if _orient(pts[ia], pts[ib], pts[ic]) < 0:
        rows = [ia, ic, ib, idx]
    M = []
    for i in rows:
        x, y = Fraction(pts[i][0]), Fraction(pts[i][1])
        M.append([x, y, x * x + y * y, Fraction(1)])
    det = _det4(M)
    if det != 0:
        return det > 0
    # cofactors of the height column, in order of the perturbation weights
    for i in sorted(rows):
        pos = rows.index(i)
        sub = [[M[rr][cc] for cc in (0, 1, 3)] for rr in range(4) if rr != pos]
        cof = _det3(sub) * (1 if pos % 2 == 0 else -1)
        # height column has index 2, so the sign is (-1)^(pos+2)
        if cof != 0:
            return cof > 0
    return False


def _det3(m) -> Fraction:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _det4(m) -> Fraction:
    total = Fraction(0)
    for c in range(4):
        sub = [[m[r][cc] for cc in range(4) if cc != c] for r in range(1, 4)]
        term = m[0][c] * _det3(sub)
        total += term if c % 2 == 0 else -term
    return total


def _circumcenter(a, b, c) -> tuple:
    ax, ay = map(Fraction, a)
    bx, by = map(Fraction, b)
    cx, cy = map(Fraction, c)
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0:
        raise SchemaError("collinear points have no circumcenter")
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    return ux, uy


def _circumradius(a, b, c) -> float:
    ux, uy = _circumcenter(a, b, c)
    r2 = (ux - Fraction(a[0])) ** 2 + (uy - Fraction(a[1])) ** 2
    return math.sqrt(float(r2))


def delaunay_2d(cloud: PointCloud) -> SimplicialComplex:
    """Delaunay complex of a planar cloud: triangles whose circumdisks are
    empty under the index-order perturbation; collinear clouds yield the path
    of consecutive edges."""
    if cloud.d != 2:
        raise SchemaError("Delaunay construction requires d = 2")
    n = len(cloud)
    if n < 1:
        raise SchemaError("Delaunay construction needs at least one point")
    pts = cloud.points
    if len(set(pts)) != n:
        raise SchemaError("duplicate points are not supported")
    if n == 1:
        return SimplicialComplex([(0,)])
    if all(_orient(pts[i], pts[j], pts[k]) == 0
           for i, j, k in combinations(range(n), 3)):
        order = sorted(range(n), key=lambda i: pts[i])
        edges = [tuple(sorted((order[k], order[k + 1]))) for k in range(n - 1)]
        return closure(edges)
    triangles = []
    for i, j, k in combinations(range(n), 3):
        if _orient(pts[i], pts[j], pts[k]) == 0:
            continue
        if any(m not in (i, j, k) and _incircle_perturbed(pts, i, j, k, m)
               for m in range(n)):
            continue
        triangles.append((i, j, k))
    return closure(triangles + [(i,) for i in range(n)])


def alpha_values_2d(cloud: PointCloud, dt: SimplicialComplex | None = None,
                    tol: float = TOL) -> dict:
    """Radius of the smallest empty circumscribing ball per Delaunay simplex:
    circumradius for triangles; for edges, half the length if the diametral
    disk is empty (Gabriel), else the smallest incident triangle value;
    vertices enter at zero."""
    dt = dt if dt is not None else delaunay_2d(cloud)
    pts = cloud.points
    vals: dict = {}
    for v in dt.simplices_of_dim(0):
        vals[v] = 0.0
    tri_vals = {}
    for t in dt.simplices_of_dim(2):
        tri_vals[t] = _circumradius(pts[t[0]], pts[t[1]], pts[t[2]])
        vals[t] = tri_vals[t]
    for e in dt.simplices_of_dim(1):
        a, b = pts[e[0]], pts[e[1]]
        mid = tuple((Fraction(x) + Fraction(y)) / 2 for x, y in zip(a, b))
        rad2 = sum((Fraction(x) - m) ** 2 for x, m in zip(a, mid))
        gabriel = True
        for m in range(len(pts)):
            if m in e:
                continue
            d2 = sum((Fraction(x) - c) ** 2 for x, c in zip(pts[m], mid))
            if d2 < rad2:
                gabriel = False
                break
        if gabriel:
            vals[e] = math.sqrt(float(rad2))
        else:
            incident = [tri_vals[t] for t in dt.simplices_of_dim(2) if set(e) <= set(t)]
            if not incident:
                raise SchemaError(f"non-Gabriel edge {e} has no incident triangle")
            vals[e] = min(incident)
    return vals


def alpha_complex_2d(cloud: PointCloud, r: float, tol: float = TOL) -> SimplicialComplex:
    if cloud.d != 2:
        raise SchemaError("alpha construction requires d = 2")
    vals = alpha_values_2d(cloud)
    simps = {s for s, v in vals.items() if v <= r + tol}
    return SimplicialComplex(simps) if simps else EMPTY


def alpha_filtration_2d(cloud: PointCloud) -> InclusionFiltration:
    if cloud.d != 2:
        raise SchemaError("alpha construction requires d = 2")
    return InclusionFiltration(alpha_values_2d(cloud))


# ---------------------------------------------------------------------------
# pointed covers and the two comparison maps

class PointedGeometricCover:
    """A geometric cover with a chosen point in each non-empty intersection
    indexed by a nerve simplex."""

    __slots__ = ("cover", "nerve", "points")

    def __init__(self, cover: GeometricCover, nerve_cx: SimplicialComplex,
                 points: Mapping[Simplex, Sequence[float]], tol: float = TOL):
        self.cover = cover
        self.nerve = nerve_cx
        self.points = {tuple(s): tuple(map(float, p)) for s, p in points.items()}
        for s in nerve_cx.simplices:
            if s not in self.points:
                raise SchemaError(f"nerve simplex {s} has no point")
            p = self.points[s]
            for i in s:
                if element_distance(p, cover.elements[i]) > 10 * tol:
                    raise SchemaError(f"point of {s} lies outside element {i}")


def pointed_cech_cover(cloud: PointCloud, r: float, max_dim: int | None = None,
                       tol: float = TOL) -> PointedGeometricCover:
    """Closed balls of radius r pointed by minimal-enclosing-ball centers,
    which are radius-independent."""
    cover = GeometricCover(cloud.d, {i: Ball(p, r) for i, p in enumerate(cloud.points)})
    N = cech_nerve(cloud, r, max_dim=max_dim, tol=tol)
    points = {s: meb(cloud.subset(s))[0] for s in N.simplices}
    return PointedGeometricCover(cover, N, points, tol=tol)


class GammaMap:
    """Affine map from the subdivided nerve into the covered space, determined
    by one point per nerve simplex."""

    __slots__ = ("nerve", "assignment", "d")

    def __init__(self, nerve_cx: SimplicialComplex, assignment: Mapping[Simplex, Sequence[float]],
                 d: int):
        self.nerve = nerve_cx
        self.assignment = {tuple(s): tuple(map(float, p)) for s, p in assignment.items()}
        self.d = d
        for s in nerve_cx.simplices:
            if s not in self.assignment:
                raise SchemaError(f"nerve simplex {s} has no assigned point")

    def vertex_image(self, s: Simplex) -> tuple:
        return self.assignment[tuple(s)]

    def evaluate(self, bp) -> tuple:
        """Evaluate affinely at a point of the nerve, through the chain of
        prefix simplices that carries it in the subdivision."""
        out = np.zeros(self.d)
        for prefix, mu in sd_chain(bp):
            out += mu * np.asarray(self.assignment[prefix])
        return tuple(float(x) for x in out)


def sd_chain(bp) -> list:
    """Decompose a barycentric point of a complex into subdivision
    coordinates: the chain of prefix simplices in decreasing-coordinate order
    (ties by vertex id) with weights (i+1)(nu_i - nu_{i+1}); zero weights are
    dropped."""
    order = sorted(zip(bp.support, bp.coords), key=lambda vc: (-vc[1], vc[0]))
    verts = [v for v, _ in order]
    nus = [c for _, c in order]
    m = len(verts) - 1
    out = []
    for i in range(m + 1):
        mu = (i + 1) * (nus[i] - nus[i + 1]) if i < m else (m + 1) * nus[m]
        if mu > 0:
            out.append((tuple(sorted(verts[: i + 1])), mu))
    return out


def gamma_map(pc: PointedGeometricCover) -> GammaMap:
    return GammaMap(pc.nerve, pc.points, pc.cover.d)


def check_gamma_carried(g: GammaMap, cover: GeometricCover, tol: float = TOL) -> tuple:
    """Vertex-level carried check: the point of J must lie in every element
    indexed by J (sufficient by convexity and affine linearity).  Returns
    (ok, witness) where witness is a violating (index, J) or None."""
    for J in sorted(g.nerve.simplices, key=lambda s: (len(s), s)):
        p = g.assignment[J]
        for i in J:
            if element_distance(p, cover.elements[i]) > tol:
                return False, (i, J)
    return True, None


# ---------------------------------------------------------------------------
# the partition-of-unity map

class PsiContext:
    """Precomputed thickening radius and nerve for repeated evaluations."""

    __slots__ = ("cover", "nerve", "eps")

    def __init__(self, cover: GeometricCover, nerve_cx: SimplicialComplex | None = None,
                 eps: float | None = None, tol: float = TOL):
        self.cover = cover
        self.nerve = nerve_cx if nerve_cx is not None else geometric_nerve(cover, tol=tol)
        self.eps = eps if eps is not None else thickening_eps(cover, tol=tol)


def psi_eval(x: Sequence[float], ctx: PsiContext, tol: float = TOL):
    """Partition-of-unity coordinates of a point of the covered space on the
    nerve: each element contributes the normalized distance to the complement
    of its thickening over the sum of distances, which simplifies to
    max(0, eps - dist)/eps before normalization."""
    dists = ctx.cover.distances(x)
    if min(dists.values()) > tol:
        raise SchemaError(f"point {tuple(x)} lies outside every cover element")
    eps = ctx.eps
    phi = {}
    for i, delta in dists.items():
        inner = max(0.0, eps - delta)  # distance to the thickening's complement
        denom = delta + inner
        phi[i] = inner / denom if denom > 0 else 0.0
    total = sum(phi.values())
    if total <= 0:
        raise SchemaError("all partition functions vanish; not in the union")
    support = tuple(sorted(i for i, v in phi.items() if v > 0))
    if support not in ctx.nerve.simplices:
        raise SchemaError(
            f"support {support} is not a nerve simplex; thickening too large")
    return BarycentricPoint(ctx.nerve, support, [phi[i] / total for i in support])


def check_psi_carried(x: Sequence[float], i: int, ctx: PsiContext,
                      tol: float = TOL) -> bool:
    """Membership in element i must force the i-th coordinate to be maximal
    (ties allowed)."""
    if element_distance(x, ctx.cover.elements[i]) > tol:
        raise SchemaError(f"point is not in element {i}")
    bp = psi_eval(x, ctx, tol=tol)
    ci = bp.coord_of(i)
    return all(ci >= c - tol for c in bp.coords)


def homotopy_witness(x: Sequence[float], ctx: PsiContext, g: GammaMap,
                     tol: float = TOL) -> int:
    """An index i with both x and the image of its partition-of-unity point
    under the affine map inside element i; convexity then keeps the connecting
    segment in that element."""
    bp = psi_eval(x, ctx, tol=tol)
    gx = g.evaluate(bp)
    candidates = [i for i in ctx.cover.index_set
                  if element_distance(x, ctx.cover.elements[i]) <= tol]
    for i in candidates:
        if element_distance(gx, ctx.cover.elements[i]) <= tol:
            return i
    raise SchemaError(
        f"no common element for {tuple(x)} and {gx}; candidates {candidates}")
