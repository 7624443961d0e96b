"""Seeded desk-scale instances used by the verification suites and tests:
small named complexes, random 2-complexes, the hexagon circle model with its
three-arc cover, and random planar clouds.
"""

from __future__ import annotations

import math
import random

from .complexes import SimplicialComplex, closure
from .covers import IndexedCover
from .geometry import PointCloud


def edge_complex() -> SimplicialComplex:
    return closure([(0, 1)])


def triangle_boundary() -> SimplicialComplex:
    return closure([(0, 1), (1, 2), (0, 2)])


def full_triangle() -> SimplicialComplex:
    return closure([(0, 1, 2)])


def octahedron_boundary() -> SimplicialComplex:
    """Poles 0, 1 over the equatorial 4-cycle 2-3-4-5."""
    tris = [(0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 2, 5),
            (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 2, 5)]
    return closure(tris)


def torus_seven() -> SimplicialComplex:
    """The 7-vertex triangulation of the torus: 14 triangles on Z/7."""
    tris = [tuple(sorted(((i, (i + 1) % 7, (i + 3) % 7)))) for i in range(7)]
    tris += [tuple(sorted(((i, (i + 2) % 7, (i + 3) % 7)))) for i in range(7)]
    return closure(tris)


def hexagon() -> SimplicialComplex:
    return closure([(i, (i + 1) % 6) for i in range(6)])


def hexagon_three_arc_cover() -> IndexedCover:
    """Three arcs of two edges each, pairwise meeting in one vertex with empty
    triple intersection; the combinatorial circle-by-arcs cover."""
    K = hexagon()
    arcs = {
        0: closure([(0, 1), (1, 2)]),
        1: closure([(2, 3), (3, 4)]),
        2: closure([(4, 5), (0, 5)]),
    }
    return IndexedCover(K, arcs)


def octahedron_hemisphere_cover() -> IndexedCover:
    """Upper and lower closed cones over the equatorial 4-cycle."""
    K = octahedron_boundary()
    upper = closure([(0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 2, 5)])
    lower = closure([(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 2, 5)])
    return IndexedCover(K, {0: upper, 1: lower})


def random_two_complex(seed: int, max_simplices: int = 40) -> SimplicialComplex:
    """A random 2-complex on up to eight vertices, trimmed to the size cap."""
    rng = random.Random(seed)
    n = rng.randint(4, 8)
    gens = [(v,) for v in range(n)]
    tri_budget = rng.randint(1, 5)
    for _ in range(tri_budget):
        tri = tuple(sorted(rng.sample(range(n), 3)))
        gens.append(tri)
    for _ in range(rng.randint(1, 6)):
        gens.append(tuple(sorted(rng.sample(range(n), 2))))
    K = closure(gens)
    while len(K) > max_simplices:
        top = K.maximal_simplices()
        K = closure([s for s in top if s != top[-1]] or [(0,)])
    return K


def complex_corpus(random_count: int = 20) -> dict:
    """The named complex corpus plus seeded random 2-complexes."""
    out = {
        "edge": edge_complex(),
        "triangle_boundary": triangle_boundary(),
        "full_triangle": full_triangle(),
        "octahedron": octahedron_boundary(),
        "torus7": torus_seven(),
    }
    for seed in range(random_count):
        out[f"random_{seed:02d}"] = random_two_complex(seed)
    return out


def unit_square_cloud() -> PointCloud:
    return PointCloud(2, [(0, 0), (1, 0), (1, 1), (0, 1)])


def equilateral_cloud() -> PointCloud:
    return PointCloud(2, [(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])


def random_cloud(seed: int) -> PointCloud:
    """Seeded planar cloud with 4 to 6 points; every fifth seed is a noisy
    circle so that degree-1 persistence is exercised."""
    rng = random.Random(seed)
    n = 4 + seed % 3
    if seed % 5 == 0:
        n = 6
        pts = []
        for k in range(n):
            ang = 2 * math.pi * k / n + rng.uniform(-0.1, 0.1)
            rad = 1.0 + rng.uniform(-0.05, 0.05)
            pts.append((rad * math.cos(ang), rad * math.sin(ang)))
    else:
        pts = [(rng.uniform(0, 2), rng.uniform(0, 2)) for _ in range(n)]
    return PointCloud(2, pts)


def cloud_corpus(count: int = 25) -> dict:
    return {f"cloud_{seed:02d}": random_cloud(seed) for seed in range(count)}
