"""Exact H-representation of conv(points) + cone(rays).

Facet normals are found by combinatorial dual description: every facet is
pinned down by an affinely independent tight subset of the generators, so
we enumerate such subsets, take the (unique) normal inside the affine hull,
and keep it if it is valid and its tight set really spans a facet.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg

Halfspace = tuple[tuple[int, ...], Fraction]


def affine_directions(points: Sequence[Sequence], rays: Sequence[Sequence]) -> list[list]:
    p0 = points[0]
    dirs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    dirs += [list(r) for r in rays]
    return dirs


def affine_dimension(points: Sequence[Sequence], rays: Sequence[Sequence] = ()) -> int:
    if not points:
        raise ValueError("need at least one point")
    dirs = affine_directions(points, rays)
    return linalg.rank(dirs) if dirs else 0


def hrep(
    points: Sequence[Sequence], rays: Sequence[Sequence] = ()
) -> tuple[list[Halfspace], list[Halfspace]]:
    """Return ``(equalities, inequalities)`` describing conv(points) + cone(rays).

    Each entry is ``(a, b)`` with ``a`` a primitive integer vector, meaning
    ``a.x == b`` or ``a.x >= b`` respectively.  Inequalities are irredundant
    and their normals lie in the linear span of the polyhedron's directions,
    which makes them unique.
    """
    if not points:
        raise ValueError("need at least one point")
    points = [tuple(Fraction(x) for x in p) for p in points]
    rays = [tuple(Fraction(x) for x in r) for r in rays]
    n = len(points[0])
    dirs = affine_directions(points, rays)
    d = linalg.rank(dirs) if dirs else 0
    perp = linalg.nullspace(dirs, n) if dirs else linalg.nullspace([], n)
    perp_int = [linalg.primitive(v) for v in perp]
    equalities = [(a, Fraction(linalg.dot(a, points[0]))) for a in perp_int]
    if d == 0:
        return equalities, []

    inequalities: dict[tuple[int, ...], Fraction] = {}
    seen: set[tuple[int, ...]] = set()
    for i, p in enumerate(points):
        pool = [tuple(q[k] - p[k] for k in range(n)) for q in points[i + 1:]]
        pool += rays
        for subset in combinations(pool, d - 1):
            rows = [list(v) for v in subset] + [list(v) for v in perp_int]
            if rows and linalg.rank(rows) != n - 1:
                continue
            ns = linalg.nullspace(rows, n) if rows else linalg.nullspace([], n)
            if len(ns) != 1:
                continue
            c = linalg.primitive(ns[0])
            for sign in (1, -1):
                cand = tuple(sign * x for x in c)
                if cand in seen:
                    continue
                seen.add(cand)
                if any(linalg.dot(cand, r) < 0 for r in rays):
                    continue
                vals = [linalg.dot(cand, q) for q in points]
                b = min(vals)
                tight_pts = [q for q, v in zip(points, vals) if v == b]
                tight_rays = [r for r in rays if linalg.dot(cand, r) == 0]
                if affine_dimension(tight_pts, tight_rays) == d - 1:
                    inequalities[cand] = Fraction(b)
    return equalities, sorted(inequalities.items())


def contains(
    equalities: Sequence[Halfspace], inequalities: Sequence[Halfspace], x: Sequence
) -> bool:
    return all(linalg.dot(a, x) == b for a, b in equalities) and all(
        linalg.dot(a, x) >= b for a, b in inequalities
    )
