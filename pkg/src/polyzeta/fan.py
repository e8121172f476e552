"""Rational cones and fans in the first orthant.

Covers the dual fan of a Newton polyhedron, vertex-preserving
simplicial refinement (placing triangulation), the dual-cone matrices
with diagonal pairing, Hilbert bases, regular refinement by stellar
subdivision, and the chart data of an affine toric piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

from . import hull, linalg
from .errors import ForeignObjectError, UnsupportedError
from .newton import Face, NewtonPolyhedron

Vector = tuple[int, ...]

MAX_HILBERT_DET = 10**6


@dataclass(frozen=True)
class RationalCone:
    """Cone spanned by primitive integer rays (its vertices), stored sorted."""

    rays: tuple[Vector, ...]
    n: int

    @classmethod
    def of(cls, rays: Iterable[Sequence[int]], n: int | None = None) -> RationalCone:
        rays = [linalg.primitive(r) for r in rays]
        if n is None:
            if not rays:
                raise ValueError("need the ambient dimension for the zero cone")
            n = len(rays[0])
        return cls(tuple(sorted(set(rays))), n)

    @cached_property
    def dim(self) -> int:
        return linalg.rank([list(r) for r in self.rays]) if self.rays else 0

    @property
    def is_simplicial(self) -> bool:
        return self.dim == len(self.rays)

    @property
    def is_full(self) -> bool:
        return self.dim == self.n

    @cached_property
    def multiplicity(self) -> int:
        """Index of the ray lattice in its saturation (|det| when full and simplicial)."""
        if not self.is_simplicial:
            raise UnsupportedError("multiplicity is defined for simplicial cones")
        k = len(self.rays)
        if k == 0:
            return 1
        cols = list(self.rays)
        g = 0
        for rows in combinations(range(self.n), k):
            minor = linalg.det([[c[r] for c in cols] for r in rows])
            g = math.gcd(g, int(minor))
        return g

    @property
    def is_regular(self) -> bool:
        return self.is_simplicial and self.multiplicity == 1

    @cached_property
    def _hrep(self):
        return hull.hrep([(0,) * self.n], list(self.rays))

    def contains(self, x: Sequence) -> bool:
        eq, ineq = self._hrep
        return hull.contains(eq, ineq, x)

    def contains_in_relint(self, x: Sequence) -> bool:
        eq, ineq = self._hrep
        return all(linalg.dot(a, x) == b for a, b in eq) and all(
            linalg.dot(a, x) > b for a, b in ineq
        )

    def coordinates(self, x: Sequence) -> list[Fraction]:
        """Coefficients of x in the ray basis (simplicial cones only)."""
        if not self.is_simplicial:
            raise UnsupportedError("coordinates need a simplicial cone")
        sol = linalg.solve(linalg.from_columns(self.rays), list(x))
        if sol is None:
            raise ValueError("point outside the linear span of the cone")
        return sol

    def matrix(self) -> list[list[int]]:
        """The n x k matrix with the rays as columns."""
        return linalg.from_columns(self.rays)

    def faces(self) -> list[RationalCone]:
        """All faces, including {0} and the cone itself."""
        if self.is_simplicial:
            return [
                RationalCone(tuple(sub), self.n)
                for k in range(len(self.rays) + 1)
                for sub in combinations(self.rays, k)
            ]
        eq, ineq = self._hrep
        found = {self.rays: None, (): None}
        for k in range(1, len(ineq) + 1):
            for subset in combinations(ineq, k):
                sub = tuple(r for r in self.rays if all(linalg.dot(a, r) == 0 for a, _ in subset))
                found.setdefault(sub, None)
        return [RationalCone(r, self.n) for r in found]

    def __str__(self) -> str:
        return "<" + ", ".join(str(r) for r in self.rays) + ">"


@dataclass
class Fan:
    """A face-closed collection of cones with support in the first orthant."""

    n: int
    cones: list[RationalCone]

    def __post_init__(self) -> None:
        closed: dict[RationalCone, None] = {}
        for c in self.cones:
            for face in c.faces():
                closed.setdefault(face, None)
        self.cones = sorted(closed, key=lambda c: (c.dim, c.rays))

    @classmethod
    def from_max_cones(cls, n: int, max_cones: Iterable[RationalCone]) -> Fan:
        return cls(n, list(max_cones))

    @property
    def rays(self) -> list[Vector]:
        return sorted({r for c in self.cones for r in c.rays})

    @property
    def vertices(self) -> set[Vector]:
        return set(self.rays)

    @property
    def max_cones(self) -> list[RationalCone]:
        return [c for c in self.cones if c.dim == self.n]

    @property
    def is_simplicial(self) -> bool:
        return all(c.is_simplicial for c in self.cones)

    @property
    def is_regular(self) -> bool:
        return all(c.is_regular for c in self.cones)

    def cones_containing(self, x: Sequence, relint: bool = False) -> list[RationalCone]:
        test = RationalCone.contains_in_relint if relint else RationalCone.contains
        return [c for c in self.cones if test(c, x)]

    def refines(self, coarse: Fan) -> bool:
        return all(
            any(all(big.contains(r) for r in c.rays) for big in coarse.max_cones)
            for c in self.max_cones
        )

    def to_json(self) -> dict:
        rays = self.rays
        idx = {r: k for k, r in enumerate(rays)}
        out = []
        for c in self.cones:
            if not c.rays:
                continue
            entry = {"ray_ids": [idx[r] for r in c.rays], "dim": c.dim}
            if c.is_simplicial:
                entry["det"] = c.multiplicity
                entry["regular"] = c.is_regular
            else:
                entry["det"] = None
                entry["regular"] = False
            out.append(entry)
        return {"rays": [list(r) for r in rays], "cones": out, "vertices": [list(r) for r in rays]}


class DualFan(Fan):
    """The normal fan of a Newton polyhedron, keeping the face/cone duality."""

    def __init__(self, np: NewtonPolyhedron):
        self.np = np
        self._cone_of: dict[int, RationalCone] = {}
        self._face_of: dict[RationalCone, int] = {}
        for F in np.faces:
            cone = RationalCone.of([np.facets[j].normal for j in F.tight], np.n)
            self._cone_of[F.id] = cone
            self._face_of[cone] = F.id
        super().__init__(np.n, list(self._cone_of.values()))

    def cone_of_face(self, F: Face) -> RationalCone:
        F = self.np.check_face(F)
        return self._cone_of[F.id]

    def face_of_cone(self, sigma: RationalCone) -> Face:
        try:
            return self.np.faces[self._face_of[sigma]]
        except KeyError:
            raise ForeignObjectError(f"cone {sigma} is not in the dual fan") from None


def dual_fan(np: NewtonPolyhedron) -> DualFan:
    return DualFan(np)


def face_of_cone(sigma_f: DualFan, sigma: RationalCone) -> Face:
    return sigma_f.face_of_cone(sigma)


def cone_of_face(sigma_f: DualFan, F: Face) -> RationalCone:
    return sigma_f.cone_of_face(F)


# -- triangulation --------------------------------------------------------


def placing_triangulation(rays: Sequence[Vector]) -> list[tuple[int, ...]]:
    """Placing triangulation of a pointed cone, adding rays in the given order.

    Returns index tuples into ``rays``.  Each ray must be extreme in the
    cone spanned by all of them.
    """
    n = len(rays[0])
    simplices: list[tuple[int, ...]] = [(0,)]
    placed = [0]
    for k in range(1, len(rays)):
        q = rays[k]
        current = [list(rays[i]) for i in placed]
        r_old = linalg.rank(current)
        if linalg.rank(current + [list(q)]) > r_old:
            simplices = [s + (k,) for s in simplices]
        else:
            perp = [list(linalg.primitive(v)) for v in linalg.nullspace(current, n)]
            facet_count: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
            for s in simplices:
                for drop in s:
                    facet = tuple(i for i in s if i != drop)
                    facet_count.setdefault(facet, []).append(s)
            new = []
            for facet, owners in facet_count.items():
                if len(owners) != 1:
                    continue
                (s,) = owners
                opposite = next(i for i in s if i not in facet)
                rows = [list(rays[i]) for i in facet] + perp
                ns = linalg.nullspace(rows, n) if rows else linalg.nullspace([], n)
                c = ns[0]
                side = linalg.dot(c, rays[opposite])
                if side < 0:
                    c = [-x for x in c]
                if linalg.dot(c, q) < 0:
                    new.append(tuple(sorted(facet + (k,))))
            if not new:
                raise ValueError(f"ray {q} is not extreme; cannot place it")
            simplices = simplices + new
        placed.append(k)
    return [tuple(sorted(s)) for s in simplices]


def triangulate_cone(cone: RationalCone, order: Sequence[Vector] | None = None) -> list[RationalCone]:
    if cone.is_simplicial:
        return [cone]
    rays = sorted(cone.rays, key=(order.index if order else None))
    return [RationalCone(tuple(sorted(rays[i] for i in s)), cone.n) for s in placing_triangulation(rays)]


def simplicialize(fan: Fan) -> Fan:
    """Simplicial refinement with the same rays.

    Every non-simplicial maximal cone gets the placing triangulation for the
    lexicographic order of all rays of the fan; using one global order keeps
    the triangulations of neighbouring cones compatible on shared faces.
    """
    order = sorted(fan.rays)
    maxes = [c for c in fan.cones if not any(c != d and set(c.rays) < set(d.rays) for d in fan.cones)]
    pieces = []
    for c in maxes:
        pieces.extend(triangulate_cone(c, order))
    return Fan.from_max_cones(fan.n, pieces)


# -- dual cones and Hilbert bases ---------------------------------------------


@dataclass(frozen=True)
class DualConePair:
    """Rays N of a full simplicial cone and rays M of its dual with N^t M diagonal."""

    N: tuple[tuple[int, ...], ...]
    M: tuple[tuple[int, ...], ...]
    Lambda: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.Lambda)

    def n_columns(self) -> list[Vector]:
        return linalg.columns(self.N)

    def m_columns(self) -> list[Vector]:
        return linalg.columns(self.M)

    @property
    def is_regular(self) -> bool:
        return all(l == 1 for l in self.Lambda) and abs(linalg.det(self.N)) == 1


def dual_cone(sigma: RationalCone | Sequence[Sequence[int]]) -> DualConePair:
    """Dual-cone generators v_i: v_i is orthogonal to every ray except u_i.

    Rays keep the order given (a matrix argument lists them as columns of
    ``N``; a ``RationalCone`` uses its sorted rays).
    """
    if isinstance(sigma, RationalCone):
        cols = list(sigma.rays)
        n = sigma.n
    else:
        cols = linalg.columns(sigma)
        n = len(sigma)
    if len(cols) != n or linalg.rank([list(c) for c in cols]) != n:
        raise UnsupportedError("dual_cone needs a full-dimensional simplicial cone")
    vs = []
    lam = []
    for i, u in enumerate(cols):
        others = [list(c) for j, c in enumerate(cols) if j != i]
        ns = linalg.nullspace(others, n) if others else linalg.nullspace([], n)
        v = linalg.primitive(ns[0])
        if linalg.dot(v, u) < 0:
            v = tuple(-x for x in v)
        vs.append(v)
        lam.append(int(linalg.dot(v, u)))
    N = tuple(tuple(r) for r in linalg.from_columns(cols))
    M = tuple(tuple(r) for r in linalg.from_columns(vs))
    return DualConePair(N, M, tuple(lam))


def parallelepiped_points(cols: Sequence[Vector]) -> list[Vector]:
    """Lattice points sum a_i u_i with 0 <= a_i < 1 (includes the origin)."""
    n = len(cols)
    N = linalg.from_columns(cols)
    d = abs(int(linalg.det(N)))
    if d == 0:
        raise UnsupportedError("degenerate simplicial cone")
    if d > MAX_HILBERT_DET:
        raise UnsupportedError(f"|det| = {d} exceeds the enumeration limit {MAX_HILBERT_DET}")
    H, _ = linalg.column_hermite(N)
    Ninv = linalg.inverse(N)
    diag = [H[i][i] for i in range(n)]
    out = set()
    for rep in product(*(range(h) for h in diag)):
        a = linalg.matvec(Ninv, rep)
        frac = [x - math.floor(x) for x in a]
        p = linalg.matvec(N, frac)
        out.add(tuple(int(x) for x in p))
    return sorted(out)


def hilbert_basis(cone: RationalCone) -> list[Vector]:
    """Minimal generating set of the semigroup cone ∩ Z^n."""
    if not cone.is_full:
        raise UnsupportedError("hilbert_basis needs a full-dimensional cone")
    eq, ineq = cone._hrep
    if linalg.rank([list(a) for a, _ in ineq]) < cone.n:
        raise UnsupportedError("cone is not pointed")
    candidates = set(cone.rays)
    for simplex in triangulate_cone(cone, sorted(cone.rays)):
        candidates.update(p for p in parallelepiped_points(simplex.rays) if any(p))
    cand = sorted(candidates)
    basis = []
    for x in cand:
        reducible = any(
            y != x and cone.contains(tuple(a - b for a, b in zip(x, y))) for y in cand
        )
        if not reducible:
            basis.append(x)
    return basis


# -- regularization -------------------------------------------------------------


def _stellar(max_cones: Sequence[RationalCone], v: Vector) -> tuple[list[RationalCone], list[tuple[int, int]]]:
    """Star subdivision at v; also returns (old det, new det) for each new cone."""
    out = []
    drops = []
    for tau in max_cones:
        coords = tau.coordinates(v)
        if any(c < 0 for c in coords):
            out.append(tau)
            continue
        old = tau.multiplicity
        for i, c in enumerate(coords):
            if c > 0:
                rays = list(tau.rays)
                rays[i] = v
                new = RationalCone(tuple(sorted(rays)), tau.n)
                out.append(new)
                drops.append((old, new.multiplicity))
    return out, drops


def regularize(fan: Fan) -> Fan:
    """Regular refinement by repeated stellar subdivision.

    The lexicographically least non-regular maximal cone is subdivided at
    the Hilbert-basis element giving the smallest total multiplicity.
    """
    if not fan.is_simplicial:
        raise UnsupportedError("regularize needs a simplicial fan")
    maxes = list(fan.max_cones)
    while True:
        bad = [c for c in maxes if c.multiplicity != 1]
        if not bad:
            break
        sigma = min(bad, key=lambda c: c.rays)
        best = None
        for v in hilbert_basis(sigma):
            if v in sigma.rays:
                continue
            new, drops = _stellar(maxes, v)
            score = sum(c.multiplicity for c in new)
            if best is None or (score, v) < (best[0], best[1]):
                best = (score, v, new, drops)
        assert best is not None, "non-regular cone without interior Hilbert-basis element"
        _, v, new, drops = best
        assert all(nd < od for od, nd in drops), "multiplicity did not decrease"
        maxes = new
    return Fan.from_max_cones(fan.n, maxes)


# -- charts ----------------------------------------------------------------------


@dataclass(frozen=True)
class ChartData:
    sigma: RationalCone
    pair: DualConePair
    generators: tuple[Vector, ...]
    relations: tuple[tuple[int, ...], ...]
    phi_matrix: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.sigma.n

    @property
    def w(self) -> tuple[Vector, ...]:
        return self.generators[2 * self.n:]

    def phi(self, x: Sequence[complex]) -> list[complex]:
        """Evaluate the chart parametrisation (psi_Lambda, psi_{N^t}, psi_{N^t W}) at x."""
        out = []
        for col in linalg.columns(self.phi_matrix):
            val = 1 + 0j
            for xi, e in zip(x, col):
                val *= complex(xi) ** e
            out.append(val)
        return out

    def relation_residuals(self, point: Sequence[complex]) -> list[float]:
        """|p^alpha+ - p^alpha-| for each relation alpha = alpha+ - alpha-."""
        res = []
        for rel in self.relations:
            lhs = 1 + 0j
            rhs = 1 + 0j
            for p, a in zip(point, rel):
                if a > 0:
                    lhs *= p**a
                elif a < 0:
                    rhs *= p ** (-a)
            res.append(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
        return res


def chart_data(sigma: RationalCone | Sequence[Sequence[int]]) -> ChartData:
    """Generators (v's, e's, w's) of the dual semigroup and their relation lattice.

    Duplicates between the v's and e's are kept in place, as the chart lists
    all three groups in that order.
    """
    pair = dual_cone(sigma)
    if not isinstance(sigma, RationalCone):
        sigma = RationalCone.of(linalg.columns(sigma))
    if any(x < 0 for r in sigma.rays for x in r):
        raise UnsupportedError("chart_data needs a cone inside the first orthant")
    n = sigma.n
    vs = pair.m_columns()
    es = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    dual = RationalCone.of(vs, n)
    ws = [h for h in hilbert_basis(dual) if h not in vs and h not in es]
    gens = tuple(vs + es + ws)
    G = linalg.from_columns(gens)
    relations = tuple(linalg.integer_kernel(G))
    Nt = linalg.transpose(pair.N)
    phi = tuple(tuple(r) for r in linalg.matmul(Nt, G))
    return ChartData(sigma, pair, gens, relations, phi)
