"""Newton polyhedra: H-representation, vertices, face lattice, omega-orders."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import hull, linalg
from .errors import ForeignObjectError, UnsupportedError, ZeroPolynomialError
from .polycore import LaurentPolynomial, Region


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]
    nu: int

    @property
    def norm1(self) -> int:
        return sum(self.normal)


@dataclass(frozen=True)
class Face:
    id: int
    dim: int
    n: int
    tight: frozenset[int]
    vertices: tuple[tuple[int, ...], ...]
    rays: tuple[int, ...]
    support_points: tuple[tuple[int, ...], ...]

    @property
    def codim(self) -> int:
        return self.n - self.dim

    @property
    def compact(self) -> bool:
        return not self.rays

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "dim": self.dim,
            "tight": sorted(self.tight),
            "compact": self.compact,
            "vertices": [list(v) for v in self.vertices],
            "rays": list(self.rays),
        }


@dataclass(frozen=True)
class RemotenessReport:
    """Diagonal position of the Newton boundary.

    ``t0`` is the parameter where the diagonal meets the boundary and
    ``nu0 = min |u| / (2 nu_u)``, which equals ``1 / (2 t0)``.  The factor
    two comes from normalising |a|_C as the squared modulus; ``inverse_t0``
    is reported as well for readers using the plain-modulus normalisation.
    """

    t0: Fraction
    nu0: Fraction
    attaining_normals: tuple[tuple[int, ...], ...]

    @property
    def inverse_t0(self) -> Fraction:
        return 1 / self.t0

    def to_json(self) -> dict:
        return {
            "t0": str(self.t0),
            "nu0": str(self.nu0),
            "inverse_t0": str(self.inverse_t0),
            "attaining_normals": [list(u) for u in self.attaining_normals],
        }


class NewtonPolyhedron:
    """conv(support of f) + the first orthant, with its full face lattice."""

    def __init__(self, f: LaurentPolynomial):
        if f.is_zero():
            raise ZeroPolynomialError("the zero polynomial has no Newton polyhedron")
        if not f.is_polynomial():
            raise UnsupportedError("Newton polyhedra are built for polynomials only")
        self.f = f
        self.n = n = f.n
        self.support = sorted(f.support())
        units = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        _, ineqs = hull.hrep(self.support, units)
        self.facets = [Facet(a, int(b)) for a, b in ineqs]
        self.vertices = [
            mu
            for mu in self.support
            if linalg.rank([list(F.normal) for F in self.facets if self._tight(F, mu)] or [[0] * n])
            == n
        ]
        self._build_faces()

    @staticmethod
    def _tight(F: Facet, mu: Sequence) -> bool:
        return linalg.dot(F.normal, mu) == F.nu

    def _closure(self, verts: frozenset, rays: frozenset) -> tuple[frozenset, frozenset, frozenset]:
        tight = frozenset(
            j
            for j, F in enumerate(self.facets)
            if all(self._tight(F, v) for v in verts) and all(F.normal[i] == 0 for i in rays)
        )
        verts = frozenset(
            v for v in self.vertices if all(self._tight(self.facets[j], v) for j in tight)
        )
        rays = frozenset(
            i for i in range(self.n) if all(self.facets[j].normal[i] == 0 for j in tight)
        )
        return tight, verts, rays

    def _build_faces(self) -> None:
        found: dict[tuple[frozenset, frozenset], frozenset] = {}
        frontier = []
        for j in range(len(self.facets)):
            F = self.facets[j]
            verts = frozenset(v for v in self.vertices if self._tight(F, v))
            rays = frozenset(i for i in range(self.n) if F.normal[i] == 0)
            key = self._closure(verts, rays)
            if (key[1], key[2]) not in found:
                found[(key[1], key[2])] = key[0]
                frontier.append((key[1], key[2]))
        # Vertices are faces too, even when n == 1 makes them facets already.
        for v in self.vertices:
            key = self._closure(frozenset([v]), frozenset())
            if (key[1], key[2]) not in found:
                found[(key[1], key[2])] = key[0]
                frontier.append((key[1], key[2]))
        while frontier:
            new = []
            known = list(found)
            for a in frontier:
                for b in known:
                    verts = a[0] & b[0]
                    if not verts:
                        continue
                    key = self._closure(verts, a[1] & b[1])
                    if (key[1], key[2]) not in found:
                        found[(key[1], key[2])] = key[0]
                        new.append((key[1], key[2]))
            frontier = new
        whole = (frozenset(self.vertices), frozenset(range(self.n)))
        found.setdefault(whole, frozenset())

        records = []
        for (verts, rays), tight in found.items():
            vs = sorted(verts)
            rs = sorted(rays)
            units = [tuple(int(i == j) for j in range(self.n)) for i in rs]
            dim = hull.affine_dimension(vs, units)
            records.append((dim, vs, rs, tight))
        records.sort(key=lambda r: (r[0], r[1], r[2]))
        self.faces: list[Face] = []
        self._index: dict[tuple, int] = {}
        for k, (dim, vs, rs, tight) in enumerate(records):
            pts = tuple(
                mu for mu in self.support if all(self._tight(self.facets[j], mu) for j in tight)
            )
            face = Face(k, dim, self.n, tight, tuple(vs), tuple(rs), pts)
            self.faces.append(face)
            self._index[(tuple(vs), tuple(rs))] = k
        self.improper_face = self._index[(tuple(sorted(self.vertices)), tuple(range(self.n)))]

    # -- queries ---------------------------------------------------------

    def contains(self, x: Sequence) -> bool:
        return all(xi >= 0 for xi in x) and all(
            linalg.dot(F.normal, x) >= F.nu for F in self.facets
        )

    def face(self, face_id: int) -> Face:
        if not 0 <= face_id < len(self.faces):
            raise ForeignObjectError(f"no face with id {face_id}")
        return self.faces[face_id]

    def check_face(self, F: Face) -> Face:
        if not isinstance(F, Face) or F.n != self.n or F.id >= len(self.faces) or (
            self.faces[F.id] != F
        ):
            raise ForeignObjectError("face does not belong to this Newton polyhedron")
        return F

    def face_of(self, verts, rays) -> Face:
        key = (tuple(sorted(verts)), tuple(sorted(rays)))
        try:
            return self.faces[self._index[key]]
        except KeyError:
            raise ForeignObjectError(f"no face with vertices {key[0]} and rays {key[1]}") from None

    def faces_of_dim(self, dim: int) -> list[Face]:
        return [F for F in self.faces if F.dim == dim]

    def facets_containing(self, F: Face) -> list[Facet]:
        return [self.facets[j] for j in sorted(F.tight)]

    def omega_order(self, omega: Sequence) -> Fraction:
        return omega_order(self.f, omega)

    def first_meet_locus(self, omega: Sequence) -> Face:
        omega = [Fraction(w) for w in omega]
        if len(omega) != self.n:
            raise ValueError("omega has the wrong length")
        if any(w < 0 for w in omega):
            raise ValueError("omega must be componentwise nonnegative")
        nu = self.omega_order(omega)
        verts = [v for v in self.vertices if linalg.dot(omega, v) == nu]
        rays = [i for i in range(self.n) if omega[i] == 0]
        return self.face_of(verts, rays)

    def face_function(self, F: Face) -> LaurentPolynomial:
        F = self.check_face(F)
        eqs = tuple((self.facets[j].normal, Fraction(self.facets[j].nu)) for j in sorted(F.tight))
        return self.f.restrict(Region(self.n, eqs, ()))

    def remoteness(self) -> RemotenessReport:
        positive = [F for F in self.facets if F.nu > 0]
        if not positive:
            raise UnsupportedError("every facet has nu_u = 0; remoteness is undefined")
        t0 = max(Fraction(F.nu, F.norm1) for F in positive)
        attaining = tuple(F.normal for F in positive if Fraction(F.nu, F.norm1) == t0)
        return RemotenessReport(t0, 1 / (2 * t0), attaining)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"u": list(F.normal), "nu": F.nu} for F in self.facets],
            "faces": [F.to_json() for F in self.faces],
        }


def newton_polyhedron(f: LaurentPolynomial) -> NewtonPolyhedron:
    return NewtonPolyhedron(f)


def omega_order(f: LaurentPolynomial, omega: Sequence) -> Fraction:
    """min over the support of omega . mu."""
    if f.is_zero():
        raise ZeroPolynomialError("omega-order of the zero polynomial")
    omega = [Fraction(w) for w in omega]
    return min(Fraction(linalg.dot(omega, mu)) for mu in f.support())


def first_meet_locus(f: LaurentPolynomial, omega: Sequence) -> Face:
    return NewtonPolyhedron(f).first_meet_locus(omega)


def face_function(f: LaurentPolynomial, F: Face, np: NewtonPolyhedron | None = None):
    return (np or NewtonPolyhedron(f)).face_function(F)


def remoteness(f: LaurentPolynomial) -> RemotenessReport:
    return NewtonPolyhedron(f).remoteness()
