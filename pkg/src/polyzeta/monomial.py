"""Monomial maps psi_M and pullbacks of polynomials along them.

``psi_M`` sends z to the point whose k-th coordinate is z^(column k of M),
so psi_M o psi_N = psi_{N M} and f o psi_M has support M . supp(f).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from . import linalg
from .errors import PolyzetaError, UnsupportedError
from .fan import RationalCone
from .newton import NewtonPolyhedron
from .polycore import GaussianRational, LaurentPolynomial, Region


class IdentityViolation(PolyzetaError, AssertionError):
    """An identity that must hold by construction failed; indicates a bug."""


@dataclass(frozen=True)
class MonomialMap:
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if any(len(row) != len(m) for row in m):
            raise ValueError("monomial maps need a square matrix")
        if linalg.det(m) == 0:
            raise UnsupportedError("singular exponent matrix")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def det(self) -> int:
        return int(linalg.det(self.matrix))

    @property
    def covering_degree(self) -> int:
        return abs(self.det)

    def apply(self, point: Sequence):
        return apply(self, point)

    def compose(self, other: MonomialMap) -> MonomialMap:
        """self o other."""
        return compose(self, other)


def _as_matrix(M) -> tuple[tuple[int, ...], ...]:
    return M.matrix if isinstance(M, MonomialMap) else tuple(tuple(r) for r in M)


def apply(M, point: Sequence) -> list:
    """psi_M(point).  Exact for Gaussian-rational input, complex otherwise."""
    m = _as_matrix(M)
    n = len(m)
    if len(point) != n:
        raise ValueError("point has the wrong length")
    exact = all(isinstance(x, (int, Rational, GaussianRational)) for x in point)
    pt = [GaussianRational.coerce(x) for x in point] if exact else [complex(x) for x in point]
    out = []
    for k in range(n):
        val = GaussianRational(1) if exact else 1 + 0j
        for j in range(n):
            e = m[j][k]
            if e == 0:
                continue
            if not pt[j]:
                if e < 0:
                    raise ZeroDivisionError(
                        f"coordinate {j + 1} is zero but carries exponent {e}"
                    )
                val = val * 0
                continue
            val = val * pt[j] ** e
        out.append(val)
    return out


def compose(M, N) -> MonomialMap:
    """psi_M o psi_N, which is psi of the product N M."""
    return MonomialMap(tuple(tuple(r) for r in linalg.matmul(_as_matrix(N), _as_matrix(M))))


def jacobian_exponents(A: Sequence[Sequence[int]]) -> tuple[int, tuple[int, ...]]:
    """det D(psi_A) = det A * prod x_i^(|u_i| - 1), with u_i the rows of A."""
    A = [list(map(int, row)) for row in A]
    if any(x < 0 for row in A for x in row):
        raise UnsupportedError("the Jacobian formula needs nonnegative exponents")
    return int(linalg.det(A)), tuple(sum(row) - 1 for row in A)


def transform(f: LaurentPolynomial, M) -> LaurentPolynomial:
    """f o psi_M, exponent mu going to M mu."""
    m = _as_matrix(M)
    if linalg.det(m) == 0:
        raise UnsupportedError("singular exponent matrix")
    return LaurentPolynomial(
        f.n, {tuple(linalg.matvec(m, mu)): c for mu, c in f.items()}
    )


def _cone_matrix(sigma) -> tuple[list[tuple[int, ...]], list[list[int]]]:
    """(rays in column order, N^t)."""
    if isinstance(sigma, RationalCone):
        cols = list(sigma.rays)
    else:
        cols = linalg.columns(sigma)
    return cols, [list(c) for c in cols]


def dual_vertex(f: LaurentPolynomial, sigma, np: NewtonPolyhedron | None = None) -> tuple[int, ...]:
    """The vertex b of NP(f) with supp(f) in b + sigma^dual."""
    np = np or NewtonPolyhedron(f)
    cols, _ = _cone_matrix(sigma)
    omega = [sum(c[i] for c in cols) for i in range(f.n)]
    face = np.first_meet_locus(omega)
    if face.dim != 0:
        raise UnsupportedError(
            "cone is not subordinated to f: its interior meets a positive-dimensional face"
        )
    (b,) = face.vertices
    for u in cols:
        if linalg.dot(u, b) != np.omega_order(u):
            raise UnsupportedError(f"ray {u} is not minimised at the vertex {b}")
    return b


@dataclass(frozen=True)
class VertexFactorization:
    vertex: tuple[int, ...]
    b_image: tuple[int, ...]
    h: LaurentPolynomial
    pullback: LaurentPolynomial


def factor_vertex(f: LaurentPolynomial, sigma, np: NewtonPolyhedron | None = None) -> VertexFactorization:
    """Write f o psi_{N^t} = x^b_image * h with h(0) != 0."""
    np = np or NewtonPolyhedron(f)
    cols, Nt = _cone_matrix(sigma)
    if len(cols) != f.n or linalg.det(Nt) == 0:
        raise UnsupportedError("factor_vertex needs a full-dimensional simplicial cone")
    b = dual_vertex(f, sigma, np)
    b_image = tuple(int(x) for x in linalg.matvec(Nt, b))
    g = transform(f, Nt)
    h = g.shift(tuple(-x for x in b_image))
    if not h.is_polynomial() or not h.constant_term():
        raise IdentityViolation(f"pullback {g} is not x^{b_image} times a unit")
    expected = tuple(int(np.omega_order(u)) for u in cols)
    if expected != b_image:
        raise IdentityViolation(f"b_image {b_image} differs from the orders {expected}")
    return VertexFactorization(b, b_image, h, g)


def face_transform_check(
    f: LaurentPolynomial, sigma, J: Sequence[int], np: NewtonPolyhedron | None = None
) -> LaurentPolynomial:
    """h_tau for the face tau of sigma spanned by the rays indexed by J (0-based).

    Checks that restricting f o psi_{N^t} to b_image + <e_i : i not in J>
    equals pulling back the face function of the face dual to tau.
    """
    np = np or NewtonPolyhedron(f)
    cols, Nt = _cone_matrix(sigma)
    J = sorted(set(J))
    fac = factor_vertex(f, sigma, np)
    omega = [sum(cols[j][i] for j in J) for i in range(f.n)]
    F_tau = np.first_meet_locus(omega)
    lhs = transform(np.face_function(F_tau), Nt)
    n = f.n
    units = [tuple(int(i == k) for k in range(n)) for i in range(n)]
    region = Region(
        n,
        tuple((units[j], Fraction(fac.b_image[j])) for j in J),
        tuple((units[i], Fraction(fac.b_image[i])) for i in range(n) if i not in J),
    )
    rhs = fac.pullback.restrict(region)
    if lhs != rhs:
        raise IdentityViolation(f"restriction mismatch: {lhs} != {rhs}")
    h_tau = lhs.shift(tuple(-x for x in fac.b_image))
    if h_tau.depends_on() & set(J):
        raise IdentityViolation(f"h_tau = {h_tau} depends on a variable indexed by J")
    if not h_tau.is_polynomial() or not h_tau.constant_term():
        raise IdentityViolation(f"h_tau = {h_tau} vanishes at the origin")
    return h_tau
