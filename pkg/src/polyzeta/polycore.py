"""Exact multivariate Laurent polynomials over the Gaussian rationals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from . import hull, linalg

Exponent = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """An element re + im*i of Q(i), kept in lowest terms by ``Fraction``."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value))
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, float):
            return cls(Fraction(value))
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        d = o.norm()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int) -> GaussianRational:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        sign = "-" if self.im < 0 else "+"
        return f"({self.re} {sign} {_imag_str(abs(self.im))})"

    def __repr__(self) -> str:
        return f"GaussianRational({self})"


def _imag_str(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return f"{q}*i"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)


class LaurentPolynomial:
    """Sparse Laurent polynomial in x1..xn with Gaussian-rational coefficients.

    Instances are immutable; arithmetic returns new objects.  Zero
    coefficients are never stored.
    """

    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Sequence[int], object] | None = None):
        if n < 0:
            raise ValueError("dimension must be nonnegative")
        clean: dict[Exponent, GaussianRational] = {}
        for mu, c in (terms or {}).items():
            mu = tuple(int(e) for e in mu)
            if len(mu) != n:
                raise ValueError(f"exponent {mu} does not have length {n}")
            c = GaussianRational.coerce(c)
            total = clean.get(mu, ZERO) + c
            if total:
                clean[mu] = total
            else:
                clean.pop(mu, None)
        self._n = n
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def constant(cls, n: int, c=1) -> LaurentPolynomial:
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> LaurentPolynomial:
        """The coordinate x_i, 1-based as in the input grammar."""
        if not 1 <= i <= n:
            raise ValueError(f"variable x{i} out of range for n={n}")
        return cls(n, {tuple(int(j == i - 1) for j in range(n)): 1})

    @classmethod
    def monomial(cls, exponent: Sequence[int], c=1) -> LaurentPolynomial:
        return cls(len(exponent), {tuple(exponent): c})

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> dict[Exponent, GaussianRational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, mu: Sequence[int]) -> GaussianRational:
        return self._terms.get(tuple(mu), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_polynomial(self) -> bool:
        return all(e >= 0 for mu in self._terms for e in mu)

    def constant_term(self) -> GaussianRational:
        return self.coefficient((0,) * self._n)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPolynomial):
            return self._n == other._n and self._terms == other._terms
        if isinstance(other, (int, Rational, GaussianRational)):
            return self == LaurentPolynomial.constant(self._n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, tuple(self._terms.items())))
        return self._hash

    def _lift(self, other) -> LaurentPolynomial:
        if isinstance(other, LaurentPolynomial):
            if other._n != self._n:
                raise ValueError("dimension mismatch")
            return other
        return LaurentPolynomial.constant(self._n, other)

    def __add__(self, other):
        o = self._lift(other)
        terms = dict(self._terms)
        for mu, c in o._terms.items():
            terms[mu] = terms.get(mu, ZERO) + c
        return LaurentPolynomial(self._n, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self._n, {mu: -c for mu, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        acc: dict[Exponent, GaussianRational] = {}
        for mu, a in self._terms.items():
            for nu, b in o._terms.items():
                key = tuple(x + y for x, y in zip(mu, nu))
                acc[key] = acc.get(key, ZERO) + a * b
        return LaurentPolynomial(self._n, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            if self.is_monomial() and isinstance(k, int):
                (mu, c), = self._terms.items()
                return LaurentPolynomial(self._n, {tuple(k * e for e in mu): c ** k})
            raise ValueError("only nonnegative integer powers of non-monomials")
        result = LaurentPolynomial.constant(self._n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def support(self) -> set[Exponent]:
        """The exponents carrying a nonzero coefficient."""
        return set(self._terms)

    def restrict(self, region: Region) -> LaurentPolynomial:
        if region.n != self._n:
            raise ValueError(f"region lives in dimension {region.n}, polynomial in {self._n}")
        return LaurentPolynomial(
            self._n, {mu: c for mu, c in self._terms.items() if region.contains(mu)}
        )

    def shift(self, mu: Sequence[int]) -> LaurentPolynomial:
        """Multiply by x^mu (mu may be negative)."""
        return LaurentPolynomial(
            self._n, {tuple(a + b for a, b in zip(nu, mu)): c for nu, c in self._terms.items()}
        )

    def partial(self, i: int) -> LaurentPolynomial:
        """Formal partial derivative with respect to x_{i+1} (0-based index)."""
        out = {}
        for mu, c in self._terms.items():
            if mu[i] != 0:
                nu = list(mu)
                nu[i] -= 1
                out[tuple(nu)] = c * mu[i]
        return LaurentPolynomial(self._n, out)

    def gradient(self) -> list[LaurentPolynomial]:
        return [self.partial(i) for i in range(self._n)]

    def evaluate(self, point: Sequence):
        """Evaluate at a point.

        Exact (``GaussianRational``) when every coordinate is an int,
        ``Fraction`` or ``GaussianRational``; otherwise Python complex.
        """
        if len(point) != self._n:
            raise ValueError(f"point has length {len(point)}, expected {self._n}")
        exact = all(isinstance(x, (int, Rational, GaussianRational)) for x in point)
        if exact:
            pt = [GaussianRational.coerce(x) for x in point]
            total = ZERO
            for mu, c in self._terms.items():
                term = c
                for x, e in zip(pt, mu):
                    if e:
                        term = term * x ** e
                total = total + term
            return total
        pt = [complex(x) for x in point]
        total = 0j
        for mu, c in self._terms.items():
            term = complex(c)
            for x, e in zip(pt, mu):
                if e:
                    term *= x ** e
            total += term
        return total

    def __call__(self, *point):
        return self.evaluate(point)

    def max_degree(self) -> int:
        return max((sum(mu) for mu in self._terms), default=0)

    def depends_on(self) -> set[int]:
        """0-based indices of variables appearing with a nonzero exponent."""
        return {i for mu in self._terms for i, e in enumerate(mu) if e != 0}

    def to_arrays(self):
        """(exponents as int array [T, n], coefficients as complex array [T])."""
        import numpy as np

        if not self._terms:
            return np.zeros((0, self._n), dtype=np.int64), np.zeros(0, dtype=complex)
        exps = np.array(list(self._terms.keys()), dtype=np.int64).reshape(-1, self._n)
        coefs = np.array([complex(c) for c in self._terms.values()], dtype=complex)
        return exps, coefs

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mu, c in sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(_power_str(i, e) for i, e in enumerate(mu) if e)
            parts.append(_term_str(c, mono))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"LaurentPolynomial(n={self._n}, {self})"


def _power_str(i: int, e: int) -> str:
    if e == 1:
        return f"x{i + 1}"
    return f"x{i + 1}^{e}" if e > 0 else f"x{i + 1}^({e})"


def _term_str(c: GaussianRational, mono: str) -> str:
    if not mono:
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return f"-{mono}"
    return f"{c}*{mono}"


@dataclass(frozen=True)
class Region:
    """A rational polyhedron given by equalities a.x == b and inequalities a.x >= b."""

    n: int
    equalities: tuple[tuple[tuple, Fraction], ...] = field(default=())
    inequalities: tuple[tuple[tuple, Fraction], ...] = field(default=())

    def __post_init__(self) -> None:
        for a, _ in self.equalities + self.inequalities:
            if len(a) != self.n:
                raise ValueError(f"constraint {a} does not have length {self.n}")

    @classmethod
    def orthant(cls, n: int) -> Region:
        ineq = tuple((tuple(int(i == j) for j in range(n)), Fraction(0)) for i in range(n))
        return cls(n, (), ineq)

    @classmethod
    def hull(cls, points: Iterable[Sequence], rays: Iterable[Sequence] = ()) -> Region:
        """conv(points) + cone(rays), converted to constraints exactly."""
        points = [tuple(p) for p in points]
        eq, ineq = hull.hrep(points, list(rays))
        return cls(len(points[0]), tuple(eq), tuple(ineq))

    @classmethod
    def cone(cls, rays: Sequence[Sequence]) -> Region:
        n = len(rays[0])
        return cls.hull([(0,) * n], rays)

    @classmethod
    def affine(cls, base: Sequence, directions: Sequence[Sequence]) -> Region:
        """The affine subspace base + span(directions)."""
        n = len(base)
        perp = linalg.nullspace([list(d) for d in directions], n) if directions else (
            linalg.nullspace([], n)
        )
        eq = []
        for v in perp:
            a = linalg.primitive(v)
            eq.append((a, Fraction(linalg.dot(a, base))))
        return cls(n, tuple(eq), ())

    def intersect(self, other: Region) -> Region:
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return Region(
            self.n,
            self.equalities + other.equalities,
            self.inequalities + other.inequalities,
        )

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.n:
            raise ValueError("dimension mismatch")
        return hull.contains(self.equalities, self.inequalities, x)


def support(f: LaurentPolynomial) -> set[Exponent]:
    return f.support()


def restrict(f: LaurentPolynomial, region: Region) -> LaurentPolynomial:
    return f.restrict(region)


def evaluate(f: LaurentPolynomial, point: Sequence):
    return f.evaluate(point)


def gradient(f: LaurentPolynomial) -> list[LaurentPolynomial]:
    return f.gradient()
