from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd

import pytest
import sympy

from polyzeta.parser import parse
from polyzeta.polycore import LaurentPolynomial

# Lines recorded by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def cusp() -> LaurentPolynomial:
    return parse("x1^2 + x2^3", 2)


def P(text: str, n: int) -> LaurentPolynomial:
    return parse(text, n)


def random_poly(rng: random.Random, n: int, terms: int, max_exp: int, with_constant=False) -> LaurentPolynomial:
    out: dict = {}
    terms = min(terms, (max_exp + 1) ** n - (0 if with_constant else 1))
    while len(out) < terms:
        mu = tuple(rng.randint(0, max_exp) for _ in range(n))
        if not any(mu) and not with_constant:
            continue
        out[mu] = rng.choice([1, -1, 2, -3, Fraction(1, 2), 5])
    return LaurentPolynomial(n, out)


# -- brute-force Newton polyhedron oracle (sympy nullspaces) -------------------


def _primitive(v):
    den = 1
    for x in v:
        den = den * x.q // gcd(den, x.q)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


def brute_force_facets(points, n):
    """Facets of conv(points) + R^n_{>=0} as {(u, nu)}, by trying every
    normal orthogonal to n-1 generators among point differences and e_i."""
    points = sorted(set(tuple(p) for p in points))
    units = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    gens = {tuple(b - a for a, b in zip(p, q)) for p in points for q in points if p != q}
    gens = sorted(gens | set(units))
    facets = set()
    for combo in itertools.combinations(gens, n - 1):
        if n == 1:
            ns = [sympy.Matrix([1])]
        else:
            ns = sympy.Matrix(combo).nullspace()
        if len(ns) != 1:
            continue
        u = _primitive([sympy.Rational(x) for x in ns[0]])
        for sgn in (1, -1):
            w = tuple(sgn * x for x in u)
            if any(x < 0 for x in w):
                continue
            nu = min(sum(a * b for a, b in zip(w, p)) for p in points)
            tight = [p for p in points if sum(a * b for a, b in zip(w, p)) == nu]
            rays = [e for i, e in enumerate(units) if w[i] == 0]
            dirs = [tuple(b - a for a, b in zip(tight[0], q)) for q in tight[1:]] + rays
            r = sympy.Matrix(dirs).rank() if dirs else 0
            if r == n - 1:
                facets.add((w, nu))
    return facets


def brute_force_vertices(points, facets, n):
    out = []
    for p in sorted(set(tuple(q) for q in points)):
        rows = [u for u, nu in facets if sum(a * b for a, b in zip(u, p)) == nu]
        if rows and sympy.Matrix(rows).rank() == n:
            out.append(p)
    return out


def sympy_jacobian_det(A):
    """Factored symbolic Jacobian determinant of psi_A, with its variables."""
    n = len(A)
    xs = sympy.symbols(f"x1:{n + 1}")
    images = [sympy.Mul(*[xs[j] ** A[j][k] for j in range(n)]) for k in range(n)]
    J = sympy.Matrix([[sympy.diff(images[k], xs[j]) for j in range(n)] for k in range(n)])
    return sympy.factor(J.det()), xs
