import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from scipy.optimize import linprog

from conftest import P, brute_force_facets, brute_force_vertices, random_poly
from polyzeta.errors import ForeignObjectError, UnsupportedError, ZeroPolynomialError
from polyzeta.newton import (
    NewtonPolyhedron,
    face_function,
    first_meet_locus,
    newton_polyhedron,
    omega_order,
    remoteness,
)
from polyzeta.polycore import LaurentPolynomial


def facet_set(np_):
    return {(F.normal, F.nu) for F in np_.facets}


@pytest.mark.parametrize(
    "text,n,verts,facets",
    [
        ("x1^2 + x2^3", 2, [(0, 3), (2, 0)], {((3, 2), 6), ((1, 0), 0), ((0, 1), 0)}),
        ("x1*x2", 2, [(1, 1)], {((1, 0), 1), ((0, 1), 1)}),
        ("x1 + x2", 2, [(0, 1), (1, 0)], {((1, 1), 1), ((1, 0), 0), ((0, 1), 0)}),
    ],
)
def test_newton_polyhedron_examples(text, n, verts, facets):
    np_ = newton_polyhedron(P(text, n))
    assert sorted(np_.vertices) == verts
    assert facet_set(np_) == facets


def test_zero_polynomial_rejected():
    with pytest.raises(ZeroPolynomialError):
        NewtonPolyhedron(LaurentPolynomial(2))


def test_laurent_input_rejected():
    with pytest.raises(UnsupportedError):
        NewtonPolyhedron(P("x1^-1 + x2", 2))


def test_omega_order_and_first_meet_locus(cusp):
    np_ = NewtonPolyhedron(cusp)
    assert omega_order(cusp, (1, 1)) == 2
    F = first_meet_locus(cusp, (1, 1))
    assert F.vertices == ((2, 0),) and F.dim == 0
    E = np_.first_meet_locus((3, 2))
    assert np_.omega_order((3, 2)) == 6
    assert E.vertices == ((0, 3), (2, 0)) and E.compact and E.dim == 1
    W = np_.first_meet_locus((0, 0))
    assert W.id == np_.improper_face and W.dim == 2
    assert np_.first_meet_locus((Fraction(1, 3), Fraction(1, 7))).vertices == ((0, 3),)


def test_first_meet_locus_rejects_negative_weights(cusp):
    with pytest.raises(ValueError):
        first_meet_locus(cusp, (1, -1))


def test_face_functions(cusp):
    np_ = NewtonPolyhedron(cusp)
    edge = np_.first_meet_locus((3, 2))
    assert face_function(cusp, edge, np_) == cusp
    assert np_.face_function(np_.face_of([(2, 0)], [])) == P("x1^2", 2)
    g = P("(x1+x2)^2", 2)
    h = NewtonPolyhedron(g)
    assert h.face_function(h.first_meet_locus((1, 1))) == g


def test_face_function_rejects_foreign_face(cusp):
    other = NewtonPolyhedron(P("x1*x2", 2))
    with pytest.raises(ForeignObjectError):
        NewtonPolyhedron(cusp).face_function(other.faces[-1])


@pytest.mark.parametrize(
    "text,n,t0,nu0",
    [("x1^2 + x2^3", 2, Fraction(6, 5), Fraction(5, 12)), ("x1*x2", 2, 1, Fraction(1, 2)), ("x1^2", 1, 2, Fraction(1, 4))],
)
def test_remoteness_examples(text, n, t0, nu0):
    rep = remoteness(P(text, n))
    assert rep.t0 == t0 and rep.nu0 == nu0
    assert rep.inverse_t0 == 1 / Fraction(t0)


def test_remoteness_undefined_when_all_offsets_vanish():
    with pytest.raises(UnsupportedError):
        remoteness(P("1 + x1", 2))


def test_json_shape(cusp):
    js = NewtonPolyhedron(cusp).to_json()
    assert js["n"] == 2
    assert {"u": [3, 2], "nu": 6} in js["facets"]
    assert all({"dim", "tight", "compact"} <= set(F) for F in js["faces"])


# -- oracle equivalence and lattice properties ---------------------------------------------


def _random_cases(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, 3)
        f = random_poly(rng, n, rng.randint(1, 8), 6)
        out.append(f)
    return out


CASES = _random_cases(40, 20261016)


@pytest.mark.parametrize("f", CASES, ids=lambda f: str(f)[:40])
def test_matches_brute_force_oracle(f):
    np_ = NewtonPolyhedron(f)
    pts = sorted(f.support())
    oracle = brute_force_facets(pts, f.n)
    assert facet_set(np_) == oracle
    assert sorted(np_.vertices) == brute_force_vertices(pts, oracle, f.n)


@pytest.mark.parametrize("f", CASES[:15], ids=lambda f: str(f)[:40])
def test_membership_matches_lp(f):
    np_ = NewtonPolyhedron(f)
    pts = np.array(sorted(f.support()), dtype=float)
    rng = random.Random(str(f))
    top = int(pts.max()) + 2
    for _ in range(1000 // 15 + 1):
        x = [Fraction(rng.randint(0, 10 * top), 10) for _ in range(f.n)]
        # x = sum l_j p_j + r, l >= 0, sum l = 1, r >= 0
        m = len(pts)
        A_eq = np.zeros((f.n + 1, m + f.n))
        A_eq[: f.n, :m] = pts.T
        A_eq[: f.n, m:] = np.eye(f.n)
        A_eq[f.n, :m] = 1
        b_eq = np.array([float(v) for v in x] + [1.0])
        lp = linprog(np.zeros(m + f.n), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        assert np_.contains(x) == (lp.status == 0)


@pytest.mark.parametrize("f", CASES, ids=lambda f: str(f)[:40])
def test_lattice_properties(f):
    np_ = NewtonPolyhedron(f)
    n = f.n
    for F in np_.facets:
        assert F.nu == omega_order(f, F.normal)
        assert np_.first_meet_locus(F.normal).codim == 1
    for face in np_.faces:
        normals = [np_.facets[j].normal for j in face.tight]
        rank = sympy.Matrix(normals).rank() if normals else 0
        assert rank == face.codim
        assert len(face.tight) >= face.codim
        assert face.compact == (not face.rays)
        assert set(face.support_points) == {mu for mu in f.support() if all(
            sum(a * b for a, b in zip(np_.facets[j].normal, mu)) == np_.facets[j].nu for j in face.tight)}
    assert np_.faces[np_.improper_face].dim == n


@pytest.mark.parametrize("f", [g for g in CASES if any(F.nu > 0 for F in NewtonPolyhedron(g).facets)],
                         ids=lambda f: str(f)[:40])
def test_diagonal_point_touches_boundary(f):
    np_ = NewtonPolyhedron(f)
    rep = np_.remoteness()
    diag = [rep.t0] * f.n
    assert np_.contains(diag)
    assert any(sum(u * d for u, d in zip(F.normal, diag)) == F.nu for F in np_.facets if F.nu > 0)
    assert rep.nu0 == min(Fraction(F.norm1, 2 * F.nu) for F in np_.facets if F.nu > 0)
