from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyzeta.parser import ParseError, parse
from polyzeta.polycore import GaussianRational as G
from polyzeta.polycore import LaurentPolynomial, Region, evaluate, gradient, restrict, support

I = G(0, 1)


# -- Gaussian rationals ----------------------------------------------------------


def test_gaussian_rational_is_reduced():
    z = G(Fraction(4, 6), Fraction(-10, 4))
    assert (z.re, z.im) == (Fraction(2, 3), Fraction(-5, 2))
    assert z.re.denominator > 0 and z.im.denominator > 0


def test_gaussian_rational_arithmetic():
    a, b = G(1, 2), G(Fraction(1, 2), -1)
    assert a * b == G(Fraction(5, 2), 0)
    assert (a / b) * b == a
    assert a - a == G(0)
    assert I**2 == G(-1)
    assert I**-1 == -I
    assert a.conjugate() == G(1, -2)
    assert a.norm() == 5


def test_gaussian_rational_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        G(1) / G(0)


# -- parsing ---------------------------------------------------------------------


def test_parse_cusp():
    assert parse("x1^2 + x2^3", 2).terms == {(2, 0): G(1), (0, 3): G(1)}


def test_parse_cancels_to_zero():
    f = parse("x1 - x1", 1)
    assert f.is_zero() and f.terms == {}


def test_parse_gaussian_coefficients():
    assert parse("3/2*x1*x2^2 + i*x1", 2).terms == {(1, 2): G(Fraction(3, 2)), (1, 0): I}


def test_parse_parenthesised_coefficient():
    f = parse("(1/2 - 3*i)*x1", 1)
    assert f.coefficient((1,)) == G(Fraction(1, 2), -3)


def test_parse_expands_powers_of_sums():
    assert parse("(x1+x2)^2", 2) == parse("x1^2 + 2*x1*x2 + x2^2", 2)
    assert parse("(x1 - 1)**3", 1) == parse("x1^3 - 3x1^2 + 3x1 - 1", 1)


def test_parse_implicit_multiplication_and_laurent():
    assert parse("2x1x2", 2) == LaurentPolynomial(2, {(1, 1): 2})
    assert parse("x1^-2 + x2^(-1)", 2).terms == {(-2, 0): G(1), (0, -1): G(1)}


@pytest.mark.parametrize(
    "text,pos",
    [("x1 + * x2", 5), ("x1^2 +", 6), ("x3", 0), ("x1 $ 2", 3), ("1/0", 2), ("(x1+1)^-1", 0)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse(text, 2)
    assert exc.value.pos == pos
    assert "<HERE>" in str(exc.value)


def test_parse_print_round_trip():
    for text in ["x1^2 + x2^3", "3/2*x1*x2^2 + i*x1", "-x1 + (2 - i)*x2^4", "1/3 - x1^(-2)*x2"]:
        f = parse(text, 2)
        assert parse(str(f), 2) == f


# -- support / restrict / evaluate / gradient ------------------------------------------


def test_support():
    assert support(parse("x1^2 + x2^3", 2)) == {(2, 0), (0, 3)}
    assert support(LaurentPolynomial(2)) == set()
    assert support(parse("x1*x2 + 2*x1*x2", 2)) == {(1, 1)}


def test_restrict_examples():
    f = parse("x1^2 + x2^3", 2)
    assert restrict(f, Region.cone([(1, 0)])) == parse("x1^2", 2)
    assert restrict(f, Region.orthant(2)) == f
    g = parse("(x1+x2)^2", 2)
    assert restrict(g, Region.hull([(2, 0), (0, 2)])) == g


def test_restrict_dimension_mismatch():
    with pytest.raises(ValueError):
        restrict(parse("x1", 1), Region.orthant(2))


def test_evaluate_and_gradient_examples():
    f = parse("x1^2 + x2^3", 2)
    assert evaluate(f, (1, 1)) == G(2)
    assert gradient(f) == [parse("2*x1", 2), parse("3*x2^2", 2)]
    assert all(g.is_zero() for g in gradient(parse("7/3", 2)))


def test_evaluate_exact_on_gaussian_points():
    f = parse("i*x1^2 - x2", 2)
    assert evaluate(f, (G(1, 1), Fraction(1, 2))) == G(Fraction(-5, 2), 0)


# -- properties ------------------------------------------------------------------


exps = st.tuples(st.integers(0, 4), st.integers(0, 4))
coefs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polys = st.dictionaries(exps, coefs, max_size=6).map(lambda d: LaurentPolynomial(2, d))
halfplanes = st.tuples(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-6, 6))
points = st.tuples(coefs, coefs)


@given(polys, st.lists(halfplanes, max_size=3))
def test_restrict_support_is_intersection(f, cons):
    region = Region(2, (), tuple((a, Fraction(b)) for a, b in cons))
    assert support(restrict(f, region)) == {mu for mu in support(f) if region.contains(mu)}


@given(polys, polys, points)
def test_evaluate_is_additive(f, g, p):
    assert evaluate(f + g, p) == evaluate(f, p) + evaluate(g, p)


@given(polys, points)
def test_evaluate_survives_round_trip(f, p):
    assert evaluate(parse(str(f), 2), p) == evaluate(f, p)


@settings(max_examples=100)
@given(polys, st.tuples(st.integers(1, 9), st.integers(1, 9)), st.integers(1, 5))
def test_gradient_matches_central_differences(f, num, den):
    p = [complex(num[0] / den, 0.3), complex(num[1] / den, -0.2)]
    h = 1e-6
    for i, df in enumerate(gradient(f)):
        up = list(p)
        dn = list(p)
        up[i] += h
        dn[i] -= h
        fd = (f.evaluate(up) - f.evaluate(dn)) / (2 * h)
        exact = df.evaluate(p)
        assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))
