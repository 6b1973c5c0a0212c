import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rendezvous.numerics import (
    D,
    Polynomial,
    QuadraticNumber,
    RationalFunction,
    decode_rational,
    encode_rational,
    poly_gcd,
    quadratic_eval,
    quadratic_roots,
    to_decimal,
)

P_STAR = QuadraticNumber(Fraction(-77, 4), Fraction(3, 4))

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)
quads = st.builds(QuadraticNumber, rationals, rationals)
small_polys = st.lists(st.integers(-20, 20), min_size=0, max_size=5).map(Polynomial)


def test_identity_function_at_p_star():
    f = RationalFunction(Polynomial.x())
    assert quadratic_eval(f, P_STAR) == QuadraticNumber(Fraction(-77, 4), Fraction(3, 4))


def test_block_formula_at_p_star():
    f = RationalFunction.from_coeffs([43, -14, 25], [9, 18, -27])
    assert quadratic_eval(f, P_STAR) == QuadraticNumber(Fraction(15, 12), Fraction(1, 12))


def test_constant_function():
    assert quadratic_eval(RationalFunction(2), QuadraticNumber(3, 7)) == 2


def test_eval_zero_denominator_raises():
    # 2p^2 + 77p - 25 vanishes at the optimal p
    f = RationalFunction(Polynomial([1]), Polynomial([-25, 77, 2]))
    with pytest.raises(ZeroDivisionError):
        quadratic_eval(f, P_STAR)


def test_zero_norm_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        QuadraticNumber(0, 0).inverse()


@pytest.mark.parametrize(
    "x, digits, text",
    [
        (QuadraticNumber(Fraction(15, 12), Fraction(1, 12)), 6, "3.42466"),
        (P_STAR, 6, "0.321983"),
        (QuadraticNumber(0), 6, "0.000000"),
        (Fraction(32377, 16200), 6, "1.99858"),
        (Fraction(1, 8), 2, "0.12"),  # half-even
        (Fraction(3, 8), 2, "0.38"),
        (Fraction(-5, 2), 1, "-2"),
        (Fraction(999999, 100000), 3, "10.0"),
        (Fraction(123456), 3, "123000"),
    ],
)
def test_to_decimal(x, digits, text):
    assert to_decimal(x, digits) == text


def test_to_decimal_fixed_places():
    assert to_decimal(Fraction(1, 3), 4, fixed=True) == "0.3333"
    assert to_decimal(P_STAR, 9, fixed=True) == "0.321982526"


def test_to_decimal_rejects_zero_digits():
    with pytest.raises(ValueError):
        to_decimal(Fraction(1), 0)


@settings(max_examples=300, deadline=None)
@given(quads)
def test_to_decimal_matches_double(x):
    text = to_decimal(x, 10)
    v = float(x)
    assert math.isclose(float(text), v, rel_tol=1e-9, abs_tol=1e-12)


@settings(max_examples=200, deadline=None)
@given(quads, quads, quads)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a != 0:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@settings(max_examples=200, deadline=None)
@given(quads, quads)
def test_ordering_agrees_with_floats(a, b):
    if abs(float(a) - float(b)) > 1e-9:
        assert (a < b) == (float(a) < float(b))


def test_sign_of_near_cancellation():
    # 26^2 = 676 < 681 so sqrt(681) - 26 > 0
    assert QuadraticNumber(-26, 1).sign() == 1
    assert QuadraticNumber(27, -1).sign() == 1
    assert QuadraticNumber(26, -1).sign() == -1


def test_polynomial_divmod_roundtrip():
    a = Polynomial([1, -3, 0, 2, 5])
    b = Polynomial([2, 1, 1])
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_poly_gcd():
    a = Polynomial([1, -1]) * Polynomial([2, 3]) * Polynomial([5, 0, 1])
    b = Polynomial([1, -1]) * Polynomial([5, 0, 1]) * Polynomial([7])
    assert poly_gcd(a, b) == (Polynomial([1, -1]) * Polynomial([5, 0, 1])).monic()


def test_quadratic_roots_of_stationarity_equation():
    r = quadratic_roots(Polynomial([-25, 77, 2]))
    assert r[1] == P_STAR


@settings(max_examples=150, deadline=None)
@given(small_polys, small_polys.filter(lambda p: not p.is_zero()), st.integers(1, 9))
def test_canonicalization_idempotent_and_semantic(num, den, k):
    f = RationalFunction(num, den)
    c = f.canonical()
    assert c.canonical().num == c.num and c.canonical().den == c.den
    assert c == f
    scaled = RationalFunction(num * Fraction(k, 7), den * Fraction(k, 7))
    sc = scaled.canonical()
    assert (sc.num, sc.den) == (c.num, c.den)
    assert scaled == f


def test_canonical_form_has_integer_coprime_coefficients():
    f = RationalFunction(Polynomial([Fraction(2, 3), Fraction(4, 3)]), Polynomial([Fraction(-2, 5), 0, Fraction(-6, 5)]))
    c = f.canonical()
    coeffs = c.num.integer_coeffs() + c.den.integer_coeffs()
    assert math.gcd(*coeffs) == 1
    assert c.den.leading() > 0


def test_json_encodings():
    assert encode_rational(Fraction(1, 12)) == "1/12"
    assert encode_rational(3) == "3/1"
    assert decode_rational("2/3") == Fraction(2, 3)
    q = QuadraticNumber(Fraction(-77, 4), Fraction(3, 4))
    assert q.to_json() == {"a": "-77/4", "b": "3/4", "d": D}
    assert QuadraticNumber.from_json(q.to_json()) == q
    f = RationalFunction.from_coeffs([1, 2], [3, 0, 4])
    assert RationalFunction.from_json(f.to_json()) == f
    assert Polynomial([1, 0, -5]).to_json() == ["1/1", "0/1", "-5/1"]


def test_random_triples_field_axioms_seeded():
    rng = random.Random(7)

    def rnd():
        return QuadraticNumber(Fraction(rng.randint(-99, 99), rng.randint(1, 40)), Fraction(rng.randint(-99, 99), rng.randint(1, 40)))

    for _ in range(500):
        a, b, c = rnd(), rnd(), rnd()
        assert a * (b + c) == a * b + a * c
        if a != 0:
            assert a.inverse() * a == 1
