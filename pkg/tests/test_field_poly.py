from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from adict.field import QQ, FieldError, PrimeField, field_from_tag
from adict.poly import PolyError, PolyRing


F7 = PrimeField(7)


def test_prime_field_rejects_composite():
    with pytest.raises(FieldError):
        PrimeField(4)


def test_field_tags_round_trip():
    assert field_from_tag("Q") == QQ
    assert field_from_tag("F7") == F7
    assert field_from_tag(F7.tag) == F7


@given(st.integers(1, 6))
def test_prime_field_inverse(a):
    assert F7.mul(a, F7.inv(a)) == 1


@given(st.fractions(), st.fractions().filter(lambda x: x != 0))
def test_rational_arithmetic_matches_fraction(a, b):
    assert Fraction(QQ.div(QQ(a), QQ(b))) == a / b
    assert Fraction(QQ.sub(QQ(a), QQ(b))) == a - b


def test_integral_rationals_are_ints():
    assert type(QQ(Fraction(6, 3))) is int


R = PolyRing(QQ, ["x", "y"])

small = st.builds(
    lambda cs: R.parse("+".join(f"({c})*x^{i}*y^{j}" for (i, j), c in cs.items()) or "0"),
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-5, 5), max_size=5),
)


@given(small)
def test_parse_round_trip(p):
    assert R.parse(p.to_str()) == p


@given(small, small, small)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p - p == R.zero()


def test_parse_powers_and_rationals():
    p = R.parse("(x+y)^2 - 1/2*x*y")
    assert p == R.parse("x^2 + 3/2*x*y + y^2")
    assert p.degree() == 2 and p.is_homogeneous()


def test_parse_rejects_unknown_variable():
    with pytest.raises(PolyError):
        R.parse("x + z")


def test_weighted_degree():
    W = PolyRing(QQ, ["x", "y"], [1, 2])
    assert W.parse("x^2 + y").is_homogeneous()
    assert W.parse("x*y").degree() == 3
