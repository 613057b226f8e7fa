import pytest
import sympy
from hypothesis import given, settings, strategies as st

from adict.field import QQ, PrimeField
from adict.groebner import ResourceLimit, set_gb_step_limit
from adict.rings import IdealSpec, make_ring, groebner_basis, normal_form


def grevlex_monic(P):
    return P.exquo_ground(P.LC(order="grevlex"))


def sympy_gb(field, names, gens):
    syms = sympy.symbols(names)
    kw = {"modulus": field.characteristic} if field.characteristic else {"domain": "QQ"}
    G = sympy.groebner([sympy.sympify(g.replace("^", "**")) for g in gens], *syms, order="grevlex", **kw)
    return {grevlex_monic(sympy.Poly(g, *syms, **kw)) for g in G.exprs}


def ours(field, names, gens):
    syms = sympy.symbols(names)
    kw = {"modulus": field.characteristic} if field.characteristic else {"domain": "QQ"}
    A = make_ring(field, names)
    G = groebner_basis(IdealSpec.parse(A, gens))
    return {grevlex_monic(sympy.Poly(sympy.sympify(g.to_str().replace("^", "**")), *syms, **kw)) for g in G}


CASES = [
    ["x^2 - y", "x*y - 1"],
    ["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"],
    ["x*y - z^2", "y^2 - x*z", "x^2 - y*z"],
    ["x + y + z", "x*y + y*z + x*z", "x*y*z - 1"],
]


@pytest.mark.parametrize("gens", CASES)
def test_reduced_gb_matches_sympy_over_q(gens):
    assert ours(QQ, ["x", "y", "z"], gens) == sympy_gb(QQ, ["x", "y", "z"], gens)


@pytest.mark.parametrize("gens", CASES)
def test_reduced_gb_matches_sympy_over_f7(gens):
    F = PrimeField(7)
    assert ours(F, ["x", "y", "z"], gens) == sympy_gb(F, ["x", "y", "z"], gens)


monomial = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
poly_text = st.lists(st.tuples(st.integers(-3, 3), monomial), min_size=1, max_size=3).map(
    lambda ts: "+".join(f"({c})*x^{a}*y^{b}*z^{d}" for c, (a, b, d) in ts))


@settings(max_examples=25, deadline=None)
@given(st.lists(poly_text, min_size=1, max_size=3))
def test_random_ideals_match_sympy(gens):
    assert ours(QQ, ["x", "y", "z"], gens) == sympy_gb(QQ, ["x", "y", "z"], gens)


@settings(max_examples=25, deadline=None)
@given(st.lists(poly_text, min_size=1, max_size=3), poly_text)
def test_membership_of_combinations(gens, h):
    A = make_ring(QQ, ["x", "y", "z"])
    I = IdealSpec.parse(A, gens)
    combo = A.mul(A.parse(h), I.gens[0])
    assert I.contains(combo)
    assert normal_form(A.parse(h), I) == normal_form(normal_form(A.parse(h), I), I)


def test_gb_step_limit_aborts():
    A = make_ring(QQ, ["x", "y", "z"])
    set_gb_step_limit(0)
    try:
        with pytest.raises(ResourceLimit):
            groebner_basis(IdealSpec.parse(A, CASES[2]))
    finally:
        set_gb_step_limit(None)
