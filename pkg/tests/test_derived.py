import pytest

from adict.derived import (AdicPair, _compare, koszul_torsion_system, llambda, rgamma, verify_completion_lemmas,
                           verify_formulas, verify_gm, verify_mgm)
from adict.complexes import ChainMap
from adict.field import QQ, PrimeField
from adict.modules import FPModule, direct_sum
from adict.rings import IdealSpec, InfinitePiece, make_ring, quotient_ring

A = make_ring(QQ, "x")
PAIR = AdicPair(A, ["x"], window=(-3, 3))
FREE = FPModule.free(A, [0])
RES = FPModule.cyclic(A, [A.parse("x")])


def test_closed_forms_on_the_line():
    # H^1_x(k[x]) has x^-1, x^-2, ... and the completion is k[[x]]
    assert rgamma(PAIR, FREE).dims(1) == [1, 1, 1, 0, 0, 0, 0]
    assert rgamma(PAIR, FREE).dims(0) == [0] * 7
    for route in ("telescope", "koszul", "adic"):
        L = llambda(PAIR, FREE, route=route)
        assert L.dims(0) == [0, 0, 0, 1, 1, 1, 1]
        assert L.dims(-1) == [0] * 7


@pytest.mark.parametrize("M", [FREE, FPModule.cyclic(A, [A.parse("x^3")]),
                               direct_sum([FREE, FPModule.cyclic(A, [A.parse("x^2")])])])
def test_formulas_on_the_line(M):
    r = verify_formulas(PAIR, M)
    assert r["pass"]
    assert all(r["side_checks"].values())


def test_formulas_over_f7_plane():
    B = make_ring(PrimeField(7), "x y")
    r = verify_formulas(AdicPair(B, ["x"], window=(-2, 2)), FPModule.free(B, [0]))
    assert r["pass"]


def test_mgm_on_the_plane():
    B = make_ring(QQ, "x y")
    r = verify_mgm(AdicPair(B, ["x", "y"], window=(-3, 3)), FPModule.free(B, [0]))
    assert r["pass"]
    checks = {e["check"] for e in r["per_degree"]}
    assert checks == {"rgamma_of_tau", "llambda_of_sigma", "rgamma_idempotent", "llambda_idempotent"}


@pytest.mark.parametrize("M, N", [(FREE, FREE), (RES, FREE), (FREE, FPModule.cyclic(A, [A.parse("x^2")]))])
def test_greenlees_may(M, N):
    assert verify_gm(PAIR, M, N)["pass"]


def test_completion_lemmas_with_quotient_swap():
    B = make_ring(QQ, "x z")
    C = quotient_ring(B, IdealSpec.parse(B, ["x - z"]))
    pair = AdicPair(B, ["x", "z"], window=(-3, 3))
    r = verify_completion_lemmas(pair, FPModule.free(B, [0]), swap=(C, FPModule.free(B, [0])))
    assert r["pass"]
    swap = [e for e in r["per_degree"] if e["check"] == "swap" and e["stabilized_at"] is not None]
    # Ext^1_B(C, B) = C: the completed diagonal sits in index 1, one class per degree from -1
    assert all(e["lhs_value"] == e["rhs_value"] == int(e["index"] == 1 and e["degree"] >= -1) for e in swap)
    assert {(e["index"], e["degree"]) for e in swap} >= {(1, d) for d in range(-1, 3)}


def test_ungraded_finite_ring():
    # Q[x]/(x^3 - x^2) = Q[x]/(x^2) x Q; torsion and completion both see the first factor
    B = make_ring(QQ, "x", ["x^3 - x^2"])
    assert not B.graded
    pair = AdicPair(B, ["x"], window=(0, 0))
    R = FPModule.free(B, [0])
    assert rgamma(pair, R).dims(0) == [2] and rgamma(pair, R).dims(1) == [0]
    assert llambda(pair, R).dims(0) == [2]
    assert verify_formulas(pair, R)["pass"]


def test_infinite_ungraded_pieces_are_refused():
    B = make_ring(QQ, "x y", ["x*y - 1"])
    with pytest.raises(InfinitePiece):
        rgamma(AdicPair(B, ["x"], window=(0, 0)), FPModule.free(B, [0])).dims(0)


def test_zero_map_is_rejected():
    S = koszul_torsion_system(PAIR, FREE)
    last = S.stages[-1]
    zero = ChainMap(last, last, {}, check=False)
    entries = _compare("negative", 1, (-3, -1), [("a", "ind", S), ("b", "ind", S)], [("a", "b", zero)])
    assert not any(e["iso"] for e in entries)


def test_different_towers_disagree():
    S = koszul_torsion_system(PAIR, FREE)
    S2 = koszul_torsion_system(PAIR, RES)
    entries = _compare("negative", 1, (-3, -1), [("a", "ind", S), ("b", "ind", S2)])
    assert not all(e["iso"] for e in entries)


def test_stage_bounds_are_validated():
    with pytest.raises(ValueError):
        AdicPair(A, ["x"], T=1)
