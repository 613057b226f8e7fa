import sympy

from adict.field import QQ
from adict.hochschild import (adic_hh, adic_window_stages, CompletedEnveloping, enveloping, hh_discrete, hh_homology,
                              verify_cformula, verify_comparison, verify_domain_of_def,
                              verify_tformula_homology, vdb_check)
from adict.modules import FPModule
from adict.rings import make_ring

LINE = make_ring(QQ, "x")
DUAL = make_ring(QQ, "x", ["x^2"])
W = (-3, 3)


def test_enveloping_data():
    env = enveloping(LINE, ["x"])
    assert env.check()
    assert env.regular
    assert env.Ae.nvars == 2
    assert env.diagonal_module().graded_dims((0, 3)) == [1, 1, 1, 1]
    assert not enveloping(DUAL, ["x"]).regular


def test_polynomial_line_closed_form():
    # HH^0 = A, HH^1 = A d/dx with x^k d/dx in degree k - 1, nothing above
    tab = hh_discrete(enveloping(LINE, ["x"]), FPModule.free(LINE, [0]), 3, W)
    assert tab.strategy == "koszul"
    assert tab.dims(0) == [1 if d >= 0 else 0 for d in range(-3, 4)]
    assert tab.dims(1) == [1 if d >= -1 else 0 for d in range(-3, 4)]
    assert tab.dims(2) == [0] * 7 and tab.dims(3) == [0] * 7


def periodic_oracle(n_max):
    """HH^n(k[x]/(x^2)) from the 2-periodic resolution: cochain maps alternate 0 and 2x."""
    zero = sympy.zeros(2, 2)
    two_x = sympy.Matrix([[0, 0], [2, 0]])  # basis (1, x): 1 -> 2x, x -> 0
    maps = [zero if n % 2 == 0 else two_x for n in range(n_max + 2)]
    out = []
    for n in range(n_max + 1):
        kernel = 2 - maps[n].rank()
        image = maps[n - 1].rank() if n > 0 else 0
        out.append(kernel - image)
    return out


def test_dual_numbers_against_periodic_resolution():
    assert periodic_oracle(3) == [2, 1, 1, 1]
    tab = hh_discrete(enveloping(DUAL, ["x"]), FPModule.free(DUAL, [0]), 3, (-4, 4))
    assert tab.strategy == "syzygy"
    assert [sum(tab.dims(n)) for n in range(4)] == periodic_oracle(3)


def test_coefficients_matter():
    env = enveloping(LINE, ["x"])
    a = hh_discrete(env, FPModule.free(LINE, [0]), 1, W)
    k = hh_discrete(env, FPModule.cyclic(LINE, [LINE.parse("x")]), 1, W)
    assert a.dims(0) != k.dims(0)
    assert sum(k.dims(0)) == 1 and sum(k.dims(1)) == 1


def test_adic_line_is_power_series():
    cenv = CompletedEnveloping(enveloping(LINE, ["x"]), T=adic_window_stages((0, 3)))
    tab, _ = adic_hh(cenv, FPModule.free(LINE, [0]), n_max=2, window=(0, 3))
    assert all(None not in e["stabilized_at"] for e in tab.entries)
    assert tab.dims(0) == [1, 1, 1, 1]
    assert tab.dims(1) == [1, 1, 1, 1]
    assert tab.dims(2) == [0, 0, 0, 0]


def test_comparison_instances():
    env = enveloping(LINE, ["x"])
    assert verify_comparison(env, FPModule.free(LINE, [0]))["pass"]
    assert verify_comparison(env, FPModule.cyclic(LINE, [LINE.parse("x")]), window=(-1, 3))["pass"]
    r = verify_comparison(enveloping(DUAL, ["x"]), FPModule.free(DUAL, [0]))
    assert r["pass"]


def test_complete_formula_on_the_line():
    env = enveloping(LINE, ["x"])
    A = FPModule.free(LINE, [0])
    r = verify_cformula(env, A, A)
    assert r["pass"]
    assert r["banner"] == "certified"
    nonzero = {(e["index"], e["degree"]) for e in r["per_degree"] if e["lhs_value"]}
    assert nonzero == {(1, -1), (1, 0), (1, 1), (1, 2)}


def test_domain_of_definition():
    env = enveloping(LINE, ["x"])
    A = FPModule.free(LINE, [0])
    assert verify_domain_of_def(env, A, A)["pass"]
    assert verify_domain_of_def(env, FPModule.cyclic(LINE, [LINE.parse("x^2")]), A)["pass"]


def test_smooth_duality_shift():
    for m, n in ((0, 1), (1, 1)):
        r = vdb_check(m, n)
        assert r["pass"]
        assert all(r["side_checks"].values())
        assert r["nonzero_indices"]["lhs"] == [m + n]
        assert r["internal_twist"] == m + n


def test_torsion_homology_formula():
    env = enveloping(LINE, ["x"])
    k = FPModule.cyclic(LINE, [LINE.parse("x")])
    assert verify_tformula_homology(env, k, k)["pass"]
    A = FPModule.free(LINE, [0])
    assert verify_tformula_homology(env, A, A, top=3)["pass"]


def test_homology_of_residue_field():
    env = enveloping(LINE, ["x"])
    k = FPModule.cyclic(LINE, [LINE.parse("x")])
    tab = hh_homology(env, k, k).to_json()
    totals = [e["total"] for e in tab["entries"]]
    assert totals[:2] == [1, 1] and all(t == 0 for t in totals[2:])
