import pytest

from adict.field import QQ
from adict.groebner import poly_to_vec
from adict.modules import FPModule, ModuleMap
from adict.rings import make_ring
from adict.towers import DegreeWindow, IndSystem, ProSystem, TowerError, colim, lim_lim1

A = make_ring(QQ, "x y")


def shifted_quotient(k, power=2):
    """A/(x^power) generated in degree -k."""
    return FPModule.cyclic(A, [A.parse(f"x^{power}")], shift=-k)


def times(src, tgt, p):
    return ModuleMap(src, tgt, [poly_to_vec(A.parse(p))], check=True)


def test_window_validation():
    assert list(DegreeWindow(-1, 1)) == [-1, 0, 1]
    with pytest.raises(TowerError):
        DegreeWindow(2, 1)


def test_constant_tower_stabilizes_immediately():
    M = FPModule.free(A, [0])
    S = IndSystem([M] * 5, [ModuleMap.identity(M)] * 4, check=True)
    rows = colim(S, 0, (0, 2))
    assert [r["dim"] for r in rows] == [1, 2, 3]
    assert all(r["stabilized_at"] == 1 for r in rows)


def test_stationary_ind_zero_tower_is_witnessed():
    # every degree-0 class is killed after two multiplications by x
    stages = [shifted_quotient(k) for k in range(1, 9)]
    trans = [times(stages[k], stages[k + 1], "x") for k in range(7)]
    S = IndSystem(stages, trans, check=True)
    row = colim(S, 0, (0, 0))[0]
    assert row["stage_dims"] == [2] * 8
    assert row["stabilized"] and row["dim"] == 0


def test_too_few_stages_leave_ind_zero_unwitnessed():
    stages = [shifted_quotient(k) for k in range(1, 4)]
    trans = [times(stages[k], stages[k + 1], "x") for k in range(2)]
    row = colim(IndSystem(stages, trans), 0, (0, 0))[0]
    assert not row["stabilized"]


def test_late_born_class_is_not_called_stable():
    Z = FPModule.zero(A)
    M = FPModule.free(A, [0])
    stages = [Z, Z, Z, Z, M, M]
    trans = [ModuleMap.zero(Z, Z)] * 3 + [ModuleMap.zero(Z, M), ModuleMap.identity(M)]
    row = colim(IndSystem(stages, trans), 0, (0, 0))[0]
    assert row["stage_dims"] == [0, 0, 0, 0, 1, 1]
    assert not row["stabilized"]


def test_pro_system_of_truncations():
    # A/(x^t) with surjections: lim in degree d is the degree-d part of k[[x]][y]
    stages = [FPModule.cyclic(A, [A.parse(f"x^{t}")]) for t in range(1, 8)]
    trans = [times(stages[k + 1], stages[k], "1") for k in range(6)]
    rows = lim_lim1(ProSystem(stages, trans, check=True), 0, (0, 3))
    assert [r["lim"] for r in rows] == [1, 2, 3, 4]
    assert all(r["lim1"] == 0 and r["stabilized"] for r in rows)
    assert all(r["mittag_leffler"] == "surjective" for r in rows)


def test_pro_zero_tower_is_witnessed():
    stages = [shifted_quotient(-k) for k in range(1, 9)]
    trans = [times(stages[k + 1], stages[k], "x") for k in range(7)]
    row = lim_lim1(ProSystem(stages, trans, check=True), 0, (10, 10))[0]
    assert row["stage_dims"] == [2] * 8
    assert row["stabilized"] and row["lim"] == 0


def test_transition_count_is_checked():
    M = FPModule.free(A, [0])
    with pytest.raises(TowerError):
        IndSystem([M, M], [])
