import pytest
from hypothesis import given, settings, strategies as st

from adict.complexes import (BoundedComplex, ChainMap, cone, free_resolution, hom_complex,
                             hom_tensor_adjunction, lift_to_resolutions, quasi_iso, tensor_complex)
from adict.field import QQ
from adict.groebner import poly_to_vec
from adict.koszul import koszul
from adict.modules import CertificateError, FPModule, ModuleMap
from adict.rings import make_ring

A = make_ring(QQ, "x y")
W = (-4, 2)


def identity(X):
    return ChainMap(X, X, {i: ModuleMap.identity(X[i]) for i in range(X.lo, X.hi + 1)}, check=False)


def test_sign_error_is_caught():
    F0, F1, F2 = FPModule.free(A, [0]), FPModule.free(A, [-1, -1]), FPModule.free(A, [-2])
    d0 = ModuleMap(F0, F1, [{(0, (1, 0)): 1, (1, (0, 1)): 1}])
    bad = ModuleMap(F1, F2, [poly_to_vec(A.parse("y")), poly_to_vec(A.parse("x"))])
    with pytest.raises(CertificateError):
        BoundedComplex(A, {0: F0, 1: F1, 2: F2}, {0: d0, 1: bad})
    good = ModuleMap(F1, F2, [poly_to_vec(A.parse("-y")), poly_to_vec(A.parse("x"))])
    assert BoundedComplex(A, {0: F0, 1: F1, 2: F2}, {0: d0, 1: good}).certify()


def test_koszul_complex_cohomology():
    K = koszul(A, ["x", "y"])
    assert K.certify()
    assert K.ranks() == [1, 2, 1]
    assert K.h_dims(0, W) == [0] * 7
    assert K.h_dims(1, W) == [0] * 7
    # H^2 = A/(x, y) generated in degree -2
    assert K.h_dims(2, W) == [0, 0, 1, 0, 0, 0, 0]


def test_tensor_of_koszul_complexes():
    K = tensor_complex(koszul(A, ["x"]), koszul(A, ["y"]))
    L = koszul(A, ["x", "y"])
    for i in range(3):
        assert K.h_dims(i, W) == L.h_dims(i, W)


def test_cone_of_identity_is_acyclic():
    K = koszul(A, ["x", "y^2"])
    C = cone(identity(K))
    assert C.certify()
    for i in range(C.lo, C.hi + 1):
        assert C.h_dims(i, W) == [0] * 7


def test_shift_twice_restores_differentials():
    K = koszul(A, ["x", "y"])
    S = K.shift(1)
    assert S.lo == K.lo - 1 and S.certify()
    assert S.h_dims(1, W) == K.h_dims(2, W)
    SS = S.shift(1)
    assert all(SS.d[i].equals(K.shift(2).d[i]) for i in SS.d)


def test_hom_tensor_adjunction_is_an_isomorphism():
    X = koszul(A, ["x"])
    Y = koszul(A, ["y"])
    Z = koszul(A, ["x", "y"])
    phi = hom_tensor_adjunction(X, Y, Z)
    assert phi.certify()
    ok, _ = quasi_iso(phi, (-2, 2))
    assert ok


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3))
def test_lift_identity_between_resolutions(a, b):
    M = FPModule.cyclic(A, [A.parse(f"x^{a}"), A.parse(f"y^{b}")])
    F, _ = free_resolution(M, 2)
    f = lift_to_resolutions(F, F, ModuleMap.identity(F[0]))
    assert f.certify()
    ok, _ = quasi_iso(f, (0, 4))
    assert ok


def test_hom_complex_computes_ext():
    # Ext^i(A/(x, y), A) = k(2) in i = 2 only
    k = FPModule.cyclic(A, [A.parse("x"), A.parse("y")])
    F, _ = free_resolution(k, 2)
    H = hom_complex(F, BoundedComplex.concentrated(FPModule.free(A, [0])))
    assert H.certify()
    assert [sum(H.h_dims(i, (-4, 4))) for i in range(0, 3)] == [0, 0, 1]
    assert H.h_dims(2, (-4, 4))[2] == 1
