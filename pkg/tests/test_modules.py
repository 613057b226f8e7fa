import itertools

import pytest
from hypothesis import given, settings, strategies as st

from adict.complexes import free_resolution
from adict.field import QQ, PrimeField
from adict.groebner import poly_to_vec
from adict.modules import (CertificateError, FPModule, ModuleMap, cokernel, direct_sum, kernel,
                           tensor_modules)
from adict.rings import make_ring

A = make_ring(QQ, "x y")


def standard_monomial_count(gens, d):
    """dim (k[x,y]/(monomials))_d by direct enumeration."""
    return sum(1 for a in range(d + 1)
               if not any(a >= g[0] and d - a >= g[1] for g in gens))


monomial_ideals = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda g: g != (0, 0)),
                           min_size=1, max_size=3)


def cyclic_from(gens):
    return FPModule.cyclic(A, [A.parse(f"x^{a}*y^{b}") for a, b in gens])


@given(monomial_ideals)
def test_hilbert_function_of_monomial_quotient(gens):
    M = cyclic_from(gens)
    assert M.graded_dims((0, 7)) == [standard_monomial_count(gens, d) for d in range(8)]


@settings(max_examples=20, deadline=None)
@given(monomial_ideals)
def test_resolution_euler_characteristic(gens):
    M = cyclic_from(gens)
    F, _ = free_resolution(M, 3)
    for d in range(0, 7):
        chi = sum((-1) ** i * F[i].dim(d) for i in range(F.lo, F.hi + 1))
        assert chi == M.dim(d)


@settings(max_examples=20, deadline=None)
@given(monomial_ideals)
def test_resolution_is_exact_with_cokernel_m(gens):
    M = cyclic_from(gens)
    F, _ = free_resolution(M, 3)
    for i in range(F.lo + 1, 0):
        assert F.h_dims(i, (0, 6)) == [0] * 7
    assert F.h_dims(0, (0, 6)) == M.graded_dims((0, 6))


def test_koszul_resolution_of_residue_field():
    k = FPModule.cyclic(A, [A.parse("x"), A.parse("y")])
    F, _ = free_resolution(k, 3)
    assert F.ranks() == [0, 1, 2, 1]
    assert [F[i].shifts for i in (-2, -1, 0)] == [(2,), (1, 1), (0,)]


def test_kernel_and_cokernel_of_multiplication():
    R = FPModule.free(A, [0])
    f = ModuleMap(FPModule.free(A, [1]), R, [poly_to_vec(A.parse("x"))])
    C, _ = cokernel(f)
    assert C.graded_dims((0, 4)) == [1, 1, 1, 1, 1]
    K, _ = kernel(f)
    assert K.graded_dims((0, 4)) == [0] * 5


def test_map_certificate_rejects_ill_defined_map():
    M = FPModule.cyclic(A, [A.parse("x")])
    with pytest.raises(CertificateError):
        ModuleMap(M, FPModule.free(A, [0]), [FPModule.free(A, [0]).gen(0)])


def test_direct_sum_and_tensor_dims():
    M = FPModule.cyclic(A, [A.parse("x^2"), A.parse("y")])
    N = FPModule.cyclic(A, [A.parse("x"), A.parse("y^2")], shift=1)
    S = direct_sum([M, N])
    assert S.graded_dims((0, 3)) == [a + b for a, b in zip(M.graded_dims((0, 3)), N.graded_dims((0, 3)))]
    assert tensor_modules(M, N).graded_dims((0, 3)) == [0, 1, 0, 0]


def test_quotient_ring_pieces_over_f7():
    B = make_ring(PrimeField(7), "x y", ["x^2", "x*y"])
    R = FPModule.free(B, [0])
    assert R.graded_dims((0, 3)) == [1, 2, 1, 1]


def test_ungraded_ring_has_finite_total_dim():
    B = make_ring(QQ, "x", ["x^3 - 1"])
    assert not B.graded
    assert FPModule.free(B, [0]).total_dim() == 3
