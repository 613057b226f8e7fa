from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from adict import _sparse_py, linalg
from adict.field import QQ, PrimeField

try:
    from adict import _sparse_c
except ImportError:  # pragma: no cover - depends on build
    _sparse_c = None

P = 32003
FP = PrimeField(P)

entries = st.integers(-4, 4)
matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=1, max_size=6))


def sparse_rows(M):
    return [{j: c for j, c in enumerate(row) if c} for row in M]


def rank_mod_p(M, p):
    rows = [[c % p for c in row] for row in M]
    r = 0
    ncols = len(rows[0])
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, p)
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col] * inv
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


@given(matrices)
def test_rank_over_q_matches_sympy(M):
    assert linalg.rank(sparse_rows(M), QQ) == sympy.Matrix(M).rank()


@given(matrices)
def test_rank_over_fp_matches_elimination(M):
    assert linalg.rank(sparse_rows(M), FP) == rank_mod_p(M, P)


@given(matrices)
def test_kernel_vectors_are_killed(M):
    images = sparse_rows(M)
    ker, r = linalg.kernel_and_rank(images, QQ)
    assert len(ker) + r == len(images)
    for v in ker:
        assert linalg.apply(images, v, 0) == {}


def test_subquotient_dimension():
    # Z = span(e0, e1, e2), B = span(e0 + e1)
    sq = linalg.Subquotient(QQ, [{0: 1}, {1: 1}, {2: 1}], [{0: 1, 1: 1}])
    assert sq.dim == 2
    assert sq.coords({0: 1, 1: 1}) == {}


backends = [_sparse_py] + ([_sparse_c] if _sparse_c is not None else [])
vectors = st.dictionaries(st.integers(0, 12), st.integers(1, P - 1), max_size=8)


@pytest.mark.skipif(_sparse_c is None, reason="compiled kernels not built")
@settings(max_examples=200)
@given(vectors, vectors, st.integers(0, P - 1), st.sampled_from([P, 7, 2**61 - 1]))
def test_compiled_axpy_matches_python(v, row, c, p):
    v = {k: x % p for k, x in v.items() if x % p}
    row = {k: x % p for k, x in row.items() if x % p}
    a, b = dict(v), dict(v)
    _sparse_py.axpy(a, c, row, p)
    _sparse_c.axpy(b, c, row, p)
    assert a == b
    assert all(0 < x < p for x in a.values())


@pytest.mark.skipif(_sparse_c is None, reason="compiled kernels not built")
@given(st.lists(st.fractions(max_denominator=9), min_size=1, max_size=6), st.fractions(max_denominator=5))
def test_compiled_axpy_matches_python_over_q(vals, c):
    v = {i: x for i, x in enumerate(vals) if x}
    row = {i + 1: x for i, x in enumerate(vals) if x}
    a, b = dict(v), dict(v)
    _sparse_py.axpy(a, c, row, 0)
    _sparse_c.axpy(b, c, row, 0)
    assert a == b


@pytest.mark.skipif(_sparse_c is None, reason="compiled kernels not built")
@given(matrices, st.sampled_from([0, 7, P]))
def test_backends_agree_on_rank(M, p):
    field = QQ if p == 0 else PrimeField(p)
    ranks = []
    for name in ("python", "cython"):
        linalg.use_backend(name)
        try:
            ranks.append(linalg.kernel_and_rank(sparse_rows(M), field))
        finally:
            linalg.use_backend("cython")
    assert ranks[0] == ranks[1]


def test_inverse_kernels():
    for k in backends:
        assert k.inverse(3, 7) == 5
        assert k.inverse(Fraction(2, 3), 0) == Fraction(3, 2)
        assert k.inverse(-1, 0) == -1
