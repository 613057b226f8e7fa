# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse row kernels; same interface and results as ``_sparse_py``.

The prime-field path runs on C integers; the rational path is the same
Python-object code compiled, which mostly saves interpreter dispatch.
"""

from fractions import Fraction


cdef inline object _canon_q(object c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


cdef void _axpy_mod(dict v, long long c, dict row, long long p):
    cdef long long a, w, old
    for k, av in row.items():
        a = av
        old = v.get(k, 0)
        w = (old + c * a) % p
        if w < 0:
            w += p
        if w:
            v[k] = w
        else:
            v.pop(k, None)


cdef void _axpy_q(dict v, object c, dict row):
    for k, a in row.items():
        w = v.get(k, 0) + c * a
        if w:
            if type(w) is Fraction and w.denominator == 1:
                w = w.numerator
            v[k] = w
        else:
            v.pop(k, None)


# above this modulus c * a can overflow 64 bits
_C_LIMIT = 3037000499


cdef void _axpy_big(dict v, object c, dict row, object p):
    for k, a in row.items():
        w = (v.get(k, 0) + c * a) % p
        if w:
            v[k] = w
        else:
            v.pop(k, None)


def axpy(dict v, c, dict row, p):
    """v <- v + c * row, in place."""
    if p and p > _C_LIMIT:
        _axpy_big(v, c, row, p)
    elif p:
        _axpy_mod(v, c, row, p)
    else:
        _axpy_q(v, c, row)


def scale(dict v, c, p):
    cdef long long pp, cc
    if p and p > _C_LIMIT:
        return {k: (a * c) % p for k, a in v.items()}
    if p:
        pp = p
        cc = c % p
        return {k: (a * cc) % pp for k, a in v.items()}
    return {k: _canon_q(a * c) for k, a in v.items()}


def inverse(a, p):
    if p:
        return pow(a, -1, p)
    if type(a) is int and (a == 1 or a == -1):
        return a
    return _canon_q(Fraction(1) / a)


def reduce(dict v, dict rows, p, combo=None, combos=None):
    """Reduce v by triangular pivot rows {pivot: row}, in place (see _sparse_py.reduce)."""
    cdef long long pp
    cdef long long cm
    if p and p > _C_LIMIT:
        return _reduce_big(v, rows, p, combo, combos)
    pp = p if p else 0
    if not rows:
        return v
    while True:
        best = -1
        for k in v:
            if k > best and k in rows:
                best = k
        if best < 0:
            return v
        c = v[best]
        if pp:
            cm = (-c) % pp
            _axpy_mod(v, cm, rows[best], pp)
            if combo is not None:
                _axpy_mod(combo, cm, combos[best], pp)
        else:
            c = -c
            _axpy_q(v, c, rows[best])
            if combo is not None:
                _axpy_q(combo, c, combos[best])


def _reduce_big(dict v, dict rows, p, combo, combos):
    while True:
        best = -1
        for k in v:
            if k > best and k in rows:
                best = k
        if best < 0:
            return v
        c = (-v[best]) % p
        _axpy_big(v, c, rows[best], p)
        if combo is not None:
            _axpy_big(combo, c, combos[best], p)
