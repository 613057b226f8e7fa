"""Pure-Python sparse row kernels (fallback for the compiled extension).

Vectors are dicts ``{index: coeff}`` without zeros.  ``p == 0`` selects
rational arithmetic (int/Fraction), otherwise arithmetic modulo ``p``.
"""

from fractions import Fraction


def _canon_q(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def axpy(v, c, row, p):
    """v <- v + c * row, in place."""
    if p:
        for k, a in row.items():
            w = (v.get(k, 0) + c * a) % p
            if w:
                v[k] = w
            else:
                v.pop(k, None)
    else:
        for k, a in row.items():
            w = v.get(k, 0) + c * a
            if w:
                if type(w) is Fraction and w.denominator == 1:
                    w = w.numerator
                v[k] = w
            else:
                v.pop(k, None)


def scale(v, c, p):
    if p:
        return {k: (a * c) % p for k, a in v.items()}
    return {k: _canon_q(a * c) for k, a in v.items()}


def inverse(a, p):
    if p:
        return pow(a, -1, p)
    if type(a) is int and (a == 1 or a == -1):
        return a
    return _canon_q(Fraction(1) / a)


def reduce(v, rows, p, combo=None, combos=None):
    """Reduce v by pivot rows {pivot: row} (row[pivot] == 1), in place.

    Rows are triangular: every row has its pivot as largest index.  When
    ``combo`` is given the same operations are replayed on it using
    ``combos`` (the tracking vector of each row).
    """
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
        c = (-c) % p if p else -c
        axpy(v, c, rows[best], p)
        if combo is not None:
            axpy(combo, c, combos[best], p)
