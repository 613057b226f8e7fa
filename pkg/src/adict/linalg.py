"""Exact sparse linear algebra over Q and F_p.

The row kernels come from the compiled ``_sparse_c`` extension when it is
importable and from ``_sparse_py`` otherwise.  Set ``ADICT_PURE_PYTHON=1``
to force the fallback.
"""

import os

from . import _sparse_py

BACKEND = "python"
_kern = _sparse_py
if not os.environ.get("ADICT_PURE_PYTHON"):
    try:
        from . import _sparse_c as _kern  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _kern = _sparse_py


def use_backend(name):
    """Switch kernels at runtime ("python" or "cython"); used by benchmarks."""
    global _kern, BACKEND
    if name == "python":
        _kern, BACKEND = _sparse_py, "python"
    elif name == "cython":
        from . import _sparse_c

        _kern, BACKEND = _sparse_c, "cython"
    else:
        raise ValueError(name)


def modulus(field):
    return field.characteristic


class Echelon:
    """Incrementally maintained triangular basis of a subspace.

    With ``track=True`` every row remembers which combination of inserted
    vectors produced it, so reductions can report coordinates.
    """

    def __init__(self, field, track=False):
        self.p = modulus(field)
        self.rows = {}
        self.track = track
        self.combos = {} if track else None
        self.count = 0

    def __len__(self):
        return len(self.rows)

    def reduce(self, v):
        return _kern.reduce(dict(v), self.rows, self.p)

    def reduce_tracked(self, v):
        """(remainder, c) with v = remainder + sum c[k] * inserted[k]."""
        combo = {}
        r = _kern.reduce(dict(v), self.rows, self.p, combo, self.combos)
        p = self.p
        return r, {k: ((-a) % p if p else -a) for k, a in combo.items()}

    def add(self, v, label=None):
        """Insert v; return the remainder (empty when v was dependent).

        When tracking, the remainder's combo with ``label`` is stored; a
        dependent v yields (empty, relation) through ``add_tracked``.
        """
        if self.track:
            r, _ = self.add_tracked(v, label)
            return r
        r = _kern.reduce(dict(v), self.rows, self.p)
        if r:
            self._insert(r, None)
        return r

    def add_tracked(self, v, label):
        """Insert v tagged ``label``; returns (remainder, combo).

        If v is dependent, ``combo`` is a relation: sum of combo over labels
        of the inserted vectors (including ``label``) is zero.
        """
        combo = {label: 1}
        r = _kern.reduce(dict(v), self.rows, self.p, combo, self.combos)
        if r:
            self._insert(r, combo)
        return r, combo

    def _insert(self, r, combo):
        piv = max(r)
        c = r[piv]
        if c != 1:
            inv = _kern.inverse(c, self.p)
            r = _kern.scale(r, inv, self.p)
            if combo is not None:
                combo = _kern.scale(combo, inv, self.p)
        self.rows[piv] = r
        if self.track:
            self.combos[piv] = combo
        self.count += 1

    def contains(self, v):
        return not self.reduce(v)


def apply(images, v, p):
    """Linear map given by images of basis vectors, applied to sparse v."""
    out = {}
    for j, c in v.items():
        img = images[j]
        if img:
            _kern.axpy(out, c, img, p)
    return out


def kernel_and_rank(images, field):
    """Kernel basis (sparse vectors) and rank of the map with these images."""
    ech = Echelon(field, track=True)
    ker = []
    for j, img in enumerate(images):
        r, combo = ech.add_tracked(img, j)
        if not r:
            ker.append(combo)
    return ker, len(ech)


def rank(vectors, field):
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return len(ech)


class Subquotient:
    """The space Z/B for Z (given by a basis) and B (spanning set) with B in Z.

    ``reps`` are representatives of a basis of Z/B; ``coords`` maps a vector
    of Z to its coordinates in that basis.
    """

    def __init__(self, field, z_basis, b_gens):
        self.field = field
        self.p = modulus(field)
        self.bech = Echelon(field)
        for b in b_gens:
            self.bech.add(b)
        self.cech = Echelon(field, track=True)
        self.reps = []
        for z in z_basis:
            r = self.bech.reduce(z)
            if not r:
                continue
            rem, combo = self.cech.add_tracked(r, len(self.reps))
            if rem:
                self.reps.append(r)
            # dependent remainders do not enlarge the quotient
        self.dim = len(self.reps)

    def coords(self, v):
        r = self.bech.reduce(v)
        rem, c = self.cech.reduce_tracked(r)
        if rem:
            raise ValueError("vector does not lie in the cycle space")
        return c

    def induced(self, images, target):
        """Matrix (list of coordinate vectors) of the induced map on quotients."""
        p = self.p
        return [target.coords(apply(images, rep, p)) for rep in self.reps]


def compose(first, second, p):
    """Images of ``second o first`` where both are lists of images."""
    return [apply(second, v, p) for v in first]
