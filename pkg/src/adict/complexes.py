"""Bounded cochain complexes of FPModules, Hom/tensor totalizations, cohomology.

Indices are cohomological: the differential ``d[i]`` goes from ``X[i]`` to
``X[i + 1]``.  Signs follow the Koszul convention:

* tensor: d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy
* Hom:    d(f) = d_Y f + (-1)^(n+1) f d_X  for f of degree n
"""

from . import linalg
from .groebner import minimal_generators, syzygy_vectors, vector_degree
from .modules import (
    CertificateError,
    FPModule,
    ModuleError,
    ModuleMap,
    direct_sum,
    kernel,
    shift_components,
    subquotient_module,
    tensor_modules,
    vec_add,
    vec_times_poly,
)


class ComplexError(ValueError):
    pass


class BoundedComplex:
    """Modules ``X[lo..hi]`` with differentials ``d[i]: X[i] -> X[i+1]``."""

    def __init__(self, ring, modules, diffs=None, check=True, name=None):
        if not modules:
            raise ComplexError("a complex needs at least one index")
        self.ring = ring
        self.modules = dict(modules)
        self.lo = min(self.modules)
        self.hi = max(self.modules)
        for i in range(self.lo, self.hi + 1):
            self.modules.setdefault(i, FPModule.zero(ring))
        diffs = dict(diffs or {})
        self.d = {}
        for i in range(self.lo, self.hi):
            f = diffs.get(i)
            if f is None:
                f = ModuleMap.zero(self.modules[i], self.modules[i + 1])
            elif f.source is not self.modules[i] or f.target is not self.modules[i + 1]:
                if f.source.rank != self.modules[i].rank or f.target.rank != self.modules[i + 1].rank:
                    raise ComplexError(f"differential {i} has the wrong shape")
                f = ModuleMap(self.modules[i], self.modules[i + 1], f.columns, check=False)
            self.d[i] = f
        self.name = name
        self._h = {}
        if check:
            self.certify()

    def __repr__(self):
        ranks = [self.modules[i].rank for i in range(self.lo, self.hi + 1)]
        return f"BoundedComplex([{self.lo}, {self.hi}], ranks={ranks})"

    @classmethod
    def concentrated(cls, M, index=0):
        return cls(M.ring, {index: M}, check=False)

    def __getitem__(self, i):
        if self.lo <= i <= self.hi:
            return self.modules[i]
        return FPModule.zero(self.ring)

    def diff(self, i):
        """d^i, or a zero map outside the index range."""
        if self.lo <= i < self.hi:
            return self.d[i]
        return ModuleMap.zero(self[i], self[i + 1])

    def ranks(self):
        return [self.modules[i].rank for i in range(self.lo, self.hi + 1)]

    def certificate(self):
        """d^{i+1} d^i reduced in X[i+2] for each i; all empty for a complex."""
        out = {}
        for i in range(self.lo, self.hi - 1):
            dd = self.d[i + 1].compose(self.d[i])
            out[i] = [dd.target.reduce(c) for c in dd.columns]
        return out

    def certify(self):
        for i in range(self.lo, self.hi):
            self.d[i].certify()
        for i, cols in self.certificate().items():
            if any(cols):
                raise CertificateError(f"d^{i + 1} o d^{i} is not zero")
        return True

    def shift(self, k):
        """X[k]: index i holds X^{i+k}, differential multiplied by (-1)^k."""
        mods = {i - k: M for i, M in self.modules.items()}
        sign = self.ring.field(-1) if k % 2 else self.ring.field(1)
        diffs = {i - k: ModuleMap(f.source, f.target, [_scale(self.ring.field, c, sign) for c in f.columns],
                                  check=False)
                 for i, f in self.d.items()}
        return BoundedComplex(self.ring, mods, diffs, check=False)

    # -- cohomology ------------------------------------------------------

    def _piece_h(self, i, d):
        key = (i, d)
        hit = self._h.get(key)
        if hit is None:
            field = self.ring.field
            z, _ = linalg.kernel_and_rank(self.diff(i).piece_images(d), field)
            b = self.diff(i - 1).piece_images(d) if i - 1 >= self.lo else []
            hit = linalg.Subquotient(field, z, b)
            self._h[key] = hit
        return hit

    def h_piece(self, i, d):
        """Subquotient for H^i in internal degree d."""
        return self._piece_h(i, d)

    def h_dims(self, i, window):
        lo, hi = window
        return [self._piece_h(i, d).dim for d in range(lo, hi + 1)]


def _scale(field, v, c):
    mul = field.mul
    return {t: mul(c, a) for t, a in v.items()}


class ChainMap:
    """Maps f[i]: X[i] -> Y[i] commuting with the differentials."""

    def __init__(self, source, target, maps, check=True, name=None):
        self.source = source
        self.target = target
        self.maps = {}
        for i in range(source.lo, source.hi + 1):
            f = maps.get(i)
            if f is None:
                f = ModuleMap.zero(source[i], target[i])
            elif f.source is not source[i] or f.target is not target[i]:
                f = ModuleMap(source[i], target[i], f.columns, check=False)
            self.maps[i] = f
        self.name = name
        if check:
            self.certify()

    def __getitem__(self, i):
        if i in self.maps:
            return self.maps[i]
        return ModuleMap.zero(self.source[i], self.target[i])

    def square_defects(self):
        """For each index, d_Y f^i - f^{i+1} d_X reduced in Y[i+1]."""
        field = self.source.ring.field
        out = {}
        for i in range(self.source.lo - 1, self.source.hi + 1):
            left = self.target.diff(i).compose(self[i])
            right = self[i + 1].compose(self.source.diff(i))
            Y = self.target[i + 1]
            out[i] = [Y.reduce(vec_add(field, a, b, field(-1))) for a, b in zip(left.columns, right.columns)]
        return out

    def certify(self):
        for f in self.maps.values():
            f.certify()
        for i, cols in self.square_defects().items():
            if any(cols):
                raise CertificateError(f"square at index {i} does not commute")
        return True

    def compose(self, other):
        """self o other."""
        maps = {i: self[i].compose(other[i]) for i in range(other.source.lo, other.source.hi + 1)}
        return ChainMap(other.source, self.target, maps, check=False)

    def induced(self, i, d):
        """Matrix of H^i(f) in degree d (list of coordinate vectors per source class)."""
        hs = self.source.h_piece(i, d)
        ht = self.target.h_piece(i, d)
        return hs.induced(self[i].piece_images(d), ht), hs.dim, ht.dim


# ------------------------------------------------------------- blocks

class _Blocks:
    """A direct sum of keyed summands with component offsets."""

    def __init__(self, ring, items):
        self.keys = [k for k, _ in items]
        self.mods = [M for _, M in items]
        self.offset = {}
        off = 0
        for k, M in items:
            self.offset[k] = off
            off += M.rank
        self.module = direct_sum(self.mods) if self.mods else FPModule.zero(ring)

    def place(self, key, v):
        return shift_components(v, self.offset[key])


def _ensure_free(X):
    for i in range(X.lo, X.hi + 1):
        if X[i].relations:
            raise ComplexError("hom_complex needs a complex of free modules as first argument")


def hom_complex(X, Y):
    """Hom_A(X, Y) for X a bounded complex of free modules."""
    _ensure_free(X)
    ring = X.ring
    field = ring.field
    lo, hi = Y.lo - X.hi, Y.hi - X.lo
    blocks = {}
    for n in range(lo, hi + 1):
        items = []
        for p in range(X.lo, X.hi + 1):
            q = p + n
            if not Y.lo <= q <= Y.hi or Y[q].rank == 0:
                continue
            for g, s in enumerate(X[p].shifts):
                items.append(((p, g), Y[q].shifted(-s)))
        blocks[n] = _Blocks(ring, items)
    diffs = {}
    for n in range(lo, hi):
        src, tgt = blocks[n], blocks[n + 1]
        sign = field(-1) if n % 2 == 0 else field(1)  # (-1)^(n+1)
        cols = []
        for (p, g), M in zip(src.keys, src.mods):
            q = p + n
            dY = Y.diff(q)
            for j in range(M.rank):
                col = {}
                if (p, g) in tgt.offset and dY.columns[j]:
                    col = tgt.place((p, g), dY.columns[j])
                if p - 1 >= X.lo:
                    dX = X.diff(p - 1)
                    for h, hcol in enumerate(dX.columns):
                        c = {e: a for (k, e), a in hcol.items() if k == g}
                        if c and (p - 1, h) in tgt.offset:
                            term = vec_times_poly(field, {(j, ring.poly.zero_exp): sign}, c)
                            col = vec_add(field, col, tgt.place((p - 1, h), term))
                cols.append(col)
        diffs[n] = ModuleMap(src.module, tgt.module, cols, check=False)
    mods = {n: blocks[n].module for n in blocks}
    C = BoundedComplex(ring, mods, diffs, check=False)
    C.blocks = blocks
    return C


def tensor_complex(X, Y):
    """Total complex of X (x)_A Y."""
    ring = X.ring
    field = ring.field
    lo, hi = X.lo + Y.lo, X.hi + Y.hi
    blocks = {}
    for n in range(lo, hi + 1):
        items = []
        for p in range(X.lo, X.hi + 1):
            q = n - p
            if Y.lo <= q <= Y.hi and X[p].rank and Y[q].rank:
                items.append(((p, q), tensor_modules(X[p], Y[q])))
        blocks[n] = _Blocks(ring, items)
    diffs = {}
    for n in range(lo, hi):
        src, tgt = blocks[n], blocks[n + 1]
        cols = []
        for (p, q) in src.keys:
            P, Q = X[p], Y[q]
            dX, dY = X.diff(p), Y.diff(q)
            sign = field(-1) if p % 2 else field(1)
            nq = Q.rank
            for i in range(P.rank):
                for j in range(nq):
                    col = {}
                    if (p + 1, q) in tgt.offset and dX.columns[i]:
                        nq1 = nq
                        v = {(k * nq1 + j, e): a for (k, e), a in dX.columns[i].items()}
                        col = vec_add(field, col, tgt.place((p + 1, q), v))
                    if (p, q + 1) in tgt.offset and dY.columns[j]:
                        nq1 = Y[q + 1].rank
                        v = {(i * nq1 + k, e): field.mul(sign, a) for (k, e), a in dY.columns[j].items()}
                        col = vec_add(field, col, tgt.place((p, q + 1), v))
                    cols.append(col)
        diffs[n] = ModuleMap(src.module, tgt.module, cols, check=False)
    mods = {n: blocks[n].module for n in blocks}
    C = BoundedComplex(ring, mods, diffs, check=False)
    C.blocks = blocks
    return C


def cone(f: ChainMap):
    """Mapping cone: C^n = X^{n+1} (+) Y^n, d(x, y) = (-dx, f x + dy)."""
    X, Y = f.source, f.target
    ring = X.ring
    field = ring.field
    lo, hi = min(X.lo - 1, Y.lo), max(X.hi - 1, Y.hi)
    blocks = {}
    for n in range(lo, hi + 1):
        items = []
        if X[n + 1].rank:
            items.append(("x", X[n + 1]))
        if Y[n].rank:
            items.append(("y", Y[n]))
        blocks[n] = _Blocks(ring, items)
    diffs = {}
    minus = field(-1)
    for n in range(lo, hi):
        src, tgt = blocks[n], blocks[n + 1]
        cols = []
        if "x" in src.offset:
            dX, fx = X.diff(n + 1), f[n + 1]
            for i in range(X[n + 1].rank):
                col = {}
                if "x" in tgt.offset:
                    col = tgt.place("x", _scale(field, dX.columns[i], minus))
                if "y" in tgt.offset:
                    col = vec_add(field, col, tgt.place("y", fx.columns[i]))
                cols.append(col)
        if "y" in src.offset:
            dY = Y.diff(n)
            for j in range(Y[n].rank):
                cols.append(tgt.place("y", dY.columns[j]) if "y" in tgt.offset else {})
        diffs[n] = ModuleMap(src.module, tgt.module, cols, check=False)
    return BoundedComplex(ring, {n: b.module for n, b in blocks.items()}, diffs, check=False)


# ---------------------------------------------------------- cohomology

def cohomology(X: BoundedComplex, i):
    """H^i(X) as an FPModule (presented by cycles modulo boundaries)."""
    if not X.lo <= i <= X.hi:
        raise ComplexError(f"index {i} outside [{X.lo}, {X.hi}]")
    M = X[i]
    if M.rank == 0:
        return FPModule.zero(X.ring)
    _, inc = kernel(X.diff(i))
    cycles = inc.columns
    boundaries = X.diff(i - 1).columns if i > X.lo else []
    H, _ = subquotient_module(M, cycles, boundaries)
    return H


def graded_dims(M, window):
    return M.graded_dims(window)


def quasi_iso(f: ChainMap, window=None):
    """(is_quasi_iso, evidence).

    Graded rings: H^i(f) is checked for bijectivity in every degree of the
    window.  Otherwise the mapping cone is tested for acyclicity on
    presentations.
    """
    X, Y = f.source, f.target
    lo, hi = min(X.lo, Y.lo), max(X.hi, Y.hi)
    evidence = []
    ok = True
    if X.ring.graded and window is not None:
        field = X.ring.field
        for i in range(lo, hi + 1):
            for d in range(window[0], window[1] + 1):
                mat, m, n = f.induced(i, d)
                r = linalg.rank(mat, field)
                iso = (m == n == r)
                evidence.append({"index": i, "degree": d, "source_dim": m, "target_dim": n, "iso": iso})
                ok = ok and iso
        return ok, evidence
    C = cone(f)
    for i in range(C.lo, C.hi + 1):
        H = cohomology(C, i)
        zero = H.is_zero()
        evidence.append({"index": i, "cone_cohomology_zero": zero})
        ok = ok and zero
    return ok, evidence


# --------------------------------------------------------- resolutions

def free_resolution(M: FPModule, length):
    """Free resolution F[-length..0] of M with augmentation F^0 -> M.

    Exact at indices strictly between -length and 0; H^0 is M.  Over a
    positively graded ring every step uses minimal generators.
    """
    if length < 0:
        raise ComplexError("length must be >= 0")
    ring = M.ring
    field = ring.field
    graded = ring.graded
    F0 = FPModule.free(ring, M.shifts)
    mods = {0: F0}
    diffs = {}
    rels = [r for r in M.relations if r]
    if graded and rels:
        rels = minimal_generators(field, rels, M.rank, ring.relations, ring.weights, M.shifts)
    prev, cols = F0, rels
    for k in range(1, length + 1):
        if not cols:
            break
        if graded:
            degs = [vector_degree(c, ring.weights, prev.shifts) for c in cols]
        else:
            degs = [0] * len(cols)
        Fk = FPModule.free(ring, degs)
        mods[-k] = Fk
        diffs[-k] = ModuleMap(Fk, prev, cols, check=False)
        if k == length:
            break
        syz = syzygy_vectors(field, cols, prev.rank, ring.relations, ring.nvars)
        if graded and syz:
            syz = minimal_generators(field, syz, Fk.rank, ring.relations, ring.weights, Fk.shifts)
        prev, cols = Fk, syz
    for k in range(1, length + 1):
        mods.setdefault(-k, FPModule.zero(ring))
    F = BoundedComplex(ring, mods, diffs, check=False)
    aug = ModuleMap(F[0], M, [M.gen(i) for i in range(M.rank)], check=False)
    return F, aug


# ------------------------------------------------------ functoriality

def _outer(field, u, v, nv):
    """u (x) v for u, v free-module vectors, components i-major with v of rank nv."""
    out = {}
    add, mul = field.add, field.mul
    for (i, e), a in u.items():
        for (j, f), b in v.items():
            t = (i * nv + j, tuple(x + y for x, y in zip(e, f)))
            w = add(out.get(t, 0), mul(a, b))
            if w == 0:
                out.pop(t, None)
            else:
                out[t] = w
    return out


def tensor_chain_map(f: ChainMap, g: ChainMap, source=None, target=None):
    """f (x) g between the tensor totalizations (no signs: f, g have degree 0)."""
    S = source or tensor_complex(f.source, g.source)
    T = target or tensor_complex(f.target, g.target)
    field = S.ring.field
    maps = {}
    for n in range(S.lo, S.hi + 1):
        src = S.blocks[n]
        tgt = T.blocks.get(n)
        cols = []
        for (p, q) in src.keys:
            fp, gq = f[p], g[q]
            nq_t = g.target[q].rank
            for i in range(f.source[p].rank):
                for j in range(g.source[q].rank):
                    if tgt is None or (p, q) not in tgt.offset:
                        cols.append({})
                        continue
                    v = _outer(field, fp.columns[i], gq.columns[j], nq_t)
                    cols.append(tgt.place((p, q), v))
        maps[n] = ModuleMap(S[n], T[n], cols, check=False)
    return ChainMap(S, T, maps, check=False)


def hom_precompose(f: ChainMap, Y, source=None, target=None):
    """Hom(f, Y): Hom(X', Y) -> Hom(X, Y), phi -> phi o f, for f: X -> X' of free complexes."""
    S = source or hom_complex(f.target, Y)
    T = target or hom_complex(f.source, Y)
    ring = S.ring
    field = ring.field
    one = ring.poly.zero_exp
    maps = {}
    for n in range(S.lo, S.hi + 1):
        src = S.blocks.get(n)
        tgt = T.blocks.get(n)
        cols = []
        if src is None:
            continue
        for (p, g), M in zip(src.keys, src.mods):
            fp = f[p]
            for j in range(M.rank):
                col = {}
                if tgt is not None:
                    for h, hcol in enumerate(fp.columns):
                        c = {e: a for (k, e), a in hcol.items() if k == g}
                        if c and (p, h) in tgt.offset:
                            term = vec_times_poly(field, {(j, one): field(1)}, c)
                            col = vec_add(field, col, tgt.place((p, h), term))
                cols.append(col)
        maps[n] = ModuleMap(S[n], T[n], cols, check=False)
    return ChainMap(S, T, maps, check=False)


def hom_postcompose(X, g: ChainMap, source=None, target=None):
    """Hom(X, g): Hom(X, Y) -> Hom(X, Y'), phi -> g o phi."""
    S = source or hom_complex(X, g.source)
    T = target or hom_complex(X, g.target)
    maps = {}
    for n in range(S.lo, S.hi + 1):
        src = S.blocks.get(n)
        tgt = T.blocks.get(n)
        if src is None:
            continue
        cols = []
        for (p, h), M in zip(src.keys, src.mods):
            gq = g[p + n]
            for j in range(M.rank):
                c = gq.columns[j]
                cols.append(tgt.place((p, h), c) if c and tgt is not None and (p, h) in tgt.offset else {})
        maps[n] = ModuleMap(S[n], T[n], cols, check=False)
    return ChainMap(S, T, maps, check=False)


def lift_to_resolutions(F, G, f0):
    """Extend f0: F^0 -> G^0 to a chain map F -> G of free resolutions.

    F is a complex of free modules, G is exact at the indices being lifted
    into (both as produced by ``free_resolution``).  Raises ComplexError if
    some image fails to lift.
    """
    from .groebner import Lifter

    ring = F.ring
    maps = {0: ModuleMap(F[0], G[0], f0.columns, check=False)}
    for k in range(1, -F.lo + 1):
        src = F[-k]
        dG = G.diff(-k)
        tgt_prev = G[-k + 1]
        if src.rank == 0:
            continue
        lifter = None
        cols = []
        prev = maps[-k + 1]
        for c in F.diff(-k).columns:
            v = prev.apply_vec(c)
            v = tgt_prev.reduce(v)
            if not v:
                cols.append({})
                continue
            if lifter is None:
                if G[-k].rank == 0:
                    raise ComplexError(f"cannot lift into index {-k}: target is zero")
                lifter = Lifter(ring.field, dG.columns, tgt_prev.rank, tgt_prev.relations,
                                ring.relations, ring.nvars)
            w = lifter.lift(v)
            if w is None:
                raise ComplexError(f"image at index {-k + 1} is not a boundary")
            cols.append(w)
        maps[-k] = ModuleMap(src, G[-k], cols, check=False)
    return ChainMap(F, G, maps, check=False)


def hom_tensor_adjunction(X, Y, Z):
    """The isomorphism Hom(X (x) Y, Z) -> Hom(X, Hom(Y, Z)), phi |-> (x |-> (y |-> phi(x (x) y))).

    With the sign conventions of this module no signs appear, so the map
    is a permutation of generators.
    """
    XY = tensor_complex(X, Y)
    S = hom_complex(XY, Z)
    HYZ = hom_complex(Y, Z)
    T = hom_complex(X, HYZ)
    maps = {}
    for n in range(S.lo, S.hi + 1):
        sb = S.blocks.get(n)
        tb = T.blocks.get(n)
        if sb is None:
            continue
        images = [None] * S[n].rank
        for (r, G), M in zip(sb.keys, sb.mods):
            # locate (p, q) block of (X (x) Y)^r containing generator G
            xyb = XY.blocks[r]
            for (p, q) in xyb.keys:
                off = xyb.offset[(p, q)]
                size = X[p].rank * Y[q].rank
                if off <= G < off + size:
                    g, h = divmod(G - off, Y[q].rank)
                    break
            inner = HYZ.blocks[p + n]
            base = tb.offset[(p, g)] + inner.offset[(q, h)]
            start = sb.offset[(r, G)]
            for j in range(M.rank):
                images[start + j] = {(base + j, ring_one(S.ring)): S.ring.field(1)}
        maps[n] = ModuleMap(S[n], T[n], images, check=False)
    return ChainMap(S, T, maps, check=False)


def ring_one(ring):
    return ring.poly.zero_exp
