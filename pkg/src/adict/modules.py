"""Finitely presented graded modules over a RingSpec and maps between them.

An FPModule is coker(P: G -> F) with F free on generators of the given
degrees.  Vectors of F are dicts ``{(component, exponent): coeff}``.
"""

from functools import cached_property

from . import linalg
from .groebner import (
    ModuleGB,
    _Divisors,
    minimal_generators,
    poly_to_vec,
    reduce_by_relations,
    relation_vectors,
    syzygy_vectors,
    top_key,
    vector_degree,
)
from .rings import InfinitePiece, RingError, RingSpec, standard_order_ideal


class ModuleError(ValueError):
    pass


class CertificateError(ModuleError):
    """A well-definedness or d^2 = 0 certificate failed."""


def vec_add(field, u, v, c=1):
    out = dict(u)
    add, mul = field.add, field.mul
    for t, a in v.items():
        w = add(out.get(t, 0), mul(c, a))
        if w == 0:
            out.pop(t, None)
        else:
            out[t] = w
    return out


def vec_scale_mono(field, v, c, m):
    mul = field.mul
    return {(k, tuple(x + y for x, y in zip(e, m))): mul(c, a) for (k, e), a in v.items()}


def vec_times_poly(field, v, p):
    out = {}
    for m, c in p.items():
        out = vec_add(field, out, vec_scale_mono(field, v, c, m))
    return out


def shift_components(v, offset):
    return {(k + offset, e): a for (k, e), a in v.items()}


class FPModule:
    """coker of a presentation matrix, with generator degrees ``shifts``."""

    def __init__(self, ring: RingSpec, shifts, relations=(), gb=None, name=None):
        self.ring = ring
        self.shifts = tuple(int(s) for s in shifts)
        self.rank = len(self.shifts)
        jgb = ring.jgb
        rels = []
        for r in relations:
            for (k, _) in r:
                if not 0 <= k < self.rank:
                    raise ModuleError(f"relation component {k} out of range")
            r = reduce_by_relations(ring.field, r, jgb)
            if r:
                rels.append(r)
        self.relations = rels
        self._gb = gb
        self.name = name
        self._pieces = {}
        if ring.graded:
            for r in rels:
                if vector_degree(r, ring.weights, self.shifts) is None:
                    raise ModuleError("relation not homogeneous for the generator degrees")

    @classmethod
    def free(cls, ring, shifts):
        return cls(ring, shifts, (), gb=_free_gb(ring, len(shifts)))

    @classmethod
    def cyclic(cls, ring, ideal_gens, shift=0):
        """A/(ideal) generated in degree ``shift``."""
        return cls(ring, [shift], [poly_to_vec(g) for g in ideal_gens if g])

    @classmethod
    def zero(cls, ring):
        return cls(ring, (), (), gb=ModuleGB(ring.field, [], top_key))

    def __repr__(self):
        return f"FPModule(rank={self.rank}, shifts={list(self.shifts)}, nrels={len(self.relations)})"

    @property
    def field(self):
        return self.ring.field

    @property
    def gb(self):
        if self._gb is None:
            gens = relation_vectors(self.ring.relations, self.rank) + list(self.relations)
            self._gb = ModuleGB.compute(self.field, gens)
        return self._gb

    def reduce(self, v):
        return self.gb.reduce(v)

    def is_zero_vector(self, v):
        return not self.gb.reduce(v)

    def is_zero(self):
        return all(self.gb.contains(self.gen(i)) for i in range(self.rank))

    def gen(self, i):
        return {(i, self.ring.poly.zero_exp): self.field(1)}

    def vector_degree(self, v):
        return vector_degree(v, self.ring.weights, self.shifts)

    # -- graded pieces ---------------------------------------------------

    def piece(self, d):
        """Basis terms of the degree-d piece and their index map."""
        hit = self._pieces.get(d)
        if hit is not None:
            return hit
        gb = self.gb
        ring = self.ring
        terms = []
        if ring.graded:
            for i, s in enumerate(self.shifts):
                for e in ring.monomials_of_weight(d - s):
                    if gb.is_standard((i, e)):
                        terms.append((i, e))
        else:
            if d != 0:
                terms = []
            else:
                terms = self._total_basis()
        index = {t: k for k, t in enumerate(terms)}
        self._pieces[d] = (terms, index)
        return terms, index

    def _total_basis(self):
        nv = self.ring.nvars
        leads = {}
        for lt in self.gb.leads:
            leads.setdefault(lt[0], []).append(lt[1])
        out = []
        for i in range(self.rank):
            ls = leads.get(i, [])
            for v in range(nv):
                if not any(all((x == 0) if k != v else True for k, x in enumerate(e)) for e in ls):
                    raise InfinitePiece(
                        f"component {i} of the module is infinite-dimensional (variable {self.ring.names[v]} free)")
            pred = (lambda e, i=i: self.gb.is_standard((i, e)))
            out.extend((i, e) for e in standard_order_ideal(pred, nv))
        return out

    def dim(self, d):
        return len(self.piece(d)[0])

    def graded_dims(self, window):
        lo, hi = window
        return [self.dim(d) for d in range(lo, hi + 1)]

    def total_dim(self):
        """Total dimension over the field (raises InfinitePiece if infinite)."""
        if not self.ring.graded:
            return self.dim(0)
        return len(self._total_basis())

    def coords(self, v, d=None):
        """Sparse coordinates of v (homogeneous of degree d) in piece(d)."""
        r = self.gb.reduce(v)
        if not r:
            return {}
        if d is None:
            d = self.vector_degree(r) if self.ring.graded else 0
        _, index = self.piece(d)
        try:
            return {index[t]: a for t, a in r.items()}
        except KeyError:
            raise ModuleError("vector is not homogeneous of the requested degree") from None

    def basis_vector(self, term):
        return {term: self.field(1)}

    # -- constructions ---------------------------------------------------

    def shifted(self, k):
        """Same module with every generator degree raised by k."""
        return FPModule(self.ring, [s + k for s in self.shifts], self.relations, gb=self._gb)

    def presentation_matrix(self):
        return [dict(r) for r in self.relations]


def _free_gb(ring, rank):
    # J e_i over all components is already a reduced GB
    return ModuleGB(ring.field, relation_vectors(ring.relations, rank), top_key)


def _shifted_union(blocks):
    out = []
    for basis, offset in blocks:
        out.extend(shift_components(g, offset) for g in basis)
    return out


def direct_sum(modules):
    """Direct sum; the GB is the union of the summands' GBs."""
    if not modules:
        raise ModuleError("empty direct sum needs a ring; use FPModule.zero")
    ring = modules[0].ring
    shifts, rels, blocks = [], [], []
    offset = 0
    for M in modules:
        if M.ring != ring:
            raise ModuleError("ring mismatch in direct sum")
        shifts.extend(M.shifts)
        rels.extend(shift_components(r, offset) for r in M.relations)
        blocks.append((M.gb.basis, offset))
        offset += M.rank
    gb = ModuleGB(ring.field, _shifted_union(blocks), top_key)
    return FPModule(ring, shifts, rels, gb=gb)


def tensor_modules(M: FPModule, N: FPModule):
    """M (x)_A N with generators e_i (x) f_j ordered i-major."""
    ring = M.ring
    if N.ring != ring:
        raise ModuleError("ring mismatch in tensor product")
    if not M.relations:
        return direct_sum([N.shifted(s) for s in M.shifts]) if M.rank else FPModule.zero(ring)
    if not N.relations:
        # M (x) F: one copy of M per generator of F, reindexed i-major
        shifts = [s + t for s in M.shifts for t in N.shifts]
        rels = []
        for r in M.relations:
            for j in range(N.rank):
                rels.append({(k * N.rank + j, e): a for (k, e), a in r.items()})
        return FPModule(ring, shifts, rels)
    shifts = [s + t for s in M.shifts for t in N.shifts]
    rels = []
    for r in M.relations:
        for j in range(N.rank):
            rels.append({(k * N.rank + j, e): a for (k, e), a in r.items()})
    for i in range(M.rank):
        for r in N.relations:
            rels.append({(i * N.rank + k, e): a for (k, e), a in r.items()})
    return FPModule(ring, shifts, rels)


class ModuleMap:
    """Homogeneous map given by images of the source generators."""

    def __init__(self, source: FPModule, target: FPModule, columns, check=True, degree=0):
        if len(columns) != source.rank:
            raise ModuleError("one column per source generator")
        self.source = source
        self.target = target
        self.degree = degree
        jgb = target.ring.jgb
        self.columns = [reduce_by_relations(target.field, dict(c), jgb) for c in columns]
        self._pieces = {}
        if check:
            self.certify()

    def __repr__(self):
        return f"ModuleMap({self.source.rank} -> {self.target.rank})"

    @classmethod
    def identity(cls, M):
        return cls(M, M, [M.gen(i) for i in range(M.rank)], check=False)

    @classmethod
    def zero(cls, M, N):
        return cls(M, N, [{} for _ in range(M.rank)], check=False)

    def apply_vec(self, v):
        field = self.target.field
        out = {}
        for (i, e), a in v.items():
            col = self.columns[i]
            if col:
                out = vec_add(field, out, vec_scale_mono(field, col, a, e))
        return reduce_by_relations(field, out, self.target.ring.jgb)

    def certificate(self):
        """Images of the source relations reduced in the target (all must vanish)."""
        return [self.target.reduce(self.apply_vec(r)) for r in self.source.relations]

    def certify(self):
        for k, w in enumerate(self.certificate()):
            if w:
                raise CertificateError(f"source relation {k} does not map into target relations")
        if self.source.ring.graded:
            for i, col in enumerate(self.columns):
                r = self.target.reduce(col)
                if r and self.target.vector_degree(r) != self.source.shifts[i] + self.degree:
                    raise CertificateError(f"column {i} is not homogeneous of the right degree")
        return True

    def compose(self, other):
        """self o other."""
        return ModuleMap(other.source, self.target, [self.apply_vec(c) for c in other.columns],
                         check=False, degree=self.degree + other.degree)

    def piece_images(self, d):
        """Images of the basis of source_d written in target_(d+degree) coordinates."""
        hit = self._pieces.get(d)
        if hit is not None:
            return hit
        terms, _ = self.source.piece(d)
        field = self.target.field
        out = []
        td = d + self.degree if self.source.ring.graded else 0
        for (i, e) in terms:
            col = self.columns[i]
            if not col:
                out.append({})
                continue
            out.append(self.target.coords(vec_scale_mono(field, col, field(1), e), td))
        self._pieces[d] = out
        return out

    def is_zero(self):
        return all(self.target.is_zero_vector(c) for c in self.columns)

    def equals(self, other):
        return all(self.target.is_zero_vector(vec_add(self.target.field, a, b, self.target.field(-1)))
                   for a, b in zip(self.columns, other.columns))


def map_direct_sum(maps, source=None, target=None):
    """Block-diagonal map between direct sums."""
    src = source or direct_sum([f.source for f in maps])
    tgt = target or direct_sum([f.target for f in maps])
    cols = []
    off = 0
    for f in maps:
        for c in f.columns:
            cols.append(shift_components(c, off))
        off += f.target.rank
    return ModuleMap(src, tgt, cols, check=False)


# ------------------------------------------------------------ kernels

def _kernel_generators(f: ModuleMap):
    """Vectors of F_source generating the preimage of the target relations."""
    ring = f.source.ring
    cols = list(f.columns) + list(f.target.relations)
    syz = syzygy_vectors(ring.field, cols, f.target.rank, ring.relations, ring.nvars)
    r = f.source.rank
    out = []
    for s in syz:
        v = {(k, e): a for (k, e), a in s.items() if k < r}
        if v and not f.source.is_zero_vector(v):
            out.append(v)
    return out


def _present_submodule(M: FPModule, gens, extra=()):
    """(span(gens) + P + extra) / (P + extra) as an FPModule, plus its generators."""
    ring = M.ring
    field = ring.field
    extra = [b for b in extra if b]
    base = list(M.relations) + extra
    if ring.graded:
        gens = minimal_generators(field, gens, M.rank, ring.relations, ring.weights, M.shifts, base=base)
        degs = [M.vector_degree(g) for g in gens]
    else:
        gb = ModuleGB.compute(field, relation_vectors(ring.relations, M.rank) + base)
        gens = [g for g in gens if not gb.contains(g)]
        degs = [0] * len(gens)
    m = len(gens)
    rels = []
    if gens:
        syz = syzygy_vectors(field, list(gens) + base, M.rank, ring.relations, ring.nvars)
        for s in syz:
            v = {(k, e): a for (k, e), a in s.items() if k < m}
            if v:
                rels.append(v)
        if ring.graded and rels:
            rels = minimal_generators(field, rels, m, ring.relations, ring.weights, degs)
    sub = FPModule(ring, degs, rels)
    return sub, gens


def kernel(f: ModuleMap):
    """(ker f, inclusion map ker f -> source)."""
    f.certify()
    gens = _kernel_generators(f)
    K, used = _present_submodule(f.source, gens)
    inc = ModuleMap(K, f.source, used, check=False)
    return K, inc


def cokernel(f: ModuleMap):
    """(coker f, projection target -> coker f)."""
    f.certify()
    N = f.target
    C = FPModule(N.ring, N.shifts, list(N.relations) + [c for c in f.columns if c])
    proj = ModuleMap(N, C, [N.gen(i) for i in range(N.rank)], check=False)
    return C, proj


def subquotient_module(M: FPModule, cycles, boundaries):
    """(span(cycles) + P) / (span(boundaries) + P), assuming boundaries in cycles."""
    H, used = _present_submodule(M, cycles, [b for b in boundaries if b])
    return H, used


def graded_dims(M: FPModule, window):
    return M.graded_dims(window)
