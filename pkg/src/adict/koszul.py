"""Koszul complexes, stable Koszul stages, telescopes and the maps between them.

Every multi-element construction is the left-to-right tensor product of
the one-element constructions, so the maps are tensor products too.

One-element conventions (a homogeneous of degree w):

* koszul(a):   A g0 -> A g1, g0 |-> a g1; g0 in degree 0, g1 in degree -w.
* stage t:     koszul(a^t); transition t -> t+1 is g0 |-> g0, g1 |-> a g1.
* Tel_j:       index 0 basis D0..Dj, index 1 basis d0..dj,
               D0 |-> d0, Di |-> d(i-1) - a di; deg di = -i w, deg Di = -(i-1) w
               (deg D0 = 0).  Tel_j -> Tel_(j+1) sends each basis vector to itself.
"""

import itertools

from .complexes import (
    BoundedComplex,
    ChainMap,
    ComplexError,
    hom_complex,
    tensor_chain_map,
    tensor_complex,
)
from .groebner import Lifter
from .modules import FPModule, ModuleMap, direct_sum, kernel
from .rings import IdealSpec, InfinitePiece, RingError, _monomials_of_weight, localize
from . import linalg


class SequenceError(ValueError):
    pass


class ElementSequence:
    """An ordered, nonempty list of ring elements (raw dicts in normal form)."""

    def __init__(self, ring, elems):
        if not elems:
            raise SequenceError("element sequence must be nonempty")
        self.ring = ring
        out = []
        for a in elems:
            if isinstance(a, str):
                a = ring.parse(a)
            elif hasattr(a, "terms"):
                a = ring.reduce(a.terms)
            else:
                a = ring.reduce(dict(a))
            if ring.graded and not ring.is_homogeneous(a):
                raise SequenceError(f"{ring.to_str(a)} is not homogeneous")
            out.append(a)
        self.elems = out
        self.degrees = [ring.degree(a) if (ring.graded and a) else 0 for a in out]

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __repr__(self):
        return "(" + ", ".join(self.ring.to_str(a) for a in self.elems) + ")"

    def key(self):
        return tuple(tuple(sorted(a.items())) for a in self.elems)

    def power(self, t):
        return ElementSequence(self.ring, [self.ring.power(a, t) for a in self.elems])

    def ideal(self):
        return IdealSpec(self.ring, self.elems)

    def image(self, phi):
        """The sequence pushed along a ring map."""
        return ElementSequence(phi.target, [phi.apply(a) for a in self.elems])


def _one(ring):
    return ring.poly.zero_exp


def _col(ring, comp, p):
    return {(comp, e): c for e, c in p.items()}


def _fold_complexes(parts):
    out = parts[0]
    for P in parts[1:]:
        out = tensor_complex(out, P)
    return out


def _fold_maps(maps, sources, targets):
    """Tensor chain maps left to right, reusing the folded source/target complexes."""
    f = maps[0]
    S, T = sources[0], targets[0]
    for g, S2, T2 in zip(maps[1:], sources[1:], targets[1:]):
        S = tensor_complex(S, S2)
        T = tensor_complex(T, T2)
        f = tensor_chain_map(f, g, S, T)
    return f


def _seq(A, a):
    return a if isinstance(a, ElementSequence) else ElementSequence(A, list(a))


# ------------------------------------------------------------- Koszul

def _koszul1(A, a, w):
    K0 = FPModule.free(A, [0])
    K1 = FPModule.free(A, [-w])
    d = ModuleMap(K0, K1, [_col(A, 0, a)], check=False)
    return BoundedComplex(A, {0: K0, 1: K1}, {0: d}, check=False)


def koszul(A, a):
    """Cohomological Koszul complex on ``a`` (indices 0..n, H^n = A/(a))."""
    a = _seq(A, a)
    return _fold_complexes([_koszul1(A, ai, w) for ai, w in zip(a.elems, a.degrees)])


_STAGES = {}


def _stage1(A, a, w, t):
    key = ("K", A, tuple(sorted(a.items())), t)
    hit = _STAGES.get(key)
    if hit is None:
        hit = _koszul1(A, A.power(a, t), w * t)
        _STAGES[key] = hit
    return hit


def _stage_transition1(A, a, w, t):
    S, T = _stage1(A, a, w, t), _stage1(A, a, w, t + 1)
    f0 = ModuleMap(S[0], T[0], [T[0].gen(0)], check=False)
    f1 = ModuleMap(S[1], T[1], [_col(A, 0, a)], check=False)
    return ChainMap(S, T, {0: f0, 1: f1}, check=False)


def stable_koszul_stage(A, a, t):
    """(K_t, K_t -> K_(t+1)) where K_t = Hom(K(a^t), A) reindexed to 0..n."""
    if t < 1:
        raise SequenceError("stage index t must be >= 1")
    a = _seq(A, a)
    key = ("KS", A, a.key(), t)
    hit = _STAGES.get(key)
    if hit is not None:
        return hit
    src = [_stage1(A, ai, w, t) for ai, w in zip(a.elems, a.degrees)]
    tgt = [_stage1(A, ai, w, t + 1) for ai, w in zip(a.elems, a.degrees)]
    maps = [_stage_transition1(A, ai, w, t) for ai, w in zip(a.elems, a.degrees)]
    f = _fold_maps(maps, src, tgt)
    _STAGES[key] = (f.source, f)
    return f.source, f


# ----------------------------------------------------------- telescope

def _tel1(A, a, w, j):
    key = ("T", A, tuple(sorted(a.items())), j)
    hit = _STAGES.get(key)
    if hit is not None:
        return hit
    T0 = FPModule.free(A, [0] + [-(i - 1) * w for i in range(1, j + 1)])
    T1 = FPModule.free(A, [-i * w for i in range(j + 1)])
    one = _one(A)
    neg = A.field(-1)
    cols = [{(0, one): A.field(1)}]
    for i in range(1, j + 1):
        c = {(i - 1, one): A.field(1)}
        for e, coef in a.items():
            c[(i, e)] = A.field.mul(neg, coef)
        cols.append(c)
    d = ModuleMap(T0, T1, cols, check=False)
    hit = BoundedComplex(A, {0: T0, 1: T1}, {0: d}, check=False)
    _STAGES[key] = hit
    return hit


def _tel_inclusion1(A, a, w, j):
    S, T = _tel1(A, a, w, j), _tel1(A, a, w, j + 1)
    f0 = ModuleMap(S[0], T[0], [T[0].gen(i) for i in range(j + 1)], check=False)
    f1 = ModuleMap(S[1], T[1], [T[1].gen(i) for i in range(j + 1)], check=False)
    return ChainMap(S, T, {0: f0, 1: f1}, check=False)


def telescope(A, a, j):
    """(Tel_j, Tel_j -> Tel_(j+1))."""
    if j < 0:
        raise SequenceError("telescope index j must be >= 0")
    a = _seq(A, a)
    key = ("TS", A, a.key(), j)
    hit = _STAGES.get(key)
    if hit is not None:
        return hit
    src = [_tel1(A, ai, w, j) for ai, w in zip(a.elems, a.degrees)]
    tgt = [_tel1(A, ai, w, j + 1) for ai, w in zip(a.elems, a.degrees)]
    maps = [_tel_inclusion1(A, ai, w, j) for ai, w in zip(a.elems, a.degrees)]
    f = _fold_maps(maps, src, tgt)
    _STAGES[key] = (f.source, f)
    return f.source, f


def unit_complex(A):
    return BoundedComplex.concentrated(FPModule.free(A, [0]))


def _u1(A, a, w, j):
    S = _tel1(A, a, w, j)
    U = unit_complex(A)
    cols = [U[0].gen(0)] + [{} for _ in range(j)]
    return ChainMap(S, U, {0: ModuleMap(S[0], U[0], cols, check=False)}, check=False)


def u_map(A, a, j):
    """Tel_j -> A: the index-0 basis vector D0 |-> 1, everything else |-> 0."""
    a = _seq(A, a)
    src = [_tel1(A, ai, w, j) for ai, w in zip(a.elems, a.degrees)]
    tgt = [unit_complex(A) for _ in a.elems]
    maps = [_u1(A, ai, w, j) for ai, w in zip(a.elems, a.degrees)]
    S, _ = telescope(A, a, j)
    f = _fold_maps(maps, src, tgt)
    return ChainMap(S, f.target, {i: f[i] for i in f.maps}, check=False)


def _w1(A, a, w, j):
    S = _tel1(A, a, w, j)
    K = _stage1(A, a, w, j)
    f0 = ModuleMap(S[0], K[0], [K[0].gen(0)] + [{} for _ in range(j)], check=False)
    f1 = ModuleMap(S[1], K[1], [_col(A, 0, A.power(a, j - i)) for i in range(j + 1)], check=False)
    return ChainMap(S, K, {0: f0, 1: f1}, check=False)


def w_map(A, a, j):
    """Tel_j -> K_j (stable Koszul stage j): D0 |-> g0, di |-> a^(j-i) g1."""
    if j < 1:
        raise SequenceError("w_map needs j >= 1")
    a = _seq(A, a)
    src = [_tel1(A, ai, w, j) for ai, w in zip(a.elems, a.degrees)]
    tgt = [_stage1(A, ai, w, j) for ai, w in zip(a.elems, a.degrees)]
    maps = [_w1(A, ai, w, j) for ai, w in zip(a.elems, a.degrees)]
    f = _fold_maps(maps, src, tgt)
    S, _ = telescope(A, a, j)
    K, _ = stable_koszul_stage(A, a, j)
    return ChainMap(S, K, {i: f[i] for i in f.maps}, check=False)


def _e1(A, a, w, t):
    K = _stage1(A, a, w, t)
    U = unit_complex(A)
    return ChainMap(K, U, {0: ModuleMap(K[0], U[0], [U[0].gen(0)], check=False)}, check=False)


def e_unit_map(A, a, t):
    """K_t -> A, the identity on the index-0 summand."""
    a = _seq(A, a)
    src = [_stage1(A, ai, w, t) for ai, w in zip(a.elems, a.degrees)]
    tgt = [unit_complex(A) for _ in a.elems]
    maps = [_e1(A, ai, w, t) for ai, w in zip(a.elems, a.degrees)]
    f = _fold_maps(maps, src, tgt)
    K, _ = stable_koszul_stage(A, a, t)
    return ChainMap(K, f.target, {i: f[i] for i in f.maps}, check=False)


# ----------------------------------------------- torsion stages and v, e

def _as_complex(M):
    return M if isinstance(M, BoundedComplex) else BoundedComplex.concentrated(M)


def _torsion_submodule(A, a, M, t):
    """(0 :_M (a_1^t..a_n^t)) with its inclusion into M."""
    if M.rank == 0:
        Z = FPModule.zero(A)
        return Z, ModuleMap(Z, M, [], check=False)
    powers = [A.power(ai, t) for ai in a.elems]
    target = direct_sum([M.shifted(-t * w) for w in a.degrees])
    cols = []
    for g in range(M.rank):
        col = {}
        for b, p in enumerate(powers):
            for e, c in p.items():
                col[(b * M.rank + g, e)] = c
        cols.append(col)
    phi = ModuleMap(M, target, cols, check=False)
    return kernel(phi)


def _restrict_differential(A, d, inc_src, inc_tgt):
    """Lift d o inc_src through inc_tgt (images must lie in the submodule)."""
    M1 = inc_tgt.target
    lifter = Lifter(A.field, inc_tgt.columns, M1.rank, M1.relations, A.relations, A.nvars)
    cols = []
    for c in inc_src.columns:
        v = d.apply_vec(c)
        if not v or M1.is_zero_vector(v):
            cols.append({})
            continue
        w = lifter.lift(v)
        if w is None:
            raise ComplexError("image does not lie in the target submodule")
        cols.append(w)
    return ModuleMap(inc_src.source, inc_tgt.source, cols, check=False)


def torsion_stage(A, a, M, t):
    """(Hom(A/(a^t), M) as a subcomplex G_t of M, inclusion sigma_t: G_t -> M)."""
    a = _seq(A, a)
    M = _as_complex(M)
    subs = {}
    for n in range(M.lo, M.hi + 1):
        subs[n] = _torsion_submodule(A, a, M[n], t)
    diffs = {n: _restrict_differential(A, M.diff(n), subs[n][1], subs[n + 1][1]) for n in range(M.lo, M.hi)}
    G = BoundedComplex(A, {n: s[0] for n, s in subs.items()}, diffs, check=False)
    sigma = ChainMap(G, M, {n: s[1] for n, s in subs.items()}, check=False)
    return G, sigma


def torsion_transition(A, a, M, t, stage_t=None, stage_t1=None):
    """G_t -> G_(t+1) induced by the identity of M."""
    G, s = stage_t or torsion_stage(A, a, M, t)
    H, s1 = stage_t1 or torsion_stage(A, a, M, t + 1)
    maps = {}
    for n in range(G.lo, G.hi + 1):
        ident = ModuleMap.identity(s[n].target)
        maps[n] = _restrict_differential(A, ident, s[n], s1[n])
    return ChainMap(G, H, maps, check=False)


def v_map(A, a, M, t):
    """v: G_t -> K_t (x) M, the inclusion of torsion into the index-0 summand.

    Returns (v, sigma_t) with sigma_t: G_t -> M.
    """
    a = _seq(A, a)
    M = _as_complex(M)
    G, sigma = torsion_stage(A, a, M, t)
    K, _ = stable_koszul_stage(A, a, t)
    KM = tensor_complex(K, M)
    maps = {}
    for n in range(G.lo, G.hi + 1):
        blocks = KM.blocks.get(n)
        cols = [blocks.place((0, n), c) if c else {} for c in sigma[n].columns]
        maps[n] = ModuleMap(G[n], KM[n], cols, check=False)
    return ChainMap(G, KM, maps, check=False), sigma


def e_map(A, a, M, t, KM=None):
    """e: K_t (x) M -> M, identity on the (0, n) blocks."""
    a = _seq(A, a)
    M = _as_complex(M)
    if KM is None:
        K, _ = stable_koszul_stage(A, a, t)
        KM = tensor_complex(K, M)
    maps = {}
    for n in range(KM.lo, KM.hi + 1):
        blocks = KM.blocks[n]
        cols = []
        for key, mod in zip(blocks.keys, blocks.mods):
            if key[0] == 0:
                cols.extend(M[n].gen(i) for i in range(mod.rank))
            else:
                cols.extend({} for _ in range(mod.rank))
        maps[n] = ModuleMap(KM[n], M[n], cols, check=False)
    return ChainMap(KM, M, maps, check=False)


# -------------------------------------------------------- completions

def _tel_coefficients(A, a, j):
    """c_k for the index-0 telescope basis: c_0 = 1, c_k = -a^(k-1)."""
    out = [A.one()]
    neg = A.field(-1)
    for k in range(1, j + 1):
        p = A.power(a, k - 1)
        out.append({e: A.field.mul(neg, c) for e, c in p.items()})
    return out


def adic_quotient(A, a, M, j):
    """M (x) A/(a)^j as a complex (same generators, added relations)."""
    a = _seq(A, a)
    M = _as_complex(M)
    gens = a.ideal().power(j).gens
    mods = {}
    for n in range(M.lo, M.hi + 1):
        N = M[n]
        rels = list(N.relations)
        for g in range(N.rank):
            rels.extend(_col(A, g, p) for p in gens)
        mods[n] = FPModule(A, N.shifts, rels)
    diffs = {n: ModuleMap(mods[n], mods[n + 1], M.diff(n).columns, check=False) for n in range(M.lo, M.hi)}
    return BoundedComplex(A, mods, diffs, check=False)


def tel_projection(A, a, M, j, H=None, target=None):
    """tel_j: Hom(Tel_j, M) -> M (x) A/(a)^j.

    On the index-0 telescope basis D_k (multi-index k) the map is
    phi |-> sum_k c_k phi(D_k), with c_k the product of the one-element
    coefficients c_0 = 1, c_k = -a^(k-1).
    """
    a = _seq(A, a)
    M = _as_complex(M)
    T, _ = telescope(A, a, j)
    if H is None:
        H = hom_complex(T, M)
    Q = target or adic_quotient(A, a, M, j)
    per = [_tel_coefficients(A, ai, j) for ai in a.elems]
    coeff = []
    for ks in itertools.product(range(j + 1), repeat=len(a)):
        p = A.one()
        for ai_coeffs, k in zip(per, ks):
            p = A.mul(p, ai_coeffs[k])
        coeff.append(p)
    maps = {}
    for n in range(H.lo, H.hi + 1):
        blocks = H.blocks.get(n)
        if blocks is None or not (Q.lo <= n <= Q.hi):
            continue
        cols = []
        for (p, g), mod in zip(blocks.keys, blocks.mods):
            for i in range(mod.rank):
                if p != 0 or not coeff[g]:
                    cols.append({})
                    continue
                cols.append({(i, e): c for e, c in coeff[g].items()})
        maps[n] = ModuleMap(H[n], Q[n], cols, check=False)
    return ChainMap(H, Q, maps, check=False)


# ------------------------------------------------- symbolic Cech model

class CechComplex:
    """The Cech complex A -> (+) A[a_i^-1] -> ... over localized rings.

    ``terms[p]`` lists ``(S, ring)`` for subsets S of size p; ``ring`` is
    None when some a_i in S is zero (the arrow to A[0^-1] = 0).  The maps
    are localizations with the usual alternating signs.
    """

    def __init__(self, A, a):
        self.ring = A
        self.seq = _seq(A, a)
        n = len(self.seq)
        self.terms = {}
        for p in range(n + 1):
            row = []
            for S in itertools.combinations(range(n), p):
                if any(not self.seq.elems[i] for i in S):
                    row.append((S, None))
                    continue
                f = A.one()
                for i in S:
                    f = A.mul(f, self.seq.elems[i])
                row.append((S, A if p == 0 else localize(A, f, "u")))
            self.terms[p] = row

    def ranks(self):
        return [sum(1 for _, R in self.terms[p] if R is not None) for p in sorted(self.terms)]

    def _monomial_supports(self):
        A = self.ring
        if A.relations:
            raise RingError("window cohomology of the Cech model needs a polynomial ring")
        supports = []
        for a in self.seq.elems:
            if not a:
                supports.append(None)
                continue
            if len(a) != 1:
                raise RingError("window cohomology of the Cech model needs monomial elements")
            e = next(iter(a))
            supports.append(frozenset(v for v, x in enumerate(e) if x))
        return supports

    def _pattern_cohomology(self, N, supports):
        """dims of H^p for the Cech complex in any multidegree with negative set N."""
        n = len(supports)
        field = self.ring.field
        valid = {}
        for p in range(n + 1):
            valid[p] = [S for S in itertools.combinations(range(n), p)
                        if all(supports[i] is not None for i in S)
                        and N <= frozenset().union(*(supports[i] for i in S))]
        index = {p: {S: k for k, S in enumerate(valid[p])} for p in valid}
        images = {}
        for p in range(n):
            imgs = []
            for S in valid[p]:
                v = {}
                for i in range(n):
                    if i in S:
                        continue
                    T = tuple(sorted(S + (i,)))
                    if T in index[p + 1]:
                        sign = -1 if sum(1 for l in S if l < i) % 2 else 1
                        v[index[p + 1][T]] = field(sign)
                imgs.append(v)
            images[p] = imgs
        dims = []
        for p in range(n + 1):
            if p < n:
                ker, r = linalg.kernel_and_rank(images[p], field)
                z = len(ker)
            else:
                z = len(valid[p])
            b = linalg.rank(images[p - 1], field) if p > 0 else 0
            dims.append(z - b)
        return dims

    def window_dims(self, i, window):
        """dim H^i in each weighted degree of the window (monomial count)."""
        A = self.ring
        supports = self._monomial_supports()
        nv = A.nvars
        weights = A.weights
        out = []
        pats = {}
        for r in range(nv + 1):
            for N in itertools.combinations(range(nv), r):
                pats[frozenset(N)] = self._pattern_cohomology(frozenset(N), supports)
        lo, hi = window
        for d in range(lo, hi + 1):
            total = 0
            for N, dims in pats.items():
                h = dims[i] if 0 <= i < len(dims) else 0
                if not h:
                    continue
                if N and len(N) < nv:
                    raise InfinitePiece(f"H^{i} has infinite-dimensional graded pieces")
                if not N:
                    total += h * len(_monomials_of_weight(weights, d))
                else:
                    total += h * len(_monomials_of_weight(weights, -d - sum(weights)))
            out.append(total)
        return out


def inf_dual_koszul_symbolic(A, a):
    return CechComplex(A, a)
