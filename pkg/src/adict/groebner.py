"""Buchberger's algorithm for ideals and submodules of free modules.

Module elements are dicts ``{(component, exponent): coeff}``.  An ideal is
handled as a submodule of the rank-one free module (component 0).  Orders
are given as key functions on ``(component, exponent)``; the larger key
is the leading term.
"""

import heapq

from .poly import grevlex_key, mono_divides, mono_lcm, weight


class ResourceLimit(RuntimeError):
    """Raised when a configured Buchberger step budget is exhausted."""


# Global step budget; the CLI lowers it with --max-gb-steps.
_LIMITS = {"gb_steps": None}


def set_gb_step_limit(n):
    _LIMITS["gb_steps"] = n


def top_key(term):
    comp, exp = term
    return (grevlex_key(exp), -comp)


def pot_key(term):
    comp, exp = term
    return (-comp, grevlex_key(exp))


def elimination_key(r):
    """Term-over-position inside two blocks; components < r dominate."""

    def key(term):
        comp, exp = term
        return (comp < r, grevlex_key(exp), -comp)

    return key


def lead(v, key):
    return max(v, key=key)


def make_monic(field, v, key):
    lt = lead(v, key)
    c = v[lt]
    if c == 1:
        return v
    ci = field.inv(c)
    mul = field.mul
    return {t: mul(ci, a) for t, a in v.items()}


def _axpy(field, f, c, m, g):
    """f <- f + c * x^m * g, in place."""
    add, mul = field.add, field.mul
    for (comp, e), a in g.items():
        t = (comp, tuple(x + y for x, y in zip(e, m)))
        w = add(f.get(t, 0), mul(c, a))
        if w == 0:
            f.pop(t, None)
        else:
            f[t] = w


class _Divisors:
    """Leading terms of a basis indexed by component for divisor lookup."""

    def __init__(self):
        self.by_comp = {}

    def add(self, lt, g):
        self.by_comp.setdefault(lt[0], []).append((lt[1], g))

    def find(self, term):
        for e, g in self.by_comp.get(term[0], ()):
            if mono_divides(e, term[1]):
                return e, g
        return None


def reduce_vector(field, f, divs, key, full=True):
    """Remainder of f modulo a basis of monic elements (full reduction)."""
    f = dict(f)
    rem = {}
    neg = field.neg
    while f:
        lt = max(f, key=key)
        hit = divs.find(lt)
        if hit is None:
            if not full:
                rem.update(f)
                return rem
            rem[lt] = f.pop(lt)
            continue
        e, g = hit
        m = tuple(y - x for x, y in zip(e, lt[1]))
        _axpy(field, f, neg(f[lt]), m, g)
    return rem


def groebner(field, gens, key):
    """Reduced Groebner basis of the submodule spanned by ``gens``."""
    G = []
    LT = []
    pairs = set()
    queue = []
    limit = _LIMITS["gb_steps"]
    steps = 0

    def pair_key(p):
        i, j = p
        m = mono_lcm(LT[i][1], LT[j][1])
        return (sum(m), key((LT[i][0], m)), i, j)

    def add_element(g):
        lt = lead(g, key)
        idx = len(G)
        G.append(g)
        LT.append(lt)
        for i in range(idx):
            if LT[i] is not None and LT[i][0] == lt[0]:
                pairs.add((i, idx))
                heapq.heappush(queue, (pair_key((i, idx)), (i, idx)))

    divs = _Divisors()
    for g in gens:
        if not g:
            continue
        h = reduce_vector(field, g, divs, key)
        if h:
            h = make_monic(field, h, key)
            add_element(h)
            divs.add(LT[-1], h)

    while pairs:
        # pairs are never re-added, so the heap top is the minimum of ``pairs``
        _, p = heapq.heappop(queue)
        if p not in pairs:
            continue
        pairs.discard(p)
        i, j = p
        if LT[i] is None or LT[j] is None:
            continue
        m = mono_lcm(LT[i][1], LT[j][1])
        comp = LT[i][0]
        # product criterion (valid for the rank-one case)
        if all(a == 0 or b == 0 for a, b in zip(LT[i][1], LT[j][1])) and _is_scalar_multiple_vector(G[i]) and _is_scalar_multiple_vector(G[j]):
            continue
        # chain criterion
        skip = False
        for k in range(len(G)):
            if k in (i, j) or LT[k] is None or LT[k][0] != comp:
                continue
            if mono_divides(LT[k][1], m):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if a not in pairs and b not in pairs:
                    skip = True
                    break
        if skip:
            continue
        steps += 1
        if limit is not None and steps > limit:
            raise ResourceLimit(f"Groebner step budget {limit} exhausted")
        s = {}
        _axpy(field, s, 1, tuple(a - b for a, b in zip(m, LT[i][1])), G[i])
        _axpy(field, s, field(-1), tuple(a - b for a, b in zip(m, LT[j][1])), G[j])
        h = reduce_vector(field, s, divs, key, full=False)
        if h:
            h = make_monic(field, h, key)
            add_element(h)
            divs.add(LT[-1], h)

    return interreduce(field, G, key)


def _is_scalar_multiple_vector(g):
    comps = {c for c, _ in g}
    return len(comps) == 1


def interreduce(field, G, key):
    """Minimal, fully reduced basis; deterministic order (descending LT)."""
    items = [(lead(g, key), g) for g in G if g]
    items.sort(key=lambda t: key(t[0]))
    minimal = []
    for lt, g in items:
        if any(l[0] == lt[0] and mono_divides(l[1], lt[1]) for l, _ in minimal):
            continue
        minimal = [(l, h) for l, h in minimal
                   if not (l[0] == lt[0] and mono_divides(lt[1], l[1]))]
        minimal.append((lt, g))
    out = []
    for idx, (lt, g) in enumerate(minimal):
        divs = _Divisors()
        for jdx, (l2, h) in enumerate(minimal):
            if jdx != idx:
                divs.add(l2, h)
        r = reduce_vector(field, g, divs, key)
        out.append(make_monic(field, r, key))
    out.sort(key=lambda g: key(lead(g, key)), reverse=True)
    return out


class ModuleGB:
    """A reduced Groebner basis plus reduction helpers."""

    def __init__(self, field, basis, key):
        self.field = field
        self.basis = basis
        self.key = key
        self.divs = _Divisors()
        self.leads = []
        for g in basis:
            lt = lead(g, key)
            self.divs.add(lt, g)
            self.leads.append(lt)

    @classmethod
    def compute(cls, field, gens, key=top_key):
        return cls(field, groebner(field, gens, key), key)

    def reduce(self, v):
        return reduce_vector(self.field, v, self.divs, self.key)

    def contains(self, v):
        return not self.reduce(v)

    def is_standard(self, term):
        return self.divs.find(term) is None

    def is_unit(self):
        return any(lt[1] == tuple(0 for _ in lt[1]) for lt in self.leads)


# ---------------------------------------------------------------- ideals

def poly_to_vec(p, comp=0):
    return {(comp, e): c for e, c in p.items()}


def vec_to_poly(v, comp=0):
    return {e: c for (k, e), c in v.items() if k == comp}


def ideal_groebner(field, polys):
    """Reduced GB (as raw poly dicts) of the ideal spanned by ``polys``."""
    gb = groebner(field, [poly_to_vec(p) for p in polys if p], top_key)
    return [vec_to_poly(g) for g in gb]


class IdealGB:
    """Reduction modulo the ideal of ring relations, acting on vectors."""

    def __init__(self, field, polys):
        self.field = field
        self.polys = polys
        self.divs = _Divisors()
        self.leads = []
        for p in polys:
            v = poly_to_vec(p)
            lt = lead(v, top_key)
            self.leads.append(lt[1])
            self.divs.add(lt, v)

    def reduce_poly(self, p):
        if not self.polys:
            return dict(p)
        return vec_to_poly(reduce_vector(self.field, poly_to_vec(p), self.divs, top_key))

    def is_standard(self, exp):
        for e in self.leads:
            if mono_divides(e, exp):
                return False
        return True


# ------------------------------------------------------------- syzygies

def relation_vectors(relations, rank):
    """The ring relations J placed in every component of a rank-r module."""
    out = []
    for i in range(rank):
        for p in relations:
            out.append(poly_to_vec(p, i))
    return out


def syzygy_vectors(field, columns, rank, relations=(), nvars=None):
    """Generators of ker(R^s -> R^rank / J R^rank) for the given columns.

    ``columns`` are module vectors in components ``0..rank-1``.  Returns
    vectors in components ``0..s-1`` with entries reduced modulo J.
    """
    s = len(columns)
    if s == 0:
        return []
    if nvars is None:
        nvars = _nv(columns, relations)
    one = (0,) * nvars
    aug = []
    for j, col in enumerate(columns):
        v = dict(col)
        v[(rank + j, one)] = 1
        aug.append(v)
    aug.extend(relation_vectors(relations, rank))
    gb = groebner(field, aug, elimination_key(rank))
    jgb = IdealGB(field, list(relations))
    out = []
    for g in gb:
        if all(c >= rank for c, _ in g):
            v = {}
            for (c, e), a in g.items():
                v[(c - rank, e)] = a
            v = reduce_by_relations(field, v, jgb)
            if v:
                out.append(v)
    return out


def _nv(columns, relations):
    for col in columns:
        for (_, e) in col:
            return len(e)
    for p in relations:
        for e in p:
            return len(e)
    raise ValueError("cannot infer number of variables from empty input")


def reduce_by_relations(field, v, jgb):
    if not jgb.polys:
        return dict(v)
    comps = {}
    for (c, e), a in v.items():
        comps.setdefault(c, {})[e] = a
    out = {}
    for c, p in comps.items():
        for e, a in jgb.reduce_poly(p).items():
            out[(c, e)] = a
    return out


def vector_degree(v, weights, comp_degrees):
    """Weighted degree of a homogeneous vector, or None if inhomogeneous."""
    ds = {weight(e, weights) + comp_degrees[c] for (c, e) in v}
    if len(ds) == 1:
        return ds.pop()
    return None


def minimal_generators(field, vectors, rank, relations, weights, comp_degrees, base=()):
    """Drop generators redundant modulo ``base``, scanning by increasing degree.

    For homogeneous input over a positively graded ring the result is a
    minimal generating set of (span + base)/base.
    """
    def deg(v):
        d = vector_degree(v, weights, comp_degrees)
        return d if d is not None else 0

    order = sorted(range(len(vectors)), key=lambda i: (deg(vectors[i]), i))
    kept = []
    rel = relation_vectors(relations, rank) + [b for b in base if b]
    for i in order:
        v = vectors[i]
        if not v:
            continue
        gb = ModuleGB.compute(field, rel + [vectors[k] for k in kept])
        if gb.reduce(v):
            kept.append(i)
    kept.sort(key=lambda i: (deg(vectors[i]), i))
    return [vectors[i] for i in kept]


class Lifter:
    """Write vectors of span(gens) + base as A-combinations of ``gens``.

    Uses the augmented rows (g_j, e_j) and (b, 0) under an elimination
    order: a vector v lies in the span iff (v, 0) reduces to (0, w), and
    then v = -sum w_j g_j modulo ``base``.
    """

    def __init__(self, field, gens, rank, base=(), relations=(), nvars=None):
        self.field = field
        self.rank = rank
        self.m = len(gens)
        if nvars is None:
            nvars = _nv(list(gens) + list(base), relations)
        one = (0,) * nvars
        aug = []
        for j, g in enumerate(gens):
            v = dict(g)
            v[(rank + j, one)] = 1
            aug.append(v)
        aug.extend(b for b in base if b)
        aug.extend(relation_vectors(relations, rank + self.m))
        self.jgb = IdealGB(field, list(relations))
        self.gb = ModuleGB.compute(field, aug, elimination_key(rank))

    def lift(self, v):
        """Coefficient vector c (components 0..m-1) or None if v is not in the span."""
        r = self.gb.reduce(v)
        if any(k < self.rank for k, _ in r):
            return None
        neg = self.field.neg
        c = {(k - self.rank, e): neg(a) for (k, e), a in r.items()}
        return reduce_by_relations(self.field, c, self.jgb)
