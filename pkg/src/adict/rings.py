"""Computable rings: k[x]/J with optional inverted elements, and ring maps."""

import itertools
from functools import cached_property

from .groebner import IdealGB, ideal_groebner
from .poly import Poly, PolyError, PolyRing, grevlex_key, p_mul, weight


class RingError(ValueError):
    pass


class InfinitePiece(RingError):
    """A requested graded piece (or total) is infinite-dimensional."""


class RingSpec:
    """Polynomial ring over a field modulo an ideal given by a reduced GB.

    Graded mode requires positive weights and homogeneous relations; all
    other rings run ungraded, where the only "degree" is 0 and pieces are
    whole (finite-dimensional) spaces.
    """

    def __init__(self, poly: PolyRing, relations=(), inverted=(), name=None):
        self.poly = poly
        self.field = poly.field
        rels = [dict(r) for r in relations if r]
        self.relations = ideal_groebner(self.field, rels) if rels else []
        self.inverted = tuple(inverted)
        self.name = name
        self.jgb = IdealGB(self.field, self.relations)

    # identity is structural so equal constructions compare equal
    def _ident(self):
        return (self.poly, tuple(tuple(sorted(r.items(), key=lambda t: grevlex_key(t[0]))) for r in self.relations))

    def __eq__(self, other):
        return isinstance(other, RingSpec) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        rel = ", ".join(Poly(self.poly, r).to_str() for r in self.relations)
        return f"{self.poly!r}/({rel})" if rel else repr(self.poly)

    @property
    def names(self):
        return self.poly.names

    @property
    def weights(self):
        return self.poly.weights

    @property
    def nvars(self):
        return self.poly.nvars

    @cached_property
    def graded(self):
        if not self.poly.positively_graded:
            return False
        return all(len({weight(e, self.weights) for e in r}) == 1 for r in self.relations)

    @cached_property
    def is_zero_ring(self):
        return any(all(x == 0 for x in e) for r in self.relations for e in r if len(r) == 1)

    def reduce(self, p):
        return self.jgb.reduce_poly(p)

    def parse(self, text):
        """Parse a polynomial and return its normal form (raw dict)."""
        return self.reduce(self.poly.parse(text).terms)

    def elem(self, text):
        return Poly(self.poly, self.parse(text))

    def to_str(self, p):
        return Poly(self.poly, p).to_str()

    def one(self):
        return self.reduce({self.poly.zero_exp: self.field(1)})

    def var(self, name):
        e = [0] * self.nvars
        e[self.poly.var_index(name)] = 1
        return {tuple(e): self.field(1)}

    def mul(self, p, q):
        return self.reduce(p_mul(self.field, p, q))

    def power(self, p, n):
        out = self.one()
        for _ in range(n):
            out = self.mul(out, p)
        return out

    def is_homogeneous(self, p):
        return len({weight(e, self.weights) for e in p}) <= 1

    def degree(self, p):
        ds = {weight(e, self.weights) for e in p}
        if not ds:
            return 0
        if len(ds) != 1:
            raise RingError(f"{self.to_str(p)} is not homogeneous")
        return ds.pop()

    # -- monomial enumeration -------------------------------------------

    def monomials_of_weight(self, d):
        """All monomials of k[x] (ignoring relations) of weighted degree d."""
        return _monomials_of_weight(self.weights, d)

    def standard_monomials(self, d):
        """Basis monomials of the degree-d piece of the ring."""
        if not self.graded:
            raise RingError("graded pieces need a positively graded ring")
        return [e for e in self.monomials_of_weight(d) if self.jgb.is_standard(e)]


_MONO_CACHE = {}


def _monomials_of_weight(weights, d):
    key = (weights, d)
    hit = _MONO_CACHE.get(key)
    if hit is not None:
        return hit
    n = len(weights)
    out = []

    def rec(i, left, acc):
        if i == n:
            if left == 0:
                out.append(tuple(acc))
            return
        w = weights[i]
        k = 0
        while k * w <= left:
            acc.append(k)
            rec(i + 1, left - k * w, acc)
            acc.pop()
            k += 1

    if d >= 0:
        if any(w <= 0 for w in weights):
            raise RingError("monomial enumeration needs positive weights")
        rec(0, d, [])
    out.sort(key=grevlex_key, reverse=True)
    _MONO_CACHE[key] = out
    return out


def standard_order_ideal(leads_by_var_check, nvars, cap=200000):
    """Enumerate an order ideal of monomials given a standardness predicate.

    Finite iff every variable has some pure power that is non-standard; the
    caller checks that first, ``cap`` is a safety net.
    """
    seen = {(0,) * nvars}
    frontier = [(0,) * nvars]
    out = []
    while frontier:
        e = frontier.pop()
        if not leads_by_var_check(e):
            continue
        out.append(e)
        if len(out) > cap:
            raise InfinitePiece("standard monomial enumeration exceeded cap")
        for i in range(nvars):
            f = list(e)
            f[i] += 1
            f = tuple(f)
            if f not in seen:
                seen.add(f)
                frontier.append(f)
    out.sort(key=grevlex_key, reverse=True)
    return out


def make_ring(field, variables, relations=(), name=None):
    """Convenience constructor: ``variables`` like ``"x:1 y:1"`` or ``["x", "y"]``."""
    if isinstance(variables, str):
        variables = variables.split()
    names, weights = [], []
    for item in variables:
        if isinstance(item, tuple):
            n, w = item
        elif ":" in item:
            n, w = item.split(":")
        else:
            n, w = item, 1
        names.append(n)
        weights.append(int(w))
    poly = PolyRing(field, names, weights)
    rels = [poly.parse(r).terms if isinstance(r, str) else r for r in relations]
    return RingSpec(poly, rels, name=name)


class IdealSpec:
    """Finitely generated ideal of a RingSpec with a cached reduced GB."""

    def __init__(self, ring: RingSpec, gens):
        self.ring = ring
        self.gens = [ring.reduce(g) if isinstance(g, dict) else ring.parse(g) for g in gens]

    @classmethod
    def parse(cls, ring, texts):
        return cls(ring, [ring.parse(t) for t in texts])

    @cached_property
    def gb(self):
        """Reduced GB of J + (gens) in the ambient polynomial ring, minus J."""
        full = ideal_groebner(self.ring.field, self.ring.relations + [g for g in self.gens if g])
        rel = IdealGB(self.ring.field, self.ring.relations)
        return [g for g in full if rel.reduce_poly(g)]

    @cached_property
    def full_gb(self):
        return IdealGB(self.ring.field, ideal_groebner(self.ring.field, self.ring.relations + [g for g in self.gens if g]))

    def normal_form(self, p):
        return self.full_gb.reduce_poly(p)

    def contains(self, p):
        return not self.normal_form(p)

    def is_unit_ideal(self):
        return any(len(g) == 1 and all(x == 0 for x in next(iter(g))) for g in self.full_gb.polys)

    def power(self, t):
        """Generators of the t-th power (products of t generators)."""
        gens = [g for g in self.gens if g]
        if t == 0:
            return IdealSpec(self.ring, [self.ring.one()])
        out = []
        seen = set()
        for combo in itertools.combinations_with_replacement(range(len(gens)), t):
            if combo in seen:
                continue
            seen.add(combo)
            p = self.ring.one()
            for i in combo:
                p = self.ring.mul(p, gens[i])
            if p:
                out.append(p)
        return IdealSpec(self.ring, out)

    def __repr__(self):
        return "(" + ", ".join(self.ring.to_str(g) for g in self.gens) + ")"


def groebner_basis(ideal: IdealSpec):
    """The unique reduced GB (as Poly objects) of the ideal, ring relations included."""
    return [Poly(ideal.ring.poly, g) for g in ideal.full_gb.polys]


def normal_form(p, ideal: IdealSpec):
    if isinstance(p, Poly):
        if p.ring != ideal.ring.poly:
            raise RingError("ring mismatch")
        p = p.terms
    return Poly(ideal.ring.poly, ideal.normal_form(p))


class RingMap:
    """k-algebra map given by the images of the source variables."""

    def __init__(self, source: RingSpec, target: RingSpec, images):
        if len(images) != source.nvars:
            raise RingError("one image per source variable")
        self.source = source
        self.target = target
        self.images = [target.reduce(im) for im in images]
        self._pow_cache = {}

    def _var_power(self, i, k):
        key = (i, k)
        hit = self._pow_cache.get(key)
        if hit is None:
            hit = self.target.power(self.images[i], k)
            self._pow_cache[key] = hit
        return hit

    def apply(self, p):
        t = self.target
        out = {}
        for e, c in p.items():
            term = {t.poly.zero_exp: c}
            for i, k in enumerate(e):
                if k:
                    term = p_mul(t.field, term, self._var_power(i, k))
            for f, a in term.items():
                w = t.field.add(out.get(f, 0), a)
                if w == 0:
                    out.pop(f, None)
                else:
                    out[f] = w
        return t.reduce(out)

    def is_well_defined(self):
        return all(not self.apply(r) for r in self.source.relations)

    def image_ideal(self, ideal: IdealSpec):
        return IdealSpec(self.target, [self.apply(g) for g in ideal.gens])

    def __call__(self, p):
        return self.apply(p)


def quotient_ring(A: RingSpec, ideal: IdealSpec, name=None):
    if ideal.ring != A:
        raise RingError("ideal lives in a different ring")
    return RingSpec(A.poly, A.relations + ideal.gens, A.inverted, name=name)


def localize(A: RingSpec, f, inv_name=None):
    """A[f^-1] as A[y]/(y f - 1); y gets weight -deg(f) (0 if f inhomogeneous)."""
    if isinstance(f, str):
        f = A.parse(f)
    f = A.reduce(f)
    if not f:
        raise RingError("cannot invert zero")
    k = 0
    name = inv_name or "y"
    while name in A.names:
        k += 1
        name = f"{inv_name or 'y'}{k}"
    w = -A.degree(f) if A.is_homogeneous(f) else 0
    poly = PolyRing(A.field, A.names + (name,), A.weights + (w,))
    lift = lambda p: {e + (0,): c for e, c in p.items()}
    y = {A.poly.zero_exp + (1,): A.field(1)}
    rel = p_mul(A.field, y, lift(f))
    rel[poly.zero_exp] = A.field.add(rel.get(poly.zero_exp, 0), A.field(-1))
    rel = {e: c for e, c in rel.items() if c != 0}
    out = RingSpec(poly, [lift(r) for r in A.relations] + [rel],
                   A.inverted + (A.to_str(f),))
    return out


def tensor_over_field(A: RingSpec, B: RingSpec):
    """A (x)_k B with colliding B-variables renamed by appending a prime.

    Returns (ring, coprojection from A, coprojection from B).
    """
    if A.field != B.field:
        raise RingError("rings over different fields")
    names = list(A.names)
    bnames = []
    for n in B.names:
        m = n
        while m in names or m in bnames:
            m += "'"
        bnames.append(m)
    poly = PolyRing(A.field, names + bnames, A.weights + B.weights)
    na, nb = A.nvars, B.nvars
    left = lambda p: {e + (0,) * nb: c for e, c in p.items()}
    right = lambda p: {(0,) * na + e: c for e, c in p.items()}
    T = RingSpec(poly, [left(r) for r in A.relations] + [right(r) for r in B.relations])
    iota_a = RingMap(A, T, [T.var(n) for n in A.names])
    iota_b = RingMap(B, T, [T.var(n) for n in bnames])
    return T, iota_a, iota_b


def multiplication_map(A: RingSpec, T: RingSpec):
    """mu: A (x)_k A -> A sending both copies of each variable to itself."""
    if T.nvars != 2 * A.nvars:
        raise RingError("not an enveloping ring of A")
    ims = [A.var(n) for n in A.names] * 2
    return RingMap(T, A, ims)


def diagonal_generators(A: RingSpec, T: RingSpec):
    """x_i - x_i' for each variable of A, as elements of T = A (x) A."""
    n = A.nvars
    f = A.field
    out = []
    for i in range(n):
        e1 = [0] * (2 * n)
        e2 = [0] * (2 * n)
        e1[i] = 1
        e2[n + i] = 1
        out.append(T.reduce({tuple(e1): f(1), tuple(e2): f(-1)}))
    return out


__all__ = [
    "RingSpec", "IdealSpec", "RingMap", "RingError", "InfinitePiece", "PolyError",
    "make_ring", "quotient_ring", "localize", "tensor_over_field",
    "multiplication_map", "diagonal_generators", "groebner_basis", "normal_form",
]
