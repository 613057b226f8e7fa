"""Sparse multivariate polynomials over an exact field.

A polynomial is stored as a dict ``{exponent_tuple: coefficient}`` with no
zero coefficients.  The monomial order is graded reverse lexicographic on
the exponent vectors (standard total degree); the grading used for graded
pieces is the separate per-variable weight vector.
"""

import re
from functools import lru_cache

from .field import Field


class PolyError(ValueError):
    pass


@lru_cache(maxsize=None)
def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def weight(e, weights):
    return sum(a * w for a, w in zip(e, weights))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """True when monomial a divides b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def leading(p):
    """Leading exponent of a nonzero raw polynomial dict."""
    return max(p, key=grevlex_key)


def p_add_scaled(field, p, q, c, m=None):
    """Return p + c * x^m * q as a new dict."""
    out = dict(p)
    add, mul = field.add, field.mul
    for e, v in q.items():
        if m is not None:
            e = tuple(x + y for x, y in zip(e, m))
        w = add(out.get(e, 0), mul(c, v))
        if w == 0:
            out.pop(e, None)
        else:
            out[e] = w
    return out


def p_mul(field, p, q):
    out = {}
    add, mul = field.add, field.mul
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            w = add(out.get(e, 0), mul(c1, c2))
            if w == 0:
                out.pop(e, None)
            else:
                out[e] = w
    return out


def p_scale(field, p, c, m=None):
    if c == 0:
        return {}
    mul = field.mul
    if m is None:
        return {e: mul(c, v) for e, v in p.items()}
    return {tuple(x + y for x, y in zip(e, m)): mul(c, v) for e, v in p.items()}


class PolyRing:
    """Polynomial ring k[x_1..x_n] with positive-or-signed integer weights."""

    def __init__(self, field: Field, names, weights=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise PolyError(f"duplicate variable names in {names}")
        self.field = field
        self.names = names
        self.weights = tuple(weights) if weights is not None else (1,) * len(names)
        if len(self.weights) != len(names):
            raise PolyError("one weight per variable required")
        self.nvars = len(names)
        self.zero_exp = (0,) * self.nvars
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field == other.field
                and self.names == other.names and self.weights == other.weights)

    def __hash__(self):
        return hash((self.field, self.names, self.weights))

    def __repr__(self):
        vs = ",".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"{self.field.tag}[{vs}]"

    @property
    def positively_graded(self):
        return all(w > 0 for w in self.weights)

    def var_index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise PolyError(f"unknown variable {name!r}") from None

    def gen(self, name):
        e = [0] * self.nvars
        e[self.var_index(name)] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self):
        return [self.gen(n) for n in self.names]

    def const(self, c):
        c = self.field(c)
        return Poly(self, {self.zero_exp: c} if c != 0 else {})

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def monomial(self, exp, c=1):
        return Poly(self, {tuple(exp): self.field(c)})

    def parse(self, text):
        return Poly(self, _Parser(self, text).parse())


class Poly:
    """Immutable polynomial bound to a PolyRing."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise PolyError("ring mismatch")
            return other.terms
        return self.ring.const(other).terms

    def __add__(self, other):
        return Poly(self.ring, p_add_scaled(self.ring.field, self.terms, self._coerce(other), 1))

    __radd__ = __add__

    def __sub__(self, other):
        f = self.ring.field
        return Poly(self.ring, p_add_scaled(f, self.terms, self._coerce(other), f(-1)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other):
        return Poly(self.ring, p_mul(self.ring.field, self.terms, self._coerce(other)))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise PolyError("negative power")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring.const(other).terms
        except Exception:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_zero(self):
        return not self.terms

    def lead_exp(self):
        return leading(self.terms)

    def lead_coeff(self):
        return self.terms[self.lead_exp()]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def degrees(self):
        """Set of weighted degrees of the terms."""
        return {weight(e, self.ring.weights) for e in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        ds = self.degrees()
        if len(ds) != 1:
            raise PolyError(f"{self} is not homogeneous")
        return ds.pop()

    def __repr__(self):
        return self.to_str()

    def to_str(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif self.ring.field.characteristic == 0 and c == -1:
                parts.append("-" + mono)
            else:
                if "/" in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(.))")


class _Parser:
    """Recursive-descent parser for + - * ^ / ( ) expressions."""

    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.toks = []
        for m in _TOKEN.finditer(text):
            num, name, op = m.groups()
            if num is not None:
                self.toks.append(("num", int(num), m.start(1)))
            elif name is not None:
                self.toks.append(("var", name, m.start(2)))
            elif op is not None and not op.isspace():
                self.toks.append(("op", op, m.start(3)))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def fail(self, msg):
        raise PolyError(f"malformed polynomial {self.text!r}: {msg} at column {self.peek()[2] + 1}")

    def parse(self):
        if not self.toks:
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        f = self.ring.field
        sign = 1
        if self.peek() == ("op", "-", self.peek()[2]):
            self.take()
            sign = -1
        elif self.peek()[:2] == ("op", "+"):
            self.take()
        p = self.term()
        if sign < 0:
            p = p_scale(f, p, f(-1))
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p_add_scaled(f, p, q, f(1) if op == "+" else f(-1))
        return p

    def term(self):
        f = self.ring.field
        p = self.power()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            q = self.power()
            if op == "*":
                p = p_mul(f, p, q)
            else:
                if len(q) != 1 or self.ring.zero_exp not in q:
                    self.fail("division only by nonzero constants")
                p = p_scale(f, p, f.inv(q[self.ring.zero_exp]))
        return p

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, _ = self.take()
            if kind != "num":
                self.fail("exponent must be a nonnegative integer")
            out = {self.ring.zero_exp: self.ring.field(1)}
            for _ in range(val):
                out = p_mul(self.ring.field, out, base)
            return out
        return base

    def atom(self):
        kind, val, _ = self.peek()
        f = self.ring.field
        if kind == "num":
            self.take()
            c = f(val)
            return {self.ring.zero_exp: c} if c != 0 else {}
        if kind == "var":
            self.take()
            if val not in self.ring._index:
                self.i -= 1
                self.fail(f"unknown variable {val!r}")
            e = [0] * self.ring.nvars
            e[self.ring._index[val]] = 1
            return {tuple(e): f(1)}
        if (kind, val) == ("op", "("):
            self.take()
            p = self.expr()
            if self.take()[:2] != ("op", ")"):
                self.i -= 1
                self.fail("missing ')'")
            return p
        if (kind, val) == ("op", "-"):
            self.take()
            return p_scale(f, self.power(), f(-1))
        self.fail(f"unexpected {val!r}")
