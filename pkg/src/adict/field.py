"""Exact coefficient fields: the rationals and prime fields F_p."""

from fractions import Fraction


class FieldError(ValueError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Base class. Elements are plain Python numbers in canonical form."""

    characteristic = 0
    tag = "?"

    def __eq__(self, other):
        return isinstance(other, Field) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return self.tag


class Rationals(Field):
    """Q with elements stored as int when integral, Fraction otherwise."""

    characteristic = 0
    tag = "Q"

    @staticmethod
    def canon(x):
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x)
        elif not isinstance(x, (int, Fraction)):
            raise FieldError(f"cannot coerce {x!r} into Q")
        return self.canon(x)

    def add(self, a, b):
        c = a + b
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    def sub(self, a, b):
        c = a - b
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    def mul(self, a, b):
        c = a * b
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if type(a) is int:
            if a == 1 or a == -1:
                return a
            return Fraction(1, a)
        return self.canon(1 / a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def to_str(self, a):
        return str(a)


class PrimeField(Field):
    """F_p with elements as least nonnegative residues."""

    def __init__(self, p):
        p = int(p)
        if not _is_prime(p):
            raise FieldError(f"modulus not prime: {p}")
        self.p = p
        self.characteristic = p
        self.tag = f"F{p}"

    def canon(self, x):
        return x % self.p

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if not isinstance(x, int):
            raise FieldError(f"cannot coerce {x!r} into {self.tag}")
        return x % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * pow(b, -1, self.p)) % self.p

    def to_str(self, a):
        return str(a)


QQ = Rationals()


def field_from_tag(tag):
    """Parse ``"Q"`` or ``"F7"`` back into a field."""
    if tag == "Q":
        return QQ
    if tag.startswith("F"):
        return PrimeField(int(tag[1:]))
    raise FieldError(f"unknown field tag {tag!r}")
