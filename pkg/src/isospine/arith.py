"""Exact arithmetic in F_p and F_p^2 and dense univariate polynomials over them.

Field elements are small immutable objects bound to a field context.  The
quadratic extension is presented as F_p(s) with s^2 = n, where n is the
smallest quadratic non-residue mod p, so labels are reproducible run to run.
"""

from __future__ import annotations

import random
from functools import lru_cache, total_ordering
from typing import Iterator, Optional, Sequence, Union

__all__ = [
    "is_prime",
    "primes_between",
    "legendre",
    "sqrt_mod",
    "PrimeField",
    "PrimeFieldElement",
    "QuadraticField",
    "QuadraticFieldElement",
    "DensePolynomial",
    "make_field_context",
    "sqrt_mod_p",
    "roots_with_multiplicity",
    "roots_exhaustive",
    "roots_fast",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi (simple sieve)."""
    if hi < 2 or hi < lo:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(hi**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(max(lo, 2), hi + 1) if sieve[i]]


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p, via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> Optional[int]:
    """Square root of a mod p (Tonelli-Shanks); the smaller of the two roots, or None."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


# ---------------------------------------------------------------------------
# F_p


class PrimeField:
    """The field F_p together with its fixed non-residue."""

    __slots__ = ("p", "nonresidue", "_ext")

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 5 or not is_prime(p):
            raise ValueError(f"p must be prime >= 5, got {p!r}")
        self.p = p
        n = 2
        while legendre(n, p) != -1:
            n += 1
        self.nonresidue = n
        self._ext: Optional[QuadraticField] = None

    def __call__(self, value) -> "PrimeFieldElement":
        if isinstance(value, PrimeFieldElement):
            if value.field.p != self.p:
                raise ValueError("element belongs to a different field")
            return value
        return PrimeFieldElement(int(value) % self.p, self)

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    @property
    def order(self) -> int:
        return self.p

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self) -> "PrimeFieldElement":
        return PrimeFieldElement(0, self)

    @property
    def one(self) -> "PrimeFieldElement":
        return PrimeFieldElement(1, self)

    def elements(self) -> Iterator["PrimeFieldElement"]:
        for v in range(self.p):
            yield PrimeFieldElement(v, self)

    def random_element(self, rng: random.Random) -> "PrimeFieldElement":
        return PrimeFieldElement(rng.randrange(self.p), self)

    def extension(self) -> "QuadraticField":
        """F_p^2 built on this context's non-residue."""
        if self._ext is None:
            self._ext = QuadraticField(self)
        return self._ext

    def contains(self, x) -> bool:
        return isinstance(x, PrimeFieldElement) and x.field.p == self.p


@lru_cache(maxsize=None)
def make_field_context(p: int) -> PrimeField:
    """Shared, immutable F_p context (nonresidue = smallest non-square)."""
    return PrimeField(p)


@total_ordering
class PrimeFieldElement:
    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = value
        self.field = field

    def _coerce(self, other) -> Optional[int]:
        if isinstance(other, PrimeFieldElement):
            if other.field.p != self.field.p:
                raise ValueError("mixing elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return None

    def __add__(self, other):
        if isinstance(other, QuadraticFieldElement):
            return other.__radd__(self)
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement((self.value + v) % self.field.p, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QuadraticFieldElement):
            return other.field.lift(self) - other
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement((self.value - v) % self.field.p, self.field)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement((v - self.value) % self.field.p, self.field)

    def __mul__(self, other):
        if isinstance(other, QuadraticFieldElement):
            return other.__rmul__(self)
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(self.value * v % self.field.p, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(-self.value % self.field.p, self.field)

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return PrimeFieldElement(pow(self.value, -1, self.field.p), self.field)

    def __truediv__(self, other):
        if isinstance(other, QuadraticFieldElement):
            return other.field.lift(self) / other
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return self * PrimeFieldElement(v, self.field).inverse()

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElement(v, self.field) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PrimeFieldElement(pow(self.value, e, self.field.p), self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, PrimeFieldElement):
            return self.value == other.value and self.field.p == other.field.p
        if isinstance(other, QuadraticFieldElement):
            return other == self
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, PrimeFieldElement):
            return self.value < other.value
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.value}"

    def is_zero(self) -> bool:
        return self.value == 0

    def is_square(self) -> bool:
        return legendre(self.value, self.field.p) >= 0

    def sqrt(self) -> Optional["PrimeFieldElement"]:
        r = sqrt_mod(self.value, self.field.p)
        return None if r is None else PrimeFieldElement(r, self.field)

    def label(self) -> str:
        return str(self.value)

    def sort_key(self) -> tuple[int, int]:
        return (self.value, 0)


def sqrt_mod_p(a: PrimeFieldElement) -> Optional[PrimeFieldElement]:
    """Smaller square root of a in F_p, or None when a is a non-square."""
    return a.sqrt()


# ---------------------------------------------------------------------------
# F_p^2 = F_p(s), s^2 = n


class QuadraticField:
    __slots__ = ("base", "p", "nonresidue")

    def __init__(self, base: PrimeField):
        self.base = base
        self.p = base.p
        self.nonresidue = base.nonresidue

    def __call__(self, a, b=0) -> "QuadraticFieldElement":
        if isinstance(a, QuadraticFieldElement):
            return a
        return QuadraticFieldElement(int(a) % self.p, int(b) % self.p, self)

    def lift(self, x) -> "QuadraticFieldElement":
        if isinstance(x, QuadraticFieldElement):
            return x
        return QuadraticFieldElement(int(x) % self.p, 0, self)

    def __repr__(self) -> str:
        return f"GF({self.p}^2)"

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF2", self.p))

    @property
    def order(self) -> int:
        return self.p * self.p

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self) -> "QuadraticFieldElement":
        return QuadraticFieldElement(0, 0, self)

    @property
    def one(self) -> "QuadraticFieldElement":
        return QuadraticFieldElement(1, 0, self)

    @property
    def gen(self) -> "QuadraticFieldElement":
        return QuadraticFieldElement(0, 1, self)

    def elements(self) -> Iterator["QuadraticFieldElement"]:
        for a in range(self.p):
            for b in range(self.p):
                yield QuadraticFieldElement(a, b, self)

    def random_element(self, rng: random.Random) -> "QuadraticFieldElement":
        return QuadraticFieldElement(rng.randrange(self.p), rng.randrange(self.p), self)

    def contains(self, x) -> bool:
        return isinstance(x, QuadraticFieldElement) and x.field.p == self.p


@total_ordering
class QuadraticFieldElement:
    """a + b*s with s^2 = field.nonresidue."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a: int, b: int, field: QuadraticField):
        self.a = a
        self.b = b
        self.field = field

    def _coerce(self, other) -> Optional[tuple[int, int]]:
        if isinstance(other, QuadraticFieldElement):
            if other.field.p != self.field.p:
                raise ValueError("mixing elements of different fields")
            return other.a, other.b
        if isinstance(other, PrimeFieldElement):
            if other.field.p != self.field.p:
                raise ValueError("mixing elements of different fields")
            return other.value, 0
        if isinstance(other, int):
            return other % self.field.p, 0
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return QuadraticFieldElement((self.a + o[0]) % p, (self.b + o[1]) % p, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return QuadraticFieldElement((self.a - o[0]) % p, (self.b - o[1]) % p, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return QuadraticFieldElement((o[0] - self.a) % p, (o[1] - self.b) % p, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        c, d = o
        return QuadraticFieldElement(
            (self.a * c + self.field.nonresidue * self.b * d) % p,
            (self.a * d + self.b * c) % p,
            self.field,
        )

    __rmul__ = __mul__

    def __neg__(self):
        p = self.field.p
        return QuadraticFieldElement(-self.a % p, -self.b % p, self.field)

    def norm(self) -> int:
        p = self.field.p
        return (self.a * self.a - self.field.nonresidue * self.b * self.b) % p

    def conjugate(self) -> "QuadraticFieldElement":
        """The p-power Frobenius image a - b*s."""
        return QuadraticFieldElement(self.a, -self.b % self.field.p, self.field)

    frobenius = conjugate

    def inverse(self) -> "QuadraticFieldElement":
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("inverse of zero in F_p^2")
        p = self.field.p
        ni = pow(nm, -1, p)
        return QuadraticFieldElement(self.a * ni % p, -self.b * ni % p, self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * QuadraticFieldElement(o[0], o[1], self.field).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticFieldElement(o[0], o[1], self.field) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadraticFieldElement):
            return self.a == other.a and self.b == other.b and self.field.p == other.field.p
        if isinstance(other, PrimeFieldElement):
            return self.b == 0 and self.a == other.value and self.field.p == other.field.p
        if isinstance(other, int):
            return self.b == 0 and self.a == other % self.field.p
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, QuadraticFieldElement):
            return (self.a, self.b) < (other.a, other.b)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __int__(self) -> int:
        if self.b:
            raise ValueError(f"{self} is not in F_p")
        return self.a

    def __repr__(self) -> str:
        return self.label()

    def label(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*s"

    def sort_key(self) -> tuple[int, int]:
        return (self.a, self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def in_base_field(self) -> bool:
        return self.b == 0

    def is_square(self) -> bool:
        # x is a square in F_p^2 iff its norm is a square in F_p
        return legendre(self.norm(), self.field.p) >= 0

    def sqrt(self) -> Optional["QuadraticFieldElement"]:
        p, n, F = self.field.p, self.field.nonresidue, self.field
        if self.b == 0:
            r = sqrt_mod(self.a, p)
            if r is not None:
                return QuadraticFieldElement(r, 0, F)
            r = sqrt_mod(self.a * pow(n, -1, p), p)
            return QuadraticFieldElement(0, r, F)
        t = sqrt_mod(self.norm(), p)
        if t is None:
            return None
        half = (p + 1) // 2
        c = sqrt_mod((self.a + t) * half, p)
        if c is None or c == 0:
            c = sqrt_mod((self.a - t) * half, p)
        d = self.b * pow(2 * c, -1, p) % p
        root = QuadraticFieldElement(c, d, F)
        neg = -root
        return min(root, neg)


Element = Union[PrimeFieldElement, QuadraticFieldElement]
Field = Union[PrimeField, QuadraticField]


# ---------------------------------------------------------------------------
# Polynomials


class DensePolynomial:
    """Univariate polynomial over a finite field, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence):
        cs = [field(c) if not field.contains(c) else c for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, field: Field) -> "DensePolynomial":
        return cls(field, [field.zero, field.one])

    @classmethod
    def constant(cls, field: Field, c) -> "DensePolynomial":
        return cls(field, [c])

    def lift(self, field: Field) -> "DensePolynomial":
        """Same polynomial with coefficients viewed in an extension field."""
        if field == self.field:
            return self
        return DensePolynomial(field, [field.lift(c) for c in self.coeffs])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __eq__(self, other) -> bool:
        return isinstance(other, DensePolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if mono and c == 1:
                terms.append(mono)
            else:
                terms.append(f"({c.label()})" + ("*" + mono if mono else ""))
        return " + ".join(terms)

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _binop_coeffs(self, other):
        if isinstance(other, DensePolynomial):
            return other.coeffs
        return (self.field(other),)

    def __add__(self, other):
        oc = self._binop_coeffs(other)
        n = max(len(self.coeffs), len(oc))
        z = self.field.zero
        out = [
            (self.coeffs[i] if i < len(self.coeffs) else z) + (oc[i] if i < len(oc) else z)
            for i in range(n)
        ]
        return DensePolynomial(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return DensePolynomial(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, DensePolynomial):
            return self + (-other)
        return self + (-self.field(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, DensePolynomial):
            c = self.field(other) if not self.field.contains(other) else other
            return DensePolynomial(self.field, [a * c for a in self.coeffs])
        if self.is_zero() or other.is_zero():
            return DensePolynomial(self.field, [])
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return DensePolynomial(self.field, out)

    __rmul__ = __mul__

    def __divmod__(self, other: "DensePolynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return DensePolynomial(self.field, []), self
        inv_lead = other.leading.inverse()
        quot = [self.field.zero] * (dq + 1)
        od = other.degree
        for k in range(dq, -1, -1):
            c = rem[k + od] * inv_lead
            quot[k] = c
            if c.is_zero():
                continue
            for i, b in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - c * b
        return DensePolynomial(self.field, quot), DensePolynomial(self.field, rem[:od])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "DensePolynomial":
        if self.is_zero():
            return self
        inv = self.leading.inverse()
        return DensePolynomial(self.field, [c * inv for c in self.coeffs])

    def derivative(self) -> "DensePolynomial":
        return DensePolynomial(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other: "DensePolynomial") -> "DensePolynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def powmod(self, e: int, mod: "DensePolynomial") -> "DensePolynomial":
        result = DensePolynomial(self.field, [self.field.one]) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result


# ---------------------------------------------------------------------------
# Root finding

EXHAUSTIVE_LIMIT = 1000


def roots_with_multiplicity(f: DensePolynomial, field: Optional[Field] = None) -> list[tuple]:
    """Roots of f lying in `field` (default: f's own field), with multiplicities.

    Small fields are scanned exhaustively; larger ones go through squarefree
    decomposition, gcd with X^q - X and equal-degree splitting.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has every element as a root")
    if field is not None:
        f = f.lift(field)
    if f.field.order < EXHAUSTIVE_LIMIT or f.degree >= f.field.characteristic:
        return roots_exhaustive(f)
    return roots_fast(f)


def _multiplicity(f: DensePolynomial, r) -> int:
    lin = DensePolynomial(f.field, [-r, f.field.one])
    m = 0
    while True:
        q, rem = divmod(f, lin)
        if not rem.is_zero():
            return m
        m += 1
        f = q


def roots_exhaustive(f: DensePolynomial) -> list[tuple]:
    """Evaluate f at every field element; multiplicity by repeated trial division."""
    if f.field.order > 10**7:
        raise ValueError("field too large for exhaustive root scan")
    out = []
    for x in f.field.elements():
        if f(x).is_zero():
            out.append((x, _multiplicity(f, x)))
    out.sort(key=lambda rm: rm[0].sort_key())
    return out


def _squarefree_decomposition(f: DensePolynomial) -> list[tuple[DensePolynomial, int]]:
    # Yun's algorithm; valid while deg f < char
    f = f.monic()
    df = f.derivative()
    a = f.gcd(df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = b.gcd(d)
        b = b // a
        c = d // a
        d = c - b.derivative()
        if a.degree > 0:
            out.append((a, i))
        i += 1
    return out


def _linear_part(g: DensePolynomial) -> DensePolynomial:
    """Product of the distinct linear factors of squarefree g."""
    X = DensePolynomial.x(g.field)
    xq = X.powmod(g.field.order, g)
    return g.gcd(xq - X)


def _split_linear(g: DensePolynomial, rng: random.Random) -> list:
    """Roots of a monic squarefree g that splits into distinct linear factors."""
    F = g.field
    if g.degree == 0:
        return []
    if g.degree == 1:
        return [-g.coeffs[0]]
    if g.degree == 2:
        c, b = g.coeffs[0], g.coeffs[1]
        disc = b * b - c * 4
        s = disc.sqrt()
        if s is not None:
            half = F((F.characteristic + 1) // 2)
            return [(-b + s) * half, (-b - s) * half]
    e = (F.order - 1) // 2
    X = DensePolynomial.x(F)
    while True:
        delta = F.random_element(rng)
        h = (X + delta).powmod(e, g) - 1
        h = g.gcd(h)
        if 0 < h.degree < g.degree:
            return _split_linear(h, rng) + _split_linear(g // h, rng)


def roots_fast(f: DensePolynomial) -> list[tuple]:
    rng = random.Random(0x5EED)
    out = []
    for part, mult in _squarefree_decomposition(f):
        g = _linear_part(part)
        for r in _split_linear(g, rng):
            out.append((r, mult))
    out.sort(key=lambda rm: rm[0].sort_key())
    return out
