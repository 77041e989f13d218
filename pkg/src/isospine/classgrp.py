"""Class groups of imaginary quadratic orders through reduced binary quadratic forms."""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt
from typing import NamedTuple, Optional

__all__ = [
    "QuadraticForm",
    "reduced_forms",
    "class_number",
    "compose_reduce",
    "principal_form",
    "prime_form",
    "prime_form_order",
    "form_order",
]


class QuadraticForm(NamedTuple):
    """a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def inverse(self) -> "QuadraticForm":
        return reduce_form(QuadraticForm(self.a, -self.b, self.c))

    def reduced(self) -> "QuadraticForm":
        return reduce_form(self)


def _check_discriminant(disc: int) -> None:
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ValueError(f"invalid negative discriminant {disc}")


def reduce_form(f: QuadraticForm) -> QuadraticForm:
    """Reduced form equivalent to a positive definite form f."""
    a, b, c = f
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise ValueError(f"{f} is not positive definite")
    while True:
        # normalize b into (-a, a]
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadraticForm(a, b, c)


@lru_cache(maxsize=4096)
def reduced_forms(disc: int) -> tuple[QuadraticForm, ...]:
    """Every reduced primitive form of discriminant disc, sorted by (a, b)."""
    _check_discriminant(disc)
    out = []
    n = -disc
    amax = isqrt(n // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append(QuadraticForm(a, b, c))
    out.sort(key=lambda f: (f.a, f.b))
    return tuple(out)


def class_number(disc: int) -> int:
    return len(reduced_forms(disc))


def principal_form(disc: int) -> QuadraticForm:
    _check_discriminant(disc)
    k = disc % 2
    return QuadraticForm(1, k, (k - disc) // 4)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose_reduce(f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
    """Gauss composition (Dirichlet's method) followed by reduction."""
    disc = f.discriminant
    if g.discriminant != disc:
        raise ValueError("forms have different discriminants")
    a1, b1, c1 = f
    a2, b2, c2 = g
    s = (b1 + b2) // 2
    # solve for the common b via two extended gcds
    d1, u1, v1 = _xgcd(a1, a2)
    d, u2, v2 = _xgcd(d1, s)
    # u*a1 + v*a2 + w*s = d with u = u2*u1; only v and w are needed
    v, w = u2 * v1, v2
    a1d, a2d = a1 // d, a2 // d
    a3 = a1d * a2d
    b3 = b2 + 2 * a2d * (v * (s - b2) - w * c2)
    b3 %= 2 * a3
    c3 = (b3 * b3 - disc) // (4 * a3)
    return reduce_form(QuadraticForm(a3, b3, c3))


def form_order(f: QuadraticForm) -> int:
    """Order of the class of f in the form class group."""
    e = principal_form(f.discriminant)
    g = reduce_form(f)
    k = 1
    while g != e:
        g = compose_reduce(g, f)
        k += 1
    return k


def prime_form(ell: int, disc: int) -> Optional[QuadraticForm]:
    """A form (ell, b, c) with the smallest b >= 0 solving b^2 = disc mod 4*ell, if any."""
    _check_discriminant(disc)
    for b in range(0, 2 * ell + 1):
        if (b * b - disc) % (4 * ell) == 0:
            return QuadraticForm(ell, b, (b * b - disc) // (4 * ell))
    return None


def prime_form_order(ell: int, disc: int) -> Optional[int]:
    """Order of the class of a prime ideal above ell; None when ell is inert."""
    f = prime_form(ell, disc)
    if f is None:
        return None
    return form_order(f)
