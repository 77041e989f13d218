"""Classical modular polynomials of level 2 and 3, the integer polynomials derived
from them, a small table of Hilbert class polynomials, and neighbor queries."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .arith import DensePolynomial, roots_with_multiplicity

__all__ = [
    "IntPoly",
    "modular_polynomial",
    "phi_eval",
    "phi_in_y",
    "phi_y_poly",
    "diagonal_poly",
    "res_poly",
    "res2_poly",
    "second_derivative_resultant",
    "RES2_FACTORED",
    "RES3_FACTORED",
    "RES2_SECOND_FACTORED",
    "hilbert_poly",
    "SUPPORTED_DISCRIMINANTS",
    "neighbors",
]


class IntPoly:
    """Univariate polynomial with integer coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def linear(cls, root: int) -> "IntPoly":
        """X - root."""
        return cls([-root, 1])

    @classmethod
    def product(cls, factors: Iterable[tuple["IntPoly", int]], scale: int = 1) -> "IntPoly":
        out = cls([scale])
        for f, e in factors:
            for _ in range(e):
                out = out * f
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(x + y for x, y in zip(a, b))

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return IntPoly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reduce(self, field) -> DensePolynomial:
        return DensePolynomial(field, [field(c) for c in self.coeffs])


# ---------------------------------------------------------------------------
# vendored data: coefficient of X^i Y^k for i >= k (the polynomials are symmetric)

_PHI_HALF = {
    2: {
        (3, 0): 1,
        (2, 2): -1,
        (2, 1): 1488,
        (2, 0): -162000,
        (1, 1): 40773375,
        (1, 0): 8748000000,
        (0, 0): -157464000000000,
    },
    3: {
        (4, 0): 1,
        (3, 3): -1,
        (3, 2): 2232,
        (3, 1): -1069956,
        (3, 0): 36864000,
        (2, 2): 2587918086,
        (2, 1): 8900222976000,
        (2, 0): 452984832000000,
        (1, 1): -770845966336000000,
        (1, 0): 1855425871872000000000,
    },
}


@lru_cache(maxsize=None)
def modular_polynomial(ell: int) -> dict[tuple[int, int], int]:
    """All nonzero coefficients {(i, k): c} of Phi_ell(X, Y) = sum c X^i Y^k."""
    if ell not in _PHI_HALF:
        raise ValueError(f"modular polynomial only available for ell in (2, 3), got {ell}")
    full = {}
    for (i, k), c in _PHI_HALF[ell].items():
        full[(i, k)] = c
        full[(k, i)] = c
    return full


def phi_eval(ell: int, x, y):
    """Phi_ell(x, y) for integers or field elements."""
    acc = 0
    for (i, k), c in modular_polynomial(ell).items():
        acc = acc + (x**i) * (y**k) * c
    return acc


def _y_coefficients(ell: int, x) -> list:
    """Coefficients in Y of Phi_ell(x, Y) for a fixed x."""
    cs = [0] * (ell + 2)
    for (i, k), c in modular_polynomial(ell).items():
        cs[k] = cs[k] + (x**i) * c
    return cs


def phi_in_y(ell: int, j, field=None) -> DensePolynomial:
    """Phi_ell(j, Y) as a polynomial over `field` (default: the field of j)."""
    F = field if field is not None else j.field
    if field is not None and hasattr(F, "lift"):
        j = F.lift(j)
    powers = [F.one]
    for _ in range(ell + 1):
        powers.append(powers[-1] * j)
    cs = [F.zero] * (ell + 2)
    for (i, k), c in modular_polynomial(ell).items():
        cs[k] = cs[k] + powers[i] * c
    return DensePolynomial(F, cs)


def phi_y_poly(ell: int, x: int, derivative: int = 0) -> list[int]:
    """Integer coefficients in Y of the given Y-derivative of Phi_ell(x, Y)."""
    cs = _y_coefficients(ell, x)
    for _ in range(derivative):
        cs = [k * c for k, c in enumerate(cs)][1:]
    return cs


# ---------------------------------------------------------------------------
# resultants over Z by exact evaluation and interpolation


def _bareiss_det(m: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    m = [row[:] for row in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for jj in range(k + 1, n):
                m[i][jj] = (m[i][jj] * m[k][k] - m[i][k] * m[k][jj]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Resultant of two integer polynomials given lowest-degree first."""
    f = list(f)
    g = list(g)
    while f and f[-1] == 0:
        f.pop()
    while g and g[-1] == 0:
        g.pop()
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fr, gr = f[::-1], g[::-1]
    for i in range(n):
        rows.append([0] * i + fr + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gr + [0] * (size - n - 1 - i))
    return _bareiss_det(rows)


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> IntPoly:
    """Integer polynomial through the given points (Newton divided differences)."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (X - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[i]
    if any(c.denominator != 1 for c in poly):
        raise ArithmeticError("interpolated resultant is not integral")
    return IntPoly(int(c) for c in poly)


def _resultant_poly(ell: int, left: int, right: int) -> IntPoly:
    """Res_Y of two Y-derivatives (orders left, right) of Phi_ell, as a polynomial in X."""
    bound = (ell + 1) * (2 * ell + 1) + 1
    xs = list(range(-bound // 2, bound - bound // 2 + 1))
    ys = [_resultant(phi_y_poly(ell, x, left), phi_y_poly(ell, x, right)) for x in xs]
    return _interpolate(xs, ys)


def _hilbert_int(D: int) -> IntPoly:
    return IntPoly(_HILBERT[D])


@lru_cache(maxsize=None)
def diagonal_poly(ell: int) -> IntPoly:
    """Phi_ell(X, X)."""
    deg = 2 * (ell + 1)
    out = [0] * (deg + 1)
    for (i, k), c in modular_polynomial(ell).items():
        out[i + k] += c
    return IntPoly(out)


@lru_cache(maxsize=None)
def res_poly(ell: int) -> IntPoly:
    """Res_Y(Phi_ell(X, Y), dPhi_ell/dY), computed from the vendored coefficients."""
    modular_polynomial(ell)
    return _resultant_poly(ell, 0, 1)


@lru_cache(maxsize=None)
def res2_poly(ell: int = 2) -> IntPoly:
    """Res_Y(dPhi/dY, d^2Phi/dY^2): common roots with res_poly flag triple roots of Phi(j, Y)."""
    if ell != 2:
        raise ValueError("the second-derivative resultant is only provided for ell = 2")
    return _resultant_poly(ell, 1, 2)


@lru_cache(maxsize=None)
def second_derivative_resultant(ell: int = 2) -> IntPoly:
    """Res_Y(Phi(X, Y), d^2Phi/dY^2), kept for comparison with res2_poly."""
    return _resultant_poly(ell, 0, 2)


# factored forms, checked against the computed resultants in the tests
RES2_FACTORED = IntPoly.product(
    [
        (IntPoly([0, 1]), 2),
        (IntPoly.linear(1728), 1),
        (IntPoly.linear(-3375), 2),
        (IntPoly([-121287375, 191025, 1]), 2),
    ],
    scale=-4,
)

RES3_FACTORED = IntPoly.product(
    [
        (IntPoly([0, 1]), 2),
        (IntPoly.linear(8000), 2),
        (IntPoly.linear(1728), 2),
        (IntPoly.linear(-32768), 2),
        (IntPoly([-681472000, -1264000, 1]), 2),
        (IntPoly([12167000000, -52250000, 1]), 2),
        (IntPoly([-134217728000, 117964800, 1]), 2),
    ],
    scale=-27,
)

RES2_SECOND_FACTORED = IntPoly.product(
    [(IntPoly([0, 1]), 1), (IntPoly.linear(405), 1), (IntPoly([1492425, -2571, 1]), 1)],
    scale=-12,
)


# ---------------------------------------------------------------------------
# Hilbert class polynomials

_HILBERT = {
    -3: [0, 1],
    -4: [-1728, 1],
    -7: [3375, 1],
    -8: [-8000, 1],
    -11: [32768, 1],
    -12: [-54000, 1],
    -15: [-121287375, 191025, 1],
    -20: [-681472000, -1264000, 1],
    -27: [12288000, 1],
    -32: [12167000000, -52250000, 1],
    -35: [-134217728000, 117964800, 1],
    -36: [-1790957481984, -153542016, 1],
    -72: [232381513792000000, -377674768000, 1],
    -99: [-56171326053810176, 37616060956672, 1],
    -108: [-1879994705688000000000, 224179462188000000, -151013228706000, 1],
}

SUPPORTED_DISCRIMINANTS = tuple(sorted(_HILBERT, reverse=True))


def hilbert_poly(D: int) -> IntPoly:
    if D not in _HILBERT:
        supported = ", ".join(str(d) for d in SUPPORTED_DISCRIMINANTS)
        raise ValueError(f"no Hilbert class polynomial for D={D}; supported: {supported}")
    return _hilbert_int(D)


# ---------------------------------------------------------------------------
# neighbor queries


def neighbors(j, ell: int, field=None, known_root=None) -> list[tuple]:
    """Roots of Phi_ell(j, Y) in `field` with multiplicity, in canonical order.

    `known_root` (typically the vertex we arrived from) is divided out first,
    which keeps the remaining polynomial small for the root finder.
    """
    F = field if field is not None else j.field
    f = phi_in_y(ell, j, F)
    if known_root is None:
        return roots_with_multiplicity(f)
    r = F.lift(known_root) if hasattr(F, "lift") else F(known_root)
    lin = DensePolynomial(F, [-r, F.one])
    q, rem = divmod(f, lin)
    if not rem.is_zero():
        raise ValueError(f"{known_root} is not a root of Phi_{ell}({j}, Y)")
    found = dict(roots_with_multiplicity(q))
    found[r] = found.get(r, 0) + 1
    return sorted(found.items(), key=lambda rm: rm[0].sort_key())
