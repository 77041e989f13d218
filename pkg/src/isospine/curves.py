"""Short Weierstrass curves over F_p: invariants, twists, supersingularity and
rational isogenies of degree 2 and 3 via Velu's formulas."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import NamedTuple, Optional

import numpy as np

from .arith import (
    DensePolynomial,
    PrimeField,
    PrimeFieldElement,
    make_field_context,
    roots_with_multiplicity,
)

__all__ = [
    "WeierstrassCurve",
    "InvariantTriple",
    "KernelDescriptor",
    "invariants",
    "curve_from_j",
    "quadratic_twist",
    "twists_from_j",
    "trace_of_frobenius",
    "is_supersingular",
    "supersingular_j_list",
    "smallest_supersingular_j",
    "expected_supersingular_count",
    "division_polynomial",
    "rational_ell_kernels",
    "velu_isogeny",
    "fp_isomorphic",
    "nontrivial_automorphism_scalars",
]


class InvariantTriple(NamedTuple):
    j: PrimeFieldElement
    c4: PrimeFieldElement
    c6: PrimeFieldElement

    def label(self) -> str:
        return f"({self.j.value},{self.c4.value},{self.c6.value})"


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = x^3 + a4*x + a6 over F_p."""

    a4: PrimeFieldElement
    a6: PrimeFieldElement

    def __post_init__(self):
        if self.a4.field.p != self.a6.field.p:
            raise ValueError("coefficients from different fields")
        if (self.a4**3 * 4 + self.a6 * self.a6 * 27).is_zero():
            raise ValueError(f"singular model y^2 = x^3 + {self.a4}x + {self.a6}")

    @classmethod
    def from_ints(cls, a4: int, a6: int, p: int) -> "WeierstrassCurve":
        F = make_field_context(p)
        return cls(F(a4), F(a6))

    @property
    def field(self) -> PrimeField:
        return self.a4.field

    @property
    def p(self) -> int:
        return self.a4.field.p

    def discriminant(self) -> PrimeFieldElement:
        return (self.a4**3 * 4 + self.a6 * self.a6 * 27) * -16

    def rhs(self) -> DensePolynomial:
        F = self.field
        return DensePolynomial(F, [self.a6, self.a4, F.zero, F.one])

    def __repr__(self) -> str:
        return f"y^2 = x^3 + {self.a4.value}x + {self.a6.value} over GF({self.p})"


@dataclass(frozen=True)
class KernelDescriptor:
    """Kernel of a rational isogeny, given by the x-coordinate polynomial of its points."""

    kernel_poly: DensePolynomial
    degree: int

    @property
    def x0(self) -> PrimeFieldElement:
        # both supported degrees have a linear kernel polynomial
        return -self.kernel_poly.monic().coeffs[0]


def invariants(E: WeierstrassCurve) -> InvariantTriple:
    c4 = E.a4 * -48
    c6 = E.a6 * -864
    a3 = E.a4**3 * 4
    j = a3 * 1728 / (a3 + E.a6 * E.a6 * 27)
    return InvariantTriple(j, c4, c6)


def curve_from_j(j: PrimeFieldElement) -> WeierstrassCurve:
    """Canonical model with the given j-invariant."""
    F = j.field
    if j.is_zero():
        return WeierstrassCurve(F.zero, F.one)
    if j == 1728:
        return WeierstrassCurve(F.one, F.zero)
    k = j * 27 / ((F(1728) - j) * 4)
    return WeierstrassCurve(k, k)


def quadratic_twist(E: WeierstrassCurve, d: Optional[int] = None) -> WeierstrassCurve:
    """Twist by d (default: the field's non-residue): (a4, a6) -> (d^2 a4, d^3 a6)."""
    F = E.field
    dd = F(F.nonresidue if d is None else d)
    return WeierstrassCurve(E.a4 * dd * dd, E.a6 * dd * dd * dd)


def twists_from_j(j: PrimeFieldElement) -> tuple[WeierstrassCurve, WeierstrassCurve]:
    """Canonical model with invariant j and a second model from the other quadratic twist class.

    For j = 1728 the second model is (n, 0) rather than a (n^2, 0) twist: when
    p = 3 mod 4 every square is a fourth power, so (n^2, 0) would be isomorphic
    to (1, 0).
    """
    F = j.field
    n = F(F.nonresidue)
    E = curve_from_j(j)
    if j.is_zero():
        return E, WeierstrassCurve(F.zero, n * n * n)
    if j == 1728:
        return E, WeierstrassCurve(n, F.zero)
    return E, quadratic_twist(E)


# ---------------------------------------------------------------------------
# point counting


@lru_cache(maxsize=64)
def _square_table(p: int) -> np.ndarray:
    """chi[v] = Legendre symbol (v|p) for v in [0, p)."""
    chi = -np.ones(p, dtype=np.int64)
    x = np.arange(1, p, dtype=np.int64)
    chi[(x * x) % p] = 1
    chi[0] = 0
    return chi


def trace_of_frobenius(E: WeierstrassCurve) -> int:
    """a_p = p + 1 - #E(F_p), by summing Legendre symbols over all x."""
    p = E.p
    chi = _square_table(p)
    x = np.arange(p, dtype=np.int64)
    v = ((x * x % p) * x + E.a4.value * x + E.a6.value) % p
    return -int(chi[v].sum())


def is_supersingular(E: WeierstrassCurve) -> bool:
    """For p >= 5 the curve is supersingular iff its trace vanishes."""
    return trace_of_frobenius(E) == 0


def _traces_for_js(p: int, js: np.ndarray) -> np.ndarray:
    """Traces of the canonical models for an array of j values (all x at once)."""
    chi = _square_table(p)
    F = make_field_context(p)
    a4 = np.empty(len(js), dtype=np.int64)
    a6 = np.empty(len(js), dtype=np.int64)
    for i, j in enumerate(js.tolist()):
        E = curve_from_j(F(j))
        a4[i], a6[i] = E.a4.value, E.a6.value
    x = np.arange(p, dtype=np.int64)
    x3 = (x * x % p) * x % p
    v = (x3[None, :] + (a4[:, None] * x[None, :]) % p + a6[:, None]) % p
    return -chi[v].sum(axis=1)


@lru_cache(maxsize=256)
def _supersingular_values(p: int) -> tuple[int, ...]:
    make_field_context(p)
    chunk = max(1, 4_000_000 // p)
    found = []
    for start in range(0, p, chunk):
        js = np.arange(start, min(p, start + chunk), dtype=np.int64)
        traces = _traces_for_js(p, js)
        found.extend(js[traces == 0].tolist())
    return tuple(found)


def supersingular_j_list(p: int) -> list[PrimeFieldElement]:
    """All supersingular j-invariants lying in F_p, in increasing order."""
    F = make_field_context(p)
    return [F(j) for j in _supersingular_values(p)]


def smallest_supersingular_j(p: int) -> PrimeFieldElement:
    """Smallest supersingular j in F_p, scanning upward in blocks."""
    F = make_field_context(p)
    chunk = max(1, 200_000 // p)
    for start in range(0, p, chunk):
        js = np.arange(start, min(p, start + chunk), dtype=np.int64)
        hits = js[_traces_for_js(p, js) == 0]
        if len(hits):
            return F(int(hits[0]))
    raise RuntimeError(f"no supersingular j found in F_{p}")


def expected_supersingular_count(p: int) -> int:
    """floor(p/12) + e_p: the number of supersingular j in F_p^2."""
    return p // 12 + {1: 0, 5: 1, 7: 1, 11: 2}[p % 12]


# ---------------------------------------------------------------------------
# isogenies


def division_polynomial(E: WeierstrassCurve, ell: int) -> DensePolynomial:
    """The x-only ell-division polynomial for ell in {2, 3} (psi_2 taken as the cubic)."""
    F = E.field
    a, b = E.a4, E.a6
    if ell == 2:
        return E.rhs()
    if ell == 3:
        return DensePolynomial(F, [-(a * a), b * 12, a * 6, F.zero, F(3)])
    raise ValueError(f"unsupported isogeny degree {ell}")


def rational_ell_kernels(E: WeierstrassCurve, ell: int) -> list[KernelDescriptor]:
    """F_p-rational kernels of degree-ell isogenies out of E.

    Each F_p-root x0 of the division polynomial gives one Galois-stable
    subgroup, whether or not the matching y-coordinate is rational.
    """
    if ell not in (2, 3):
        raise ValueError(f"unsupported isogeny degree {ell}")
    if E.p == ell:
        raise ValueError("ell must differ from the characteristic")
    F = E.field
    out = []
    for x0, _ in roots_with_multiplicity(division_polynomial(E, ell)):
        out.append(KernelDescriptor(DensePolynomial(F, [-x0, F.one]), ell))
    return out


def velu_isogeny(E: WeierstrassCurve, K: KernelDescriptor) -> WeierstrassCurve:
    """Codomain of the isogeny with kernel K, in Velu's normalization."""
    psi = division_polynomial(E, K.degree)
    if K.kernel_poly.degree != 1 or not (psi % K.kernel_poly).is_zero():
        raise ValueError("kernel polynomial does not divide the division polynomial")
    a, b = E.a4, E.a6
    x0 = K.x0
    gx = x0 * x0 * 3 + a
    if K.degree == 2:
        t = gx
        w = x0 * t
    else:
        t = gx * 2
        u = (x0 * x0 * x0 + a * x0 + b) * 4
        w = u + x0 * t
    return WeierstrassCurve(a - t * 5, b - w * 7)


def _is_power(r: int, k: int, p: int) -> bool:
    """Whether r is a k-th power in F_p^*."""
    return pow(r, (p - 1) // gcd(k, p - 1), p) == 1


def fp_isomorphic(E1: WeierstrassCurve, E2: WeierstrassCurve) -> bool:
    """Whether some u in F_p^* sends (a4, a6) to (u^4 a4, u^6 a6)."""
    p = E1.p
    if E2.p != p:
        return False
    a1, b1, a2, b2 = E1.a4.value, E1.a6.value, E2.a4.value, E2.a6.value
    if (a1 == 0) != (a2 == 0) or (b1 == 0) != (b2 == 0):
        return False
    if a1 == 0:
        return _is_power(b2 * pow(b1, -1, p), 6, p)
    if b1 == 0:
        return _is_power(a2 * pow(a1, -1, p), 4, p)
    if invariants(E1).j != invariants(E2).j:
        return False
    # u^2 = (b2/b1)/(a2/a1) must be a square
    return _is_power(b2 * a1 * pow(b1 * a2, -1, p), 2, p)


def nontrivial_automorphism_scalars(E: WeierstrassCurve) -> list[int]:
    """Scalars u in F_p^* other than +-1 with u^4 c4 = c4 and u^6 c6 = c6."""
    p = E.p
    c4, c6 = invariants(E)[1:]
    out = []
    for u in range(2, p - 1):
        if (pow(u, 4, p) * c4.value - c4.value) % p == 0 and (pow(u, 6, p) * c6.value - c6.value) % p == 0:
            out.append(u)
    return out
