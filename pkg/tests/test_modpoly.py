import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from isospine.arith import legendre, make_field_context, primes_between, roots_with_multiplicity
from isospine.classgrp import class_number
from isospine.curves import is_supersingular, supersingular_j_list, trace_of_frobenius, twists_from_j
from isospine.modpoly import (
    RES2_FACTORED,
    RES2_SECOND_FACTORED,
    RES3_FACTORED,
    SUPPORTED_DISCRIMINANTS,
    IntPoly,
    diagonal_poly,
    hilbert_poly,
    modular_polynomial,
    neighbors,
    phi_eval,
    phi_in_y,
    res2_poly,
    res_poly,
    second_derivative_resultant,
)

X, Y = sympy.symbols("X Y")

# ---------------------------------------------------------------------------
# q-expansion oracle for the vendored coefficients

PREC = 40


def _mul(a, b):
    out = [0] * PREC
    for i, x in enumerate(a):
        if x:
            for k in range(PREC - i):
                out[i + k] += x * b[k]
    return out


def _inverse(a):
    # a[0] == 1
    out = [0] * PREC
    out[0] = 1
    for n in range(1, PREC):
        out[n] = -sum(a[k] * out[n - k] for k in range(1, n + 1))
    return out


def _j_times_q():
    """q * j(q) as a power series (integers), from E4^3 / prod(1 - q^n)^24."""
    sigma3 = [0] + [sum(d**3 for d in range(1, n + 1) if n % d == 0) for n in range(1, PREC)]
    e4 = [1] + [240 * sigma3[n] for n in range(1, PREC)]
    eta24 = [1] + [0] * (PREC - 1)
    for n in range(1, PREC):
        factor = [0] * PREC
        factor[0], factor[n] = 1, -1
        for _ in range(24):
            eta24 = _mul(eta24, factor)
    return _mul(_mul(_mul(e4, e4), e4), _inverse(eta24))


def test_j_expansion_known_coefficients():
    s = _j_times_q()
    assert s[:4] == [1, 744, 196884, 21493760]


@pytest.mark.parametrize("ell", [2, 3])
def test_modular_polynomial_vanishes_on_q_expansions(ell):
    # j(q) = sum s[k] q^(k-1); evaluate Phi(j(q), j(q^ell)) as a Laurent series
    s = _j_times_q()
    shift = (ell + 1) * (1 + ell)  # most negative exponent from X^a Y^b
    size = PREC - shift - 2
    jq = {k - 1: c for k, c in enumerate(s)}
    jql = {ell * (k - 1): c for k, c in enumerate(s)}

    def power(series, e):
        out = {0: 1}
        for _ in range(e):
            nxt = {}
            for a, x in out.items():
                for b, y in series.items():
                    nxt[a + b] = nxt.get(a + b, 0) + x * y
            out = nxt
        return out

    total = {}
    for (i, k), c in modular_polynomial(ell).items():
        for a, x in power(jq, i).items():
            for b, y in power(jql, k).items():
                total[a + b] = total.get(a + b, 0) + c * x * y
    # coefficients are trustworthy only up to exponent size - shift
    for e in range(-shift, size - shift):
        assert total.get(e, 0) == 0, e


@pytest.mark.parametrize("ell", [2, 3])
def test_modular_polynomial_shape(ell):
    phi = modular_polynomial(ell)
    assert all(phi[(k, i)] == c for (i, k), c in phi.items())
    assert max(i for i, _ in phi) == ell + 1
    assert phi[(ell + 1, 0)] == 1  # monic in X (and Y)


def test_phi2_known_coefficients():
    phi = modular_polynomial(2)
    assert phi[(2, 2)] == -1
    assert phi[(2, 1)] == 1488
    assert phi[(1, 1)] == 40773375
    assert phi[(0, 0)] == -157464000000000
    # X^3, Y^3, X^2Y^2, X^2Y, XY^2, X^2, Y^2, XY, X, Y, 1
    assert len(phi) == 11


def test_unsupported_ell_rejected():
    with pytest.raises(ValueError):
        modular_polynomial(5)


# ---------------------------------------------------------------------------
# diagonal and resultants


def _sympy_phi(ell):
    return sum(c * X**i * Y**k for (i, k), c in modular_polynomial(ell).items())


def _as_intpoly(expr):
    return IntPoly(reversed(sympy.Poly(sympy.expand(expr), X).all_coeffs()))


def test_diagonal_factorizations():
    assert diagonal_poly(2) == IntPoly.product(
        [(IntPoly.linear(1728), 1), (IntPoly.linear(8000), 1), (IntPoly.linear(-3375), 2)], scale=-1
    )
    assert diagonal_poly(3) == IntPoly.product(
        [
            (IntPoly([0, 1]), 1),
            (IntPoly.linear(54000), 1),
            (IntPoly.linear(8000), 2),
            (IntPoly.linear(-32768), 2),
        ],
        scale=-1,
    )


@pytest.mark.parametrize("ell", [2, 3])
def test_diagonal_matches_substitution(ell):
    rng = random.Random(ell)
    for _ in range(20):
        t = rng.randrange(-10**6, 10**6)
        assert diagonal_poly(ell)(t) == phi_eval(ell, t, t)


def test_res_poly_2_matches_sympy_and_factored_form():
    phi = _sympy_phi(2)
    oracle = _as_intpoly(sympy.resultant(phi, sympy.diff(phi, Y), Y))
    assert res_poly(2) == oracle == RES2_FACTORED


def test_res_poly_3_matches_sympy_and_factored_form():
    phi = _sympy_phi(3)
    oracle = _as_intpoly(sympy.resultant(phi, sympy.diff(phi, Y), Y))
    assert res_poly(3) == oracle == RES3_FACTORED
    # the quadratic factors are the Hilbert polynomials of -20, -32, -35
    for D in (-20, -32, -35):
        assert hilbert_poly(D).degree == 2
        assert sympy.rem(_sympy_expr(RES3_FACTORED), _sympy_expr(hilbert_poly(D)) ** 2, X) == 0


def _sympy_expr(f: IntPoly):
    return sum(c * X**i for i, c in enumerate(f.coeffs))


def test_second_derivative_resultants():
    phi = _sympy_phi(2)
    dy, dyy = sympy.diff(phi, Y), sympy.diff(phi, Y, 2)
    assert res2_poly(2) == _as_intpoly(sympy.resultant(dy, dyy, Y)) == RES2_SECOND_FACTORED
    literal = second_derivative_resultant(2)
    assert literal == _as_intpoly(sympy.resultant(phi, dyy, Y))
    assert literal.degree == 6
    with pytest.raises(ValueError):
        res2_poly(3)


def test_res2_value_at_1728():
    f1728 = 1728**2 - 2571 * 1728 + 1492425
    assert f1728 == 3**6 * 7**2
    assert res2_poly(2)(1728) == -(2**2) * 3 * 1728 * 1323 * f1728


def test_triple_edge_constant_factorization():
    n = 158371952330592000
    primes = set(sympy.factorint(n))
    assert primes - {2, 3, 5, 7, 13} == {11}


# ---------------------------------------------------------------------------
# Hilbert polynomials


def test_hilbert_examples():
    assert hilbert_poly(-15) == IntPoly([-121287375, 191025, 1])
    assert hilbert_poly(-3) == IntPoly([0, 1])
    assert hilbert_poly(-4) == IntPoly([-1728, 1])


def test_hilbert_unsupported_lists_supported():
    with pytest.raises(ValueError) as err:
        hilbert_poly(-23)
    for D in SUPPORTED_DISCRIMINANTS:
        assert str(D) in str(err.value)


@pytest.mark.parametrize("D", SUPPORTED_DISCRIMINANTS)
def test_hilbert_degree_is_class_number(D):
    assert hilbert_poly(D).degree == class_number(D)


@pytest.mark.parametrize("D", SUPPORTED_DISCRIMINANTS)
def test_hilbert_roots_have_cm_by_D(D):
    """Mod an inert prime the roots are supersingular; mod a split prime the trace t has t^2 - 4p = D v^2."""
    for p in primes_between(5, 400):
        if D % p == 0:
            continue
        F = make_field_context(p)
        for r, _ in roots_with_multiplicity(hilbert_poly(D).reduce(F)):
            E = twists_from_j(r)[0]
            if legendre(D % p, p) == -1:
                assert is_supersingular(E)
            else:
                t = trace_of_frobenius(E)
                q, rem = divmod(t * t - 4 * p, D)
                assert rem == 0 and sympy.sqrt(q).is_integer


def test_h15_roots_rational_and_supersingular():
    for p in primes_between(7, 2003):
        F = make_field_context(p)
        roots = roots_with_multiplicity(hilbert_poly(-15).reduce(F))
        in_fp = bool(roots)
        assert in_fp == (p in (7, 13) or p % 5 in (1, 4)), p
        if in_fp:
            ss = {int(j) for j in supersingular_j_list(p)}
            all_ss = all(int(r) in ss for r, _ in roots)
            assert all_ss == (p in (7, 13) or p % 3 == 2), p


# ---------------------------------------------------------------------------
# neighbors


def test_neighbors_examples():
    F29 = make_field_context(29)
    assert neighbors(F29(0), 2) == [(2, 3)]
    assert 54000 % 29 == 2
    for p in (5, 11, 17, 29, 41):
        F = make_field_context(p)
        expected = sorted({0: 1, (-12288000) % p: 3}.items()) if (-12288000) % p else [(0, 4)]
        assert neighbors(F(0), 3) == expected
    for p in (7, 11, 19, 23, 31):
        F = make_field_context(p)
        K = F.extension()
        assert all(m % 2 == 0 for _, m in neighbors(K.lift(F(1728)), 3, K))


@settings(max_examples=80, deadline=None)
@given(p=st.sampled_from(primes_between(5, 300)), a=st.integers(0, 10**6), b=st.integers(0, 10**6), ell=st.sampled_from([2, 3]))
def test_neighbor_roots_are_roots(p, a, b, ell):
    # an arbitrary j may have neighbors outside F_p^2, so only a bound holds
    K = make_field_context(p).extension()
    j = K(a % p, b % p)
    found = neighbors(j, ell, K)
    assert sum(m for _, m in found) <= ell + 1
    assert all(phi_in_y(ell, j, K)(r).is_zero() for r, _ in found)


def test_supersingular_neighbor_multiplicities_sum_to_ell_plus_one():
    for p in primes_between(5, 300):
        K = make_field_context(p).extension()
        for ell in (2, 3):
            if ell == p:
                continue
            for j in supersingular_j_list(p):
                assert sum(m for _, m in neighbors(K.lift(j), ell, K)) == ell + 1


def test_neighbor_symmetry_over_supersingular_graph():
    for p in (29, 71, 101, 131):
        K = make_field_context(p).extension()
        for ell in (2, 3):
            for j in supersingular_j_list(p):
                J = K.lift(j)
                for r, m in neighbors(J, ell, K):
                    back = dict(neighbors(r, ell, K))
                    assert J in back
                    if int(j) not in (0, 1728 % p) and r not in (K(0), K(1728 % p)):
                        assert back[J] == m


def test_known_root_is_checked():
    K = make_field_context(29).extension()
    with pytest.raises(ValueError):
        neighbors(K(0), 2, K, known_root=K(5))
    assert neighbors(K(0), 2, K, known_root=K(2)) == [(K(2), 3)]
