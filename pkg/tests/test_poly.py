import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import primes
from redeilab.field import FieldError, prime_ctx
from redeilab.poly import (NEG_INF, Polynomial, affine_substitute, evaluate, format_polynomial,
                           interpolate, make_family, min_degree_witness, parse_polynomial,
                           power_sum_identity_check, range_profile, range_sum)

F7 = prime_ctx(7)


def poly(p, *coeffs):
    return Polynomial(prime_ctx(p), coeffs)


@st.composite
def polynomials(draw, lo=3, hi=101):
    p = draw(primes(lo, hi))
    d = draw(st.integers(0, p - 1))
    coeffs = draw(st.lists(st.integers(0, p - 1), min_size=d + 1, max_size=d + 1))
    return Polynomial(prime_ctx(p), tuple(coeffs))


def test_evaluate():
    P = poly(7, 1, 0, 0, 1)
    assert evaluate(P, F7(3)).value == 0
    assert evaluate(poly(7, 1), F7(5)).value == 1
    assert evaluate(poly(7, 4, 0, 0, 4), F7(0)).value == 4
    with pytest.raises(FieldError):
        evaluate(P, prime_ctx(5)(1))


def test_interpolate_examples():
    assert interpolate(F7, [1] * 7).coeffs == (1,)
    assert interpolate(prime_ctx(5), [1, 0, 0, 0, 0]).coeffs == (1, 0, 0, 0, 4)
    P = poly(7, 1, 0, 0, 1)
    assert interpolate(F7, P.values) == P
    with pytest.raises(ValueError):
        interpolate(F7, [1] * 6)


def test_min_degree_witness():
    assert min_degree_witness(F7, poly(7, 1, 0, 0, 1).values) == (3, 3)
    assert min_degree_witness(F7, [0] * 7) == (NEG_INF, None)
    assert min_degree_witness(F7, [2] * 7) == (0, None)
    # a permutation polynomial of degree p-2 (x^5 at p=7 permutes F_7)
    perm = poly(7, 0, 0, 0, 0, 0, 1)
    assert sorted(perm.values) == list(range(7))
    assert min_degree_witness(F7, perm.values) == (5, 1)


def test_range_profile_examples():
    prof = range_profile(poly(7, 1, 0, 0, 1))
    assert prof.values == (1, 2, 2, 0, 2, 0, 0)
    assert prof.range_sum == 7 and prof.roots == (3, 5, 6) and prof.excess == (1, 2, 4)
    prof = range_profile(poly(7, 4, 0, 0, 4))
    assert prof.values == (4, 1, 1, 0, 1, 0, 0) and prof.range_sum == 7
    prof = range_profile(poly(7, 1))
    assert prof.range_sum == 7 and prof.roots == () and prof.excess == ()


def test_affine_examples():
    P = poly(7, 1, 0, 0, 1)
    assert affine_substitute(P, 1, 0) == P
    assert affine_substitute(P, 3, 0).coeffs == (1, 0, 0, 6)
    # (x+1)^3 + 1 = x^3 + 3x^2 + 3x + 2
    assert affine_substitute(P, 1, 1).coeffs == (2, 3, 3, 1)
    with pytest.raises(ValueError):
        affine_substitute(P, 0, 1)


def test_power_sum_examples():
    assert power_sum_identity_check(poly(7, 1, 0, 0, 1), 3).holds
    assert power_sum_identity_check(poly(5, 2), 1).holds
    with pytest.raises(ValueError):
        power_sum_identity_check(poly(7), 1)
    with pytest.raises(ValueError):
        power_sum_identity_check(poly(7, 1, 1), 6)


def test_printed_power_sum_sign_is_wrong():
    # sum x^k P(x) = sum x^k + sum roots^k - sum excess^k fails for x^3+1 at k=3
    P = poly(7, 1, 0, 0, 1)
    prof = range_profile(P)
    k = 3
    lhs = sum(x ** k * v for x, v in enumerate(prof.values)) % 7
    printed = (sum(x ** k for x in range(7)) + sum(a ** k for a in prof.roots)
               - sum(b ** k for b in prof.excess)) % 7
    corrected = (sum(x ** k for x in range(7)) - sum(a ** k for a in prof.roots)
                 + sum(b ** k for b in prof.excess)) % 7
    assert lhs == corrected and lhs != printed


def test_make_family_examples():
    assert make_family(F7, "i", 1, 0).coeffs == (1, 0, 0, 1)
    assert make_family(F7, "ii", 1, 0).coeffs == (4, 0, 0, 4)
    P = make_family(prime_ctx(5), "i", -1, 0)
    assert P.coeffs == (1, 0, 4) and tuple(P.values) == (1, 0, 2, 2, 0) and range_sum(P) == 5


def test_text_format():
    P = parse_polynomial("p=7; coeffs=[1,0,0,1]")
    assert P == poly(7, 1, 0, 0, 1)
    assert format_polynomial(P) == "p=7; coeffs=[1,0,0,1]"
    assert parse_polynomial("p=7; coeffs=[]").is_zero()
    assert parse_polynomial(" p = 7 ; coeffs = [8, -1] ").coeffs == (1, 6)
    for bad in ("p=7 coeffs=[1]", "p=7; coeffs=[1,x]", "coeffs=[1]"):
        with pytest.raises(ValueError):
            parse_polynomial(bad)
    with pytest.raises(FieldError):
        parse_polynomial("p=9; coeffs=[1]")
    with pytest.raises(FieldError):
        parse_polynomial("p=3; coeffs=[1,1,1,1]")


@given(polynomials())
def test_round_trip(P):
    assert interpolate(P.ctx, P.values) == P


@given(polynomials())
def test_moment_identity(P):
    p = P.p
    a = P.padded()
    x = np.arange(p, dtype=object)
    vals = [int(v) for v in P.values]
    for t in range(p - 1):
        m = sum(pow(int(xx), t, p) * v for xx, v in zip(x, vals)) % p
        assert m == (-a[p - 1 - t]) % p


@given(polynomials())
def test_range_sum_congruence(P):
    p = P.p
    s = range_sum(P)
    assert s % p == (-P.padded()[p - 1]) % p
    assert (s % p == 0) == (P.degree <= p - 2)


@given(polynomials(hi=31), st.data())
def test_affine_group_action(P, data):
    p = P.p
    a1, a2 = data.draw(st.integers(1, p - 1)), data.draw(st.integers(1, p - 1))
    b1, b2 = data.draw(st.integers(0, p - 1)), data.draw(st.integers(0, p - 1))
    # (P o g1) o g2 = P o (g1 o g2),  g1(g2(x)) = a1(a2 x + b2) + b1
    lhs = affine_substitute(affine_substitute(P, a1, b1), a2, b2)
    rhs = affine_substitute(P, a1 * a2, a1 * b2 + b1)
    assert lhs == rhs
    if not P.is_zero():
        assert lhs.degree == P.degree
        assert affine_substitute(P, a1, 0).lc == P.lc * pow(a1, int(P.degree), p) % p


@given(polynomials(hi=53))
def test_power_sum_identity_always_holds(P):
    if not P.is_zero():
        assert power_sum_identity_check(P, P.p - 2).holds


@given(primes(), st.sampled_from(["i", "ii"]), st.sampled_from([1, -1]), st.integers(0, 200))
def test_family_structure(p, variant, sign, a):
    P = make_family(prime_ctx(p), variant, sign, a)
    prof = range_profile(P)
    assert P.degree == (p - 1) // 2 and prof.range_sum == p
    assert len(prof.roots) == (p - 1) // 2
    assert not set(prof.roots) & set(prof.excess)
    assert len(prof.excess) == (p - 1) // 2


def test_moments_limit():
    from redeilab.poly import moments

    with pytest.raises(FieldError):
        moments(131101, np.zeros(3))
