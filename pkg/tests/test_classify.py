import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import primes
from redeilab.classify import (FAMILY_I, FAMILY_II, OTHER, BudgetExceeded, PreconditionError,
                               canonical_key, canonicalize_orbit, classify, enumerate_naive,
                               enumerate_rootsets, family_canonical_forms, family_membership,
                               normalized_candidate, orbit, residue_profile, support_degree_check,
                               verify_orbit)
from redeilab.field import prime_ctx
from redeilab.poly import Polynomial, affine_substitute, make_family

F7 = prime_ctx(7)


def poly(p, *coeffs):
    return Polynomial(prime_ctx(p), coeffs)


def test_naive_p5():
    res = enumerate_naive(prime_ctx(5))
    fams = sorted(o.family for o in res.orbits)
    assert fams == [FAMILY_I, FAMILY_II] and res.other_count == 0
    keys = {canonicalize_orbit(poly(5, 1, 0, 1)).coeffs, canonicalize_orbit(poly(5, 3, 0, 3)).coeffs}
    assert res.orbit_keys == keys


def test_naive_p7_contains_both_families():
    res = enumerate_naive(F7)
    keys = res.orbit_keys
    assert canonicalize_orbit(poly(7, 1, 0, 0, 1)).coeffs in keys
    assert canonicalize_orbit(poly(7, 4, 0, 0, 4)).coeffs in keys
    assert res.other_count == 0


def test_p3_degenerate():
    F3 = prime_ctx(3)
    res = enumerate_naive(F3)
    # every linear polynomial permutes F_3, so all six have range sum 3: a single orbit
    assert len(res.orbits) == 1 and res.orbits[0].orbit_size == 6
    assert make_family(F3, "i", 1, 0).coeffs == (1, 1)
    assert family_membership(poly(3, 0, 1)) == FAMILY_I


@pytest.mark.parametrize("p", [5, 7, 11])
def test_strategies_agree(p):
    a = enumerate_naive(prime_ctx(p))
    b = enumerate_rootsets(prime_ctx(p))
    assert a.orbit_keys == b.orbit_keys
    assert a.members() == b.members()


def test_workers_do_not_change_result():
    F13 = prime_ctx(13)
    one = enumerate_rootsets(F13, workers=1).to_dict(timing=False)
    two = enumerate_rootsets(F13, workers=2).to_dict(timing=False)
    assert one == two


@pytest.mark.parametrize("p", [11, 13, 17, 19])
def test_families_present(p):
    res = enumerate_rootsets(prime_ctx(p))
    assert {o.family for o in res.orbits} >= {FAMILY_I, FAMILY_II}
    assert res.checks_pass()


def test_normalization_precondition():
    with pytest.raises(PreconditionError):
        normalized_candidate(F7, 4, (0, 1, 3))
    with pytest.raises(PreconditionError):
        normalized_candidate(F7, 1, (1, 2, 3))
    P = normalized_candidate(F7, 1, (0, 3, 5))
    assert P.lc == 1 and P.degree == 3


def test_residue_profile_examples():
    rp = residue_profile(poly(7, 1, 0, 0, 1))
    assert rp.s_roots[0] == -3 and rp.s_excess[0] == 3 and rp.r[0] == -6
    assert rp.c == 1 and rp.m_c_minus_p == 1 and rp.m_c == 6
    rp = residue_profile(poly(7, 4, 0, 0, 4))
    assert rp.c == 4 and rp.m_c_minus_p == 4 and rp.m_c == 3
    assert rp.all_in_range and rp.counts_match
    with pytest.raises(PreconditionError):
        residue_profile(poly(7, 1, 1))


def test_canonicalize_examples():
    P = poly(7, 1, 0, 0, 1)
    assert canonicalize_orbit(P) == canonicalize_orbit(affine_substitute(P, 1, 2))
    assert canonicalize_orbit(poly(7, 1, 0, 0, 6)) == canonicalize_orbit(P)
    with pytest.raises(PreconditionError):
        canonicalize_orbit(poly(7, 3))


def test_canonicalize_idempotent_on_random(rng):
    F13 = prime_ctx(13)
    for _ in range(100):
        d = int(rng.integers(1, 13))
        coeffs = list(rng.integers(0, 13, size=d + 1))
        coeffs[-1] = int(rng.integers(1, 13))
        P = Polynomial(F13, tuple(int(c) for c in coeffs))
        C = canonicalize_orbit(P)
        assert canonicalize_orbit(C) == C
        assert C.coeffs in orbit(P)
        assert canonical_key(C) == (C.lc,) + C.coeffs[::-1][1:]


def test_family_membership_examples():
    assert family_membership(poly(7, 1, 0, 0, 1)) == FAMILY_I
    assert family_membership(poly(7, 4, 0, 0, 4)) == FAMILY_II
    assert family_membership(make_family(F7, "i", 1, 2)) == FAMILY_I
    with pytest.raises(PreconditionError):
        family_membership(poly(7, 1, 1))


def test_family_lookup_equals_canonical_comparison():
    for p in (5, 7, 11, 13):
        ctx = prime_ctx(p)
        forms = family_canonical_forms(ctx)
        for v in ("i", "ii"):
            for s in (1, -1):
                for a in range(p):
                    P = make_family(ctx, v, s, a)
                    assert canonicalize_orbit(P) == forms[v]
                    assert family_membership(P) == v


@given(primes(5, 31), st.sampled_from(["i", "ii"]), st.sampled_from([1, -1]), st.data())
def test_membership_affine_invariant(p, v, s, data):
    ctx = prime_ctx(p)
    P = make_family(ctx, v, s, data.draw(st.integers(0, p - 1)))
    a, b = data.draw(st.integers(1, p - 1)), data.draw(st.integers(0, p - 1))
    assert family_membership(affine_substitute(P, a, b)) == family_membership(P) == v


def test_support_degree_examples():
    r = support_degree_check(poly(7, 1, 0, 0, 1))
    assert r.holds and r.support == 4 and r.degree == 3
    r = support_degree_check(poly(7, 4, 0, 0, 4))
    assert r.holds and r.support == 4
    with pytest.raises(PreconditionError):
        support_degree_check(poly(7, 1))


def test_verify_family_members():
    for p in (7, 11, 13):
        for v in ("i", "ii"):
            checks = verify_orbit(make_family(prime_ctx(p), v, 1, 0))
            assert all(checks.values()), checks


@pytest.mark.parametrize("p", [5, 7, 11])
def test_no_low_degree_solutions(p):
    res = enumerate_naive(prime_ctx(p), scan_lower_degrees=True)
    assert res.lower_degree_hits == []


def test_range_sum_multiple_examples():
    res = classify(F7, "naive", range_sum_multiple=2)
    members = res.members()
    # (x-1)(x-2)+1 = x^2 - 3x + 3 and (x-1)(x-2)+2
    assert (3, 4, 1) in members and (4, 4, 1) in members
    assert all(sum(Polynomial(F7, c).values) == 14 for c in members)
    with pytest.raises(PreconditionError):
        classify(F7, "rootsets", range_sum_multiple=2)


def test_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_naive(prime_ctx(13), budget=1000)
    with pytest.raises(BudgetExceeded):
        enumerate_rootsets(prime_ctx(23), budget=1000)


def test_result_json_shape():
    d = enumerate_rootsets(F7).to_dict(timing=False)
    assert d["ms"] == 0 and d["other_count"] == 0 and d["p"] == 7
    o = d["orbits"][0]
    assert {"lc", "roots", "coeffs", "family", "checks"} <= set(o)
    assert o["checks"]["splits"] and o["checks"]["residue_profile"]
