"""Acceptance checks, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines appear even
without ``-s``).  Oracles here are written independently of the library
wherever the library would otherwise be checking itself.
"""

import json
import math
import time
from collections import Counter
from decimal import Decimal, getcontext
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from redeilab import charsum as cs
from redeilab import fourier as fr
from redeilab import geometry as geo
from redeilab.classify import classify
from redeilab.cli import main
from redeilab.field import is_prime, prime_ctx
from redeilab.poly import make_family

REPORTS = Path(__file__).resolve().parent.parent / "reports"
SEED = 20261016


def odd_primes(lo, hi):
    return [p for p in range(max(lo, 3), hi + 1) if is_prime(p)]


@pytest.fixture
def verdict(request, capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, detail
    return emit


def euler(a, p):
    """Legendre symbol by Euler's criterion, independent of the field tables."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def less_than_sqrt(u, v, p):
    """u < v sqrt(p) for v > 0, by comparing squares."""
    return u < 0 or u * u < v * v * p


# ---------------------------------------------------------------------------


def test_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    bad = []
    for p in (5, 7, 11, 13):
        ctx = prime_ctx(p)
        naive = classify(ctx, "naive")
        roots = classify(ctx, "rootsets")
        if naive.members() != roots.members() or naive.orbit_keys != roots.orbit_keys:
            bad.append(p)
    dt = time.perf_counter() - t0
    verdict("naive vs root-set enumeration", not bad and dt < 300,
            f"p in (5, 7, 11, 13), mismatches {bad}, {dt:.1f} s (limit 300 s)")


def test_family_polynomials(verdict):
    checked, bad = 0, []
    for p in odd_primes(3, 101):
        ctx = prime_ctx(p)
        h = (p - 1) // 2
        for variant in ("i", "ii"):
            scale = 1 if variant == "i" else (p + 1) // 2
            for sign in (1, -1):
                for a in range(p):
                    P = make_family(ctx, variant, sign, a)
                    direct = [scale * (sign * pow(x - a, h, p) + 1) % p for x in range(p)]
                    # Horner on the library coefficients must reproduce the definition
                    horner = []
                    for x in range(p):
                        acc = 0
                        for c in reversed(P.coeffs):
                            acc = (acc * x + c) % p
                        horner.append(acc)
                    ok = (len(P.coeffs) - 1 == h and P.coeffs[-1] % p != 0
                          and horner == direct and sum(direct) == p)
                    checked += 1
                    if not ok:
                        bad.append((p, variant, sign, a))
    verdict("family polynomials", not bad,
            f"{checked} polynomials over odd p <= 101, degree (p-1)/2 and range sum p; failures {bad[:5]}")


def test_structural_identities(verdict):
    rows, bad, findings = [], [], []
    for p in (11, 13, 17, 19, 23):
        ctx = prime_ctx(p)
        h = (p - 1) // 2
        res = classify(ctx, "rootsets")
        families_only = res.other_count == 0
        for o in res.orbits:
            P = o.representative
            vals = [int(v) for v in P.values]
            roots = [x for x in range(p) if vals[x] == 0]
            excess = [x for x in range(p) for _ in range(max(vals[x] - 1, 0))]
            # residue profile from scratch: r_g = S_g(roots) - S_g(excess)
            c = P.lc
            r = [sum(euler(x - g, p) for x in roots) - sum(euler(x - g, p) for x in excess)
                 for g in range(p)]
            profile_ok = all(v in (c, c - p) for v in r) and r.count(c - p) == c
            lc_norm = min(c, p - c)
            if lc_norm not in (1, h):
                findings.append((p, P.coeffs))
            ok = (len(roots) == h and o.checks["splits"] and o.checks["power_sums"]
                  and profile_ok and o.checks["residue_profile"])
            if families_only:
                ok &= lc_norm in (1, h)
            if not ok:
                bad.append((p, P.coeffs))
        rows.append(f"p={p}: {len(res.orbits)} orbits")
    verdict("structural identities", not bad,
            f"{'; '.join(rows)}; failures {bad}; leading-coefficient findings {findings}")


@pytest.mark.xfail(strict=True, reason="the printed p = 3 (mod 4) entries sum to p - 3, "
                   "so brute-force counts (which sum to p - 2) cannot match them")
def test_paley_table_as_printed(verdict):
    t0 = time.perf_counter()
    bad = []
    for p in odd_primes(5, 499):
        ctx = prime_ctx(p)
        for cls in ("QR", "QNR"):
            if cs.paley_table(ctx, cls).counts != cs.paley_printed_form(p, cls):
                bad.append((p, cls))
    dt = time.perf_counter() - t0
    verdict("Paley counts vs printed closed forms", not bad and dt < 10,
            f"{len(bad)} mismatching (p, class) pairs, first {bad[:4]}, {dt:.1f} s")


def test_paley_table_corrected(verdict):
    t0 = time.perf_counter()
    bad = []
    for p in odd_primes(5, 499):
        ctx = prime_ctx(p)
        for cls in ("QR", "QNR"):
            # every representative, counted from Euler's criterion
            want = 1 if cls == "QR" else -1
            reps = [g for g in range(1, p) if euler(g, p) == want]
            chi = [euler(a, p) for a in range(p)]
            table = cs.paley_table(ctx, cls).counts
            for g in reps:
                n = Counter((chi[a], chi[(a + g) % p]) for a in range(p))
                if any(n[k] != table[k] for k in table):
                    bad.append((p, cls, g))
                    break
            if table != cs.paley_closed_form(p, cls):
                bad.append((p, cls))
    dt = time.perf_counter() - t0
    verdict("Paley counts vs corrected closed forms", not bad and dt < 10,
            f"all odd p in [5, 499], both classes, all representatives; failures {bad[:4]}, {dt:.1f} s")


def test_weil_sign_patterns(verdict):
    rng = np.random.default_rng(SEED)
    instances, bad, spot = 0, [], 0
    for p in odd_primes(101, 499):
        ctx = prime_ctx(p)
        for m in (1, 2, 3):
            if not cs.weil_premise(p, m):
                continue
            for k in range(100):
                shifts = [int(s) for s in rng.choice(p, size=m, replace=False)]
                rep = cs.weil_sign_patterns(ctx, shifts)
                if k == 0:
                    # spot-check the tallies from Euler's criterion
                    tally = Counter(tuple(euler(y + r, p) for r in shifts) for y in range(p))
                    spot += 1
                    if any(rep.counts[v] != tally[v] for v in rep.counts):
                        bad.append((p, shifts, "counts"))
                for v, n in rep.counts.items():
                    # |2^m n - p| < 2^(m-1) m (sqrt p + 1), as integers
                    u = 2 * abs((1 << m) * n - p) - (1 << m) * m
                    if not less_than_sqrt(u, (1 << m) * m, p) or not rep.holds[v]:
                        bad.append((p, shifts, v))
                instances += 1
    verdict("Weil sign-pattern bound", not bad,
            f"{instances} shift tuples over primes in [101, 499], m <= 3 within the premise "
            f"({spot} tallies recounted); failures {bad[:3]}")


def test_unique_large_shift(verdict):
    rng = np.random.default_rng(SEED)
    bad, peaks = [], {}
    for p in (101, 499):
        ctx = prime_ctx(p)
        chi = np.array([euler(a, p) for a in range(p)])
        top = 0
        for _ in range(1000):
            C = cs.random_half_subset(ctx, rng)
            T = np.abs(np.array([chi[(np.array(C) - g) % p].sum() for g in range(p)]))
            large = np.flatnonzero(4 * T >= p - 1)
            ok = len(large) <= 1
            peak = int(T.max())
            if 4 * peak > p - 1:
                rest = np.delete(T, int(np.argmax(T)))
                ok &= bool(np.all(2 * rest <= p + 1 - 2 * peak))
            rep = cs.unique_large_shift_check(ctx, C)
            if not ok or not rep.holds:
                bad.append((p, C))
            top = max(top, peak)
        peaks[p] = top
    verdict("unique large shift", not bad,
            f"1000 random half-subsets at p = 101 and 499, largest |T| seen {peaks}; failures {len(bad)}")


def test_min_intersection(verdict):
    rng = np.random.default_rng(SEED)
    bad, n = [], 0
    primes = [101, 211, 499, 1009]
    while n < 100:
        p = primes[n % len(primes)]
        ctx = prime_ctx(p)
        sets = [set(cs.random_half_subset(ctx, rng)) for _ in range(8)]
        B = set(cs.random_half_subset(ctx, rng))
        depth = Counter(x for s in sets for x in s)
        U = {r: sum(1 for d in depth.values() if d >= r) for r in range(1, 9)}
        if U[5] > len(B):
            with pytest.raises(cs.PremiseError):
                cs.min_intersection_bound(sets, B, 5)
            continue
        lhs = min(len(s & B) for s in sets)
        rhs = Fraction(sum(U[r] for r in range(5, 9)) + 4 * len(B), 8)
        got = cs.min_intersection_bound(sets, B, 5)
        if not (lhs <= rhs and got.lhs == lhs and got.rhs == rhs and got.holds):
            bad.append((p, n))
        n += 1

    structured = {}
    smallest = cs.structured_proviso_threshold()
    for p in (smallest, 26927, 7408853):
        r = cs.structured_instance(prime_ctx(p))
        structured[p] = (r.lhs, str(r.rhs))
        if not r.holds:
            bad.append(("structured", p))

    # the closing inequality 93 p + 93*1024 (sqrt p + 1) < 128 (p - 1) at p = 7408849
    getcontext().prec = 60
    p = 7408849
    lhs = 93 * p + 93 * 1024 * (Decimal(p).sqrt() + 1)
    boundary = lhs < 128 * (p - 1) and cs.eight_translate_proviso(p)
    first = cs.eight_translate_threshold()
    verdict("min-intersection bound and eight-translate arithmetic", not bad and boundary,
            f"100 random instances; structured (lhs, rhs) {structured} with the proviso first met "
            f"at p={smallest}; closing inequality at 7408849 {boundary} "
            f"(margin {128 * (p - 1) - lhs:.1f}, first integer {first}); failures {bad}")


def test_ls_end_to_end(verdict):
    t0 = time.perf_counter()
    bad = []
    for p in odd_primes(7, 101):
        ctx = prime_ctx(p)
        S = geo.ls_set(ctx)
        pts = sorted(S.points)
        # direction set from scratch
        D = set()
        for i, (x1, y1) in enumerate(pts):
            for x2, y2 in pts[i + 1:]:
                D.add(math.inf if x1 == x2 else (y2 - y1) * pow(x2 - x1, -1, p) % p)
        census = geo.ls_profile_census(ctx)
        deg = geo.direction_degree_check(S)
        ok = (len(S) == p and len(D) == (p + 3) // 2 == census.n_directions
              and geo.direction_set(S) == D and census.matches and deg.holds)
        if not ok:
            bad.append(p)
    dt = time.perf_counter() - t0
    verdict("residue cross end to end", not bad and dt < 30,
            f"odd p in [7, 101]: |D| = (p+3)/2, census ((p-1)/2, 2, (p-1)/2), degree bound; "
            f"failures {bad}, {dt:.1f} s (limit 30 s)")


def test_fourier_suite(verdict):
    bad, gaps = [], {}
    for p in odd_primes(7, 101):
        S = geo.ls_set(prime_ctx(p))
        rep = fr.spectrum(S)
        r = math.sqrt(p)
        if rep.plancherel_residual >= 1e-8 * p:
            bad.append((p, "plancherel"))
        for m, d in rep.directions.items():
            mags = d.p_mags
            if d.poly_class == "family-i" and np.abs(mags - r).max() > 1e-6:
                bad.append((p, m, "family-i"))
            if d.poly_class == "family-ii" and not (
                    mags.min() >= p / 2 - r / 2 - 1e-6 and mags.max() <= p / 2 + r / 2 + 1e-6):
                bad.append((p, m, "family-ii"))
        mc = fr.m_count_argument(S, rep)
        gaps[p] = mc.gap
        if p > 9 and mc.gap != 2:
            bad.append((p, "gap"))
    oracle = {}
    for p in (7, 11, 13):
        S = geo.ls_set(prime_ctx(p))
        oracle[p] = float(np.abs(fr.naive_transform(S) - fr.spectrum_matrix(fr.spectrum(S))).max())
        if oracle[p] >= 1e-9:
            bad.append((p, "oracle"))
    verdict("Fourier suite", not bad,
            f"odd p in [7, 101]; gaps {sorted(set(gaps.values()))} (p=7: {gaps[7]}); "
            f"naive transform max diff {max(oracle.values()):.1e}; failures {bad}")


def test_archived_reports(verdict, tmp_path, monkeypatch):
    names = [f"classify_p{p:02d}.json" for p in odd_primes(3, 29)]
    scans = [f"scan_{kind}_p{p}.json" for p in (101, 1009, 10007, 50021, 99991)
             for kind in ("qr", "interval", "random")]
    missing = [n for n in names + scans if not (REPORTS / n).is_file()]
    summary = []
    for n in names:
        if n in missing:
            continue
        d = json.loads((REPORTS / n).read_text())
        r = d["result"]
        summary.append(f"p={r['p']} {len(r['orbits'])} orbits, {r['other_count']} other")
        if d["mode"] != "report" or r["other_count"] != 0:
            missing.append(n)
    top = 0
    for n in scans:
        if n in missing:
            continue
        r = json.loads((REPORTS / n).read_text())["result"]
        top = max(top, r.get("max_count", r.get("count", 0)))
    # regenerating a cheap report the way the archive script does must reproduce its bytes
    monkeypatch.chdir(tmp_path)
    (tmp_path / "reports").mkdir()
    fresh = main(["classify", "--p", "11", "--strategy", "rootsets", "--mode", "report", "--no-timing",
                  "--out", "reports/classify_p11.json"])
    same = fresh == 0 and (tmp_path / "reports" / "classify_p11.json").read_bytes() == \
        (REPORTS / "classify_p11.json").read_bytes()
    verdict("archived report-mode scans", not missing and same,
            f"{len(names)} classifications ({'; '.join(summary[-2:])}), {len(scans)} concentration "
            f"scans with at most {top} shifts above p/7; missing or bad {missing}; reproducible {same}")
