"""Exhaustive classification of degree-(p-1)/2 polynomials with range sum p.

Two independent enumerators are provided:

* :func:`enumerate_naive` walks every coefficient vector of the requested
  degree.  It knows nothing about roots and serves as the oracle.
* :func:`enumerate_rootsets` only visits ``c * prod_{r in R} (x - r)`` with
  ``|R| = (p-1)/2``, ``0 in R`` and ``1 <= c <= (p-1)/2``; every orbit has
  such a member because these polynomials split into distinct linear factors
  and translations / non-square dilations move any root to 0 and any leading
  coefficient into the lower half.

Hits are grouped into orbits under ``x -> a x + b`` and each orbit
representative is run through the structural checks (distinct roots,
shifted Legendre profile, leading coefficient, support bound).
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .field import PrimeCtx, prime_ctx
from .poly import (
    Polynomial,
    coefficients_from_values,
    make_family,
    power_sum_identity_check,
    power_table,
    range_profile,
    range_sum,
)

DEFAULT_BUDGET = 2 * 10**9

FAMILY_I = "i"
FAMILY_II = "ii"
OTHER = "OTHER"


class BudgetExceeded(RuntimeError):
    """The enumeration would scan more candidates than allowed."""


class PreconditionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# orbits under x -> a x + b


def _all_images(P: Polynomial) -> np.ndarray:
    """Ascending coefficient rows of P(a x + b) for every a != 0 and b."""
    p = P.p
    x = np.arange(p, dtype=np.int64)
    a = np.repeat(np.arange(1, p, dtype=np.int64), p)
    b = np.tile(np.arange(p, dtype=np.int64), p - 1)
    idx = (a[:, None] * x[None, :] + b[:, None]) % p
    return coefficients_from_values(p, P.values[idx])


def _key_order(coeffs: np.ndarray, degree: int) -> np.ndarray:
    # lexsort: last key is primary -> (LC, then a_{d-1}, ..., a_0)
    return np.lexsort([coeffs[:, k] for k in range(degree + 1)])


def canonicalize_orbit(P: Polynomial) -> Polynomial:
    """Orbit representative minimizing (lifted LC, coefficients high to low)."""
    if P.is_constant():
        raise PreconditionError("constant polynomials have no affine orbit structure")
    images = _all_images(P)
    best = images[_key_order(images, P.degree)[0]]
    return Polynomial(P.ctx, tuple(best))


def orbit(P: Polynomial) -> frozenset[tuple[int, ...]]:
    """All coefficient tuples (trimmed) in the affine orbit of P."""
    d = P.degree
    return frozenset(tuple(int(a) for a in row[:d + 1]) for row in _all_images(P))


def canonical_key(P: Polynomial) -> tuple[int, ...]:
    Q = canonicalize_orbit(P)
    return (Q.lc,) + Q.coeffs[::-1][1:]


@lru_cache(maxsize=64)
def _family_sets(p: int) -> dict[str, frozenset]:
    ctx = prime_ctx(p)
    out = {}
    for variant in (FAMILY_I, FAMILY_II):
        out[variant] = frozenset(
            make_family(ctx, variant, s, a).coeffs for s in (1, -1) for a in range(p)
        )
    return out


def family_canonical_forms(ctx: PrimeCtx) -> dict[str, Polynomial]:
    """Canonical orbit representatives of x^h + 1 and (p+1)/2 (x^h + 1)."""
    return {v: canonicalize_orbit(make_family(ctx, v, 1, 0)) for v in (FAMILY_I, FAMILY_II)}


def _require_target(P: Polynomial):
    if P.degree != P.ctx.half or range_sum(P) != P.p:
        raise PreconditionError(
            f"need degree {P.ctx.half} and range sum {P.p}; got degree {P.degree}, "
            f"range sum {range_sum(P)}"
        )


def family_membership(P: Polynomial) -> str:
    """"i", "ii" or "OTHER".

    The orbit of x^h + 1 is exactly {+-(x-a)^h + 1}, and likewise for the
    second family, so membership is a lookup in the 4p family polynomials.
    At p = 3 both families are the same orbit and "i" is reported.
    """
    _require_target(P)
    fam = _family_sets(P.p)
    for variant in (FAMILY_I, FAMILY_II):
        if P.coeffs in fam[variant]:
            return variant
    return OTHER


@dataclass(frozen=True)
class SupportDegree:
    holds: bool
    degree: int
    support: int


def support_degree_check(P: Polynomial) -> SupportDegree:
    """deg P >= |supp P| - 1 for non-constant P with range sum p."""
    if P.is_constant():
        raise PreconditionError("support bound needs a non-constant polynomial")
    if range_sum(P) != P.p:
        raise PreconditionError(f"range sum is {range_sum(P)}, not {P.p}")
    supp = int(np.count_nonzero(P.values))
    return SupportDegree(P.degree >= supp - 1, P.degree, supp)


# ---------------------------------------------------------------------------
# shifted Legendre profile


@dataclass(frozen=True)
class ResidueProfile:
    c: int
    s_roots: tuple[int, ...]
    s_excess: tuple[int, ...]
    r: tuple[int, ...]
    m_c: int
    m_c_minus_p: int

    @property
    def all_in_range(self) -> bool:
        return self.m_c + self.m_c_minus_p == len(self.r)

    @property
    def counts_match(self) -> bool:
        p = len(self.r)
        return self.all_in_range and self.m_c_minus_p == self.c and self.m_c == p - self.c


def legendre_shift_sums(ctx: PrimeCtx, points) -> np.ndarray:
    """T[g] = sum over the multiset ``points`` of ((pt - g) / p), for every g."""
    p = ctx.p
    counts = np.bincount(np.asarray(points, dtype=np.int64) % p, minlength=p)
    x = np.flatnonzero(counts)
    g = np.arange(p)
    chi = ctx.chi.astype(np.int64)
    return (chi[(x[:, None] - g[None, :]) % p] * counts[x][:, None]).sum(axis=0)


def residue_profile(P: Polynomial) -> ResidueProfile:
    _require_target(P)
    ctx = P.ctx
    prof = range_profile(P)
    s_roots = legendre_shift_sums(ctx, prof.roots)
    s_excess = legendre_shift_sums(ctx, prof.excess)
    r = s_roots - s_excess
    c = P.lc
    return ResidueProfile(
        c=c,
        s_roots=tuple(int(v) for v in s_roots),
        s_excess=tuple(int(v) for v in s_excess),
        r=tuple(int(v) for v in r),
        m_c=int(np.count_nonzero(r == c)),
        m_c_minus_p=int(np.count_nonzero(r == c - P.p)),
    )


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class OrbitReport:
    representative: Polynomial
    orbit_size: int
    family: str
    checks: dict = field(default_factory=dict)

    @property
    def lc(self) -> int:
        return self.representative.lc

    @property
    def roots(self) -> tuple[int, ...]:
        return range_profile(self.representative).roots

    def to_dict(self) -> dict:
        return {
            "lc": self.lc,
            "degree": self.representative.degree,
            "roots": list(self.roots),
            "coeffs": list(self.representative.coeffs),
            "family": self.family,
            "orbit_size": self.orbit_size,
            "checks": dict(self.checks),
        }


@dataclass
class ClassificationResult:
    p: int
    strategy: str
    target: int
    degrees: tuple[int, ...]
    orbits: list[OrbitReport]
    candidates_scanned: int
    ms: float
    lower_degree_hits: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def other_count(self) -> int:
        return sum(1 for o in self.orbits if o.family == OTHER)

    @property
    def orbit_keys(self) -> frozenset:
        return frozenset((o.representative.coeffs) for o in self.orbits)

    def members(self) -> frozenset:
        """Union of all orbits, i.e. every polynomial with the property."""
        out = set()
        for o in self.orbits:
            out |= orbit(o.representative)
        return frozenset(out)

    def checks_pass(self) -> bool:
        return all(v for o in self.orbits for k, v in o.checks.items() if k != "lc_class")

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "p": self.p,
            "strategy": self.strategy,
            "range_sum": self.target,
            "degrees": list(self.degrees),
            "orbits": [o.to_dict() for o in self.orbits],
            "other_count": self.other_count,
            "lower_degree_hits": [list(c) for c in self.lower_degree_hits],
            "candidates_scanned": self.candidates_scanned,
            "ms": round(self.ms, 3) if timing else 0,
        }


def naive_candidate_count(p: int, degree: int) -> int:
    return (p - 1) * p**degree


def _naive_hits(p: int, degree: int, target: int) -> list[tuple[int, ...]]:
    """Every coefficient tuple of exact ``degree`` whose lifted value sum is ``target``."""
    W = power_table(p)[:degree + 1]
    m = 0
    while m < degree and p ** (m + 1) <= 60000:
        m += 1
    # value table of all low parts a_0 + ... + a_{m-1} x^{m-1}; a_0 is the most significant digit
    low = np.zeros((1, p), dtype=np.int64)
    for k in range(m):
        low = ((low[:, None, :] + np.arange(p)[None, :, None] * W[k][None, None, :]) % p).reshape(-1, p)
    low16 = low.astype(np.int16)
    low_sum = low.sum(axis=1)
    hits = []
    for high in itertools.product(*([range(p)] * (degree - m) + [range(1, p)])):
        u = np.zeros(p, dtype=np.int64)
        for k, a in enumerate(high, start=m):
            if a:
                u += a * W[k]
        u %= p
        # (low + u) mod p summed: subtract p wherever low + u wraps
        wraps = np.count_nonzero(low16 >= (p - u).astype(np.int16), axis=1)
        total = low_sum + int(u.sum()) - p * wraps
        for r in np.flatnonzero(total == target):
            digits = []
            r = int(r)
            for _ in range(m):
                digits.append(r % p)
                r //= p
            hits.append(tuple(digits[::-1]) + tuple(high))
    return hits


def _rootset_tables(p: int):
    h = (p - 1) // 2
    g = next(a for a in range(2, p) if all(pow(a, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)))
    dlog = np.zeros(p, dtype=np.int32)
    e = 1
    for k in range(p - 1):
        dlog[e] = k
        e = e * g % p
    sentinel = h * (p - 1)
    x = np.arange(p)
    logT = np.empty((p, p), dtype=np.int32)
    for r in range(p):
        d = (x - r) % p
        logT[r] = np.where(d == 0, sentinel, dlog[d])
    size = 2 * sentinel + p
    s = np.arange(size)
    expext = np.where(s < sentinel, _pow_table(g, p)[s % (p - 1)], 0).astype(np.int32)
    return h, dlog, logT, expext


def _pow_table(g: int, p: int) -> np.ndarray:
    out = np.empty(p - 1, dtype=np.int64)
    e = 1
    for k in range(p - 1):
        out[k] = e
        e = e * g % p
    return out


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def _rootset_chunk(p: int, firsts: tuple[int, ...], batch: int = 20000) -> list[tuple[int, tuple[int, ...]]]:
    """Hits (c, R) for root sets R = {0, f, ...} whose smallest nonzero root f is in ``firsts``."""
    h, dlog, logT, expext = _rootset_tables(p)
    logc = [(c, int(dlog[c])) for c in range(1, h + 1)]
    hits = []

    def scan(prefix, rows):
        # discrete logs add; one lookup maps back to values (0 at roots)
        L = np.broadcast_to(logT[0], (rows.shape[0], p)).copy()
        for f in prefix:
            L += logT[f]
        for j in range(rows.shape[1]):
            L += logT[rows[:, j]]
        for c, lc in logc:
            sums = expext[L + lc].sum(axis=1, dtype=np.int64)
            for i in np.flatnonzero(sums == p):
                hits.append((c, (0,) + prefix + tuple(int(v) for v in rows[i])))

    if h == 1:
        scan((), np.zeros((1, 0), dtype=np.int64))
        return hits
    width = h - 2
    for f in firsts:
        if width == 0:
            scan((f,), np.zeros((1, 0), dtype=np.int64))
            continue
        it = itertools.combinations(range(f + 1, p), width)
        while True:
            flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, batch)), dtype=np.int64)
            if flat.size == 0:
                break
            scan((f,), flat.reshape(-1, width))
    return hits


def rootset_candidate_count(p: int) -> int:
    h = (p - 1) // 2
    return math.comb(p - 1, h - 1) * h


def _partition(p: int, workers: int) -> list[tuple[int, ...]]:
    h = (p - 1) // 2
    if h == 1:
        return [()]
    firsts = list(range(1, p - h + 2))
    # deal the first-root classes round-robin by decreasing size
    parts = [[] for _ in range(max(1, workers))]
    for i, f in enumerate(firsts):
        parts[i % len(parts)].append(f)
    return [tuple(pt) for pt in parts if pt]


def _group(ctx: PrimeCtx, polys, check: bool) -> list[OrbitReport]:
    seen: dict[tuple, OrbitReport] = {}
    for P in polys:
        if any(P.coeffs in orbit(o.representative) for o in seen.values()):
            continue
        rep = canonicalize_orbit(P)
        members = orbit(rep)
        fam = family_membership(rep) if check else "n/a"
        rep_report = OrbitReport(rep, len(members), fam)
        if check:
            rep_report.checks = verify_orbit(rep)
        seen[rep.coeffs] = rep_report
    return [seen[k] for k in sorted(seen, key=lambda c: (len(c), c[::-1]))]


def verify_orbit(P: Polynomial) -> dict:
    """Structural checks on a degree-(p-1)/2, range-sum-p polynomial."""
    ctx = P.ctx
    p, h = ctx.p, ctx.half
    prof = range_profile(P)
    split = Polynomial(ctx, (P.lc,))
    for r in prof.roots:
        split = _mul_linear(split, r)
    rp = residue_profile(P)
    lc_norm = min(P.lc, p - P.lc)
    return {
        "splits": len(prof.roots) == h and split.coeffs == P.coeffs,
        "power_sums": power_sum_identity_check(P, h).holds,
        "residue_profile": rp.counts_match,
        "lc_class": lc_norm in (1, h),
        "support_degree": support_degree_check(P).holds,
        "disjoint": not set(prof.roots) & set(prof.excess),
    }


def _mul_linear(P: Polynomial, r: int) -> Polynomial:
    c = (0,) + P.coeffs
    out = [c[k] - r * (P.coeffs[k] if k < len(P.coeffs) else 0) for k in range(len(c))]
    return Polynomial(P.ctx, tuple(out))


def enumerate_naive(
    ctx: PrimeCtx,
    *,
    scan_lower_degrees: bool = False,
    range_sum_multiple: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> ClassificationResult:
    """Brute-force oracle over all coefficient vectors.

    With ``range_sum_multiple = k > 1`` every degree 1..(p-1)/2 is scanned for
    range sum k*p.  ``scan_lower_degrees`` additionally scans degrees below
    (p-1)/2 for range sum p (expected: nothing).
    """
    p, h = ctx.p, ctx.half
    target = range_sum_multiple * p
    degrees = tuple(range(1, h + 1)) if range_sum_multiple != 1 else (h,)
    lower = tuple(range(1, h)) if scan_lower_degrees and range_sum_multiple == 1 else ()
    total = sum(naive_candidate_count(p, d) for d in degrees + lower)
    if total > budget:
        raise BudgetExceeded(f"naive scan at p={p} needs {total} candidates (budget {budget})")
    t0 = time.perf_counter()
    found = []
    for d in degrees:
        found += [Polynomial(ctx, c) for c in _naive_hits(p, d, target)]
    lower_hits = [c for d in lower for c in _naive_hits(p, d, p)]
    orbits = _group(ctx, found, check=range_sum_multiple == 1)
    return ClassificationResult(
        p, "naive", target, degrees, orbits, total, (time.perf_counter() - t0) * 1e3, lower_hits
    )


def enumerate_rootsets(
    ctx: PrimeCtx,
    *,
    workers: int = 1,
    budget: int = DEFAULT_BUDGET,
    scan_lower_degrees: bool = False,
) -> ClassificationResult:
    """Root-set enumeration with translation and sign normalization."""
    p = ctx.p
    total = rootset_candidate_count(p)
    lower = tuple(range(1, ctx.half)) if scan_lower_degrees else ()
    total_all = total + sum(naive_candidate_count(p, d) for d in lower)
    if total_all > budget:
        raise BudgetExceeded(f"root-set scan at p={p} needs {total_all} candidates (budget {budget})")
    t0 = time.perf_counter()
    parts = _partition(p, workers)
    if workers > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_rootset_chunk, [p] * len(parts), parts))
    else:
        chunks = [_rootset_chunk(p, part) for part in parts]
    hits = sorted(set(itertools.chain.from_iterable(chunks)))
    polys = [_from_roots(ctx, c, roots) for c, roots in hits]
    orbits = _group(ctx, polys, check=True)
    lower_hits = [c for d in lower for c in _naive_hits(p, d, p)]
    return ClassificationResult(
        p, "rootsets", p, (ctx.half,), orbits, total_all, (time.perf_counter() - t0) * 1e3, lower_hits
    )


def _from_roots(ctx: PrimeCtx, c: int, roots) -> Polynomial:
    P = Polynomial(ctx, (c,))
    for r in roots:
        P = _mul_linear(P, r)
    return P


def normalized_candidate(ctx: PrimeCtx, c: int, roots) -> Polynomial:
    """c * prod (x - r) with the enumerator's normalization enforced."""
    roots = sorted(set(int(r) % ctx.p for r in roots))
    if not 1 <= c <= ctx.half:
        raise PreconditionError(f"leading coefficient {c} outside [1, {ctx.half}]")
    if len(roots) != ctx.half or roots[0] != 0:
        raise PreconditionError("root set must have (p-1)/2 elements and contain 0")
    return _from_roots(ctx, c, roots)


def classify(ctx: PrimeCtx, strategy: str = "rootsets", **kw) -> ClassificationResult:
    if strategy == "naive":
        return enumerate_naive(ctx, **kw)
    if strategy == "rootsets":
        if kw.pop("range_sum_multiple", 1) != 1:
            raise PreconditionError("range-sum multiples need the naive strategy")
        return enumerate_rootsets(ctx, **kw)
    raise ValueError(f"unknown strategy {strategy!r}")
