"""Legendre sums over translates, Paley counts and Weil-type sign patterns.

All thresholds that involve sqrt(p) or fractions of p are decided with exact
integer arithmetic: an inequality ``u < v * sqrt(p)`` with integers u, v >= 0
is settled by the sign of u and a comparison of squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .field import PrimeCtx, is_prime, prime_ctx

P0 = 7408848
CONCENTRATION_CAP = 16
_FFT_FROM = 4096


class PremiseError(ValueError):
    """The hypothesis of the bound being checked does not hold."""


def lt_sqrt(u, v, p: int) -> bool:
    """Exact test of ``u < v * sqrt(p)`` for rationals u and v >= 0."""
    u, v = Fraction(u), Fraction(v)
    if v < 0:
        raise ValueError("v must be nonnegative")
    if u < 0:
        return True
    return u * u < v * v * p


# ---------------------------------------------------------------------------
# shift profiles


def shift_sums(ctx: PrimeCtx, subset) -> np.ndarray:
    """T[g] = sum_{c in subset} ((c - g) / p) for every g in F_p.

    Direct gather for small p; above that a circular cross-correlation by
    FFT, rounded and checked to be within 0.25 of an integer everywhere.
    """
    p = ctx.p
    C = np.unique(np.asarray(list(subset), dtype=np.int64) % p)
    chi = ctx.chi.astype(np.int64)
    if p < _FFT_FROM:
        g = np.arange(p)
        return chi[(C[:, None] - g[None, :]) % p].sum(axis=0)
    ind = np.zeros(p)
    ind[C] = 1.0
    # T[g] = sum_x ind[x] chi[x - g]
    raw = np.fft.irfft(np.fft.rfft(ind) * np.conj(np.fft.rfft(chi.astype(np.float64))), n=p)
    T = np.rint(raw)
    if np.max(np.abs(raw - T)) > 0.25:
        raise ArithmeticError("FFT shift sums lost integrality; use the direct path")
    return T.astype(np.int64)


@dataclass(frozen=True)
class ShiftProfile:
    p: int
    subset: tuple[int, ...]
    T: np.ndarray = field(repr=False)

    @property
    def max_abs(self) -> int:
        return int(np.abs(self.T).max())

    @property
    def argmax(self) -> int:
        return int(np.argmax(np.abs(self.T)))

    @property
    def total(self) -> int:
        return int(self.T.sum())

    def count_at_least(self, threshold) -> int:
        """Number of shifts with |T| >= threshold (exact rational compare)."""
        q = Fraction(threshold)
        return int(np.count_nonzero(np.abs(self.T) * q.denominator >= q.numerator))


def shift_profile(ctx: PrimeCtx, subset) -> ShiftProfile:
    C = tuple(sorted({int(c) % ctx.p for c in subset}))
    if not C:
        raise ValueError("subset must be nonempty")
    return ShiftProfile(ctx.p, C, shift_sums(ctx, C))


def quadratic_residues(ctx: PrimeCtx) -> tuple[int, ...]:
    return ctx.residues


def random_half_subset(ctx: PrimeCtx, rng: np.random.Generator) -> tuple[int, ...]:
    return tuple(sorted(int(c) for c in rng.choice(ctx.p, size=ctx.half, replace=False)))


# ---------------------------------------------------------------------------
# Paley counts


@dataclass(frozen=True)
class PaleyTable:
    p: int
    gamma_class: str
    counts: dict
    representatives_checked: int

    def closed_form(self) -> dict:
        return paley_closed_form(self.p, self.gamma_class)


def paley_closed_form(p: int, gamma_class: str) -> dict:
    """Joint square-status counts |A_{e1,e2}| of (a, a + gamma).

    The four counts add up to p - 2 (a = 0 and a = -gamma are excluded).
    For p = 3 (mod 4) one entry is (p+1)/4: (1,-1) when gamma is a residue,
    (-1,1) when it is not.
    """
    if p % 4 == 3:
        out = {(e1, e2): (p - 3) // 4 for e1 in (1, -1) for e2 in (1, -1)}
        out[(1, -1) if gamma_class == "QR" else (-1, 1)] = (p + 1) // 4
        return out
    small, big = (p - 5) // 4, (p - 1) // 4
    out = {(e1, e2): big for e1 in (1, -1) for e2 in (1, -1)}
    out[(1, 1) if gamma_class == "QR" else (-1, -1)] = small
    return out


def paley_printed_form(p: int, gamma_class: str) -> dict:
    """The widely quoted form with every entry (p-3)/4 when p = 3 (mod 4).

    Those four entries add up to p - 3 instead of p - 2, so the form is
    wrong there.  Kept only so the discrepancy can be reported.
    """
    if p % 4 == 3:
        return {(e1, e2): (p - 3) // 4 for e1 in (1, -1) for e2 in (1, -1)}
    return paley_closed_form(p, gamma_class)


def paley_counts(ctx: PrimeCtx, gamma: int) -> dict:
    p = ctx.p
    chi = ctx.chi
    a = np.arange(p)
    e1, e2 = chi[a], chi[(a + gamma) % p]
    return {(s1, s2): int(np.count_nonzero((e1 == s1) & (e2 == s2))) for s1 in (1, -1) for s2 in (1, -1)}


def paley_table(ctx: PrimeCtx, gamma_class: str, all_representatives: bool = True) -> PaleyTable:
    """Brute-force |A_{e1,e2}| for the class of gamma, checked across representatives."""
    if gamma_class not in ("QR", "QNR"):
        raise ValueError("gamma_class must be 'QR' or 'QNR'")
    p = ctx.p
    want = 1 if gamma_class == "QR" else -1
    reps = [g for g in range(1, p) if ctx.chi[g] == want]
    if not all_representatives:
        reps = reps[:1]
    chi = ctx.chi.astype(np.int64)
    a = np.arange(p)
    E1 = chi[a][None, :]
    E2 = chi[(a[None, :] + np.asarray(reps)[:, None]) % p]
    table = {}
    for s1 in (1, -1):
        for s2 in (1, -1):
            n = np.count_nonzero((E1 == s1) & (E2 == s2), axis=1)
            if np.any(n != n[0]):
                raise AssertionError(f"p={p}: count A_{s1},{s2} depends on the representative")
            table[(s1, s2)] = int(n[0])
    assert sum(table.values()) == p - 2
    return PaleyTable(p, gamma_class, table, len(reps))


# ---------------------------------------------------------------------------
# checks on shift profiles


@dataclass
class UniqueShiftReport:
    holds: bool
    clause_a: bool
    clause_b: bool
    large: list[int]
    max_abs: int
    boundary: bool


def unique_large_shift_check(ctx: PrimeCtx, subset) -> UniqueShiftReport:
    """At most one shift with |T| >= (p-1)/4; a larger peak caps the rest.

    Clause (b): if the peak is (p-1)/4 + t with t > 0, every other shift has
    |T| <= (p-1)/4 - t + 1.  ``boundary`` flags instances where a second shift
    sits exactly on (p-1)/4, the only way clause (a) can fail at small p.
    """
    p = ctx.p
    C = {int(c) % p for c in subset}
    if len(C) != ctx.half:
        raise ValueError(f"subset must have exactly {ctx.half} distinct elements")
    T = np.abs(shift_sums(ctx, C))
    large = [int(g) for g in np.flatnonzero(4 * T >= p - 1)]
    clause_a = len(large) <= 1
    top = int(np.argmax(T))
    peak = int(T[top])
    clause_b = True
    if 4 * peak > p - 1:
        others = np.delete(T, top)
        # |T_g| <= (p-1)/4 - (peak - (p-1)/4) + 1  <=>  2|T_g| <= p + 1 - 2 peak
        clause_b = bool(np.all(2 * others <= p + 1 - 2 * peak))
    boundary = len(large) > 1 and int(np.count_nonzero(4 * T > p - 1)) <= 1
    return UniqueShiftReport(clause_a and clause_b, clause_a, clause_b, large, peak, boundary)


@dataclass
class WeilReport:
    p: int
    shifts: tuple[int, ...]
    counts: dict
    premise: bool
    holds: dict
    bound: float

    @property
    def all_hold(self) -> bool:
        return all(self.holds.values())


def weil_premise(p: int, m: int) -> bool:
    """2^(m-1) * m < sqrt(p) - 1 for m linear polynomials."""
    return lt_sqrt(2 ** (m - 1) * m + 1, 1, p)


def weil_sign_patterns(ctx: PrimeCtx, shifts, enforce_premise: bool = True) -> WeilReport:
    """Exact N(v) = #{y : omega(y + r_i) = v_i for all i} with the bound check.

    Points where some y + r_i = 0 belong to no pattern.  The bound
    |N(v) - p/2^m| < m (sqrt(p) + 1)/2 is checked exactly.
    """
    p = ctx.p
    r = [int(s) % p for s in shifts]
    m = len(r)
    if m < 1 or len(set(r)) != m:
        raise ValueError("shifts must be distinct and nonempty")
    premise = weil_premise(p, m)
    if enforce_premise and not premise:
        raise PremiseError(f"2^{m - 1}*{m} < sqrt({p}) - 1 fails")
    chi = ctx.chi
    y = np.arange(p)
    S = np.stack([chi[(y + ri) % p] for ri in r])
    ok = np.all(S != 0, axis=0)
    code = ((S[:, ok] == 1).astype(np.int64) * (1 << np.arange(m))[:, None]).sum(axis=0)
    tally = np.bincount(code, minlength=1 << m)
    counts, holds = {}, {}
    for k in range(1 << m):
        v = tuple(1 if (k >> i) & 1 else -1 for i in range(m))
        n = int(tally[k])
        counts[v] = n
        # 2|2^m n - p| < 2^m m (sqrt p + 1)
        lhs = 2 * abs((1 << m) * n - p) - (1 << m) * m
        holds[v] = lt_sqrt(lhs, (1 << m) * m, p)
    return WeilReport(p, tuple(r), counts, premise, holds, p / 2**m + m * (math.sqrt(p) + 1) / 2)


@dataclass
class CellReport:
    p: int
    shifts: tuple[int, ...]
    sizes: dict
    holds: dict
    bound: float

    @property
    def all_hold(self) -> bool:
        return all(self.holds.values())


def translate_cell_sizes(ctx: PrimeCtx, shifts) -> CellReport:
    """Sizes of every cell  cap_{i in I} A_i  cap_{j not in I} complement(A_j).

    A_i = Q + r_i with Q the nonzero squares; a point with a - r_i = 0 lies in
    the complement of A_i.  Each cell must be < p/2^t + t (sqrt(p) + 1)/2.
    """
    p = ctx.p
    r = [int(s) % p for s in shifts]
    t = len(r)
    if t < 1 or len(set(r)) != t:
        raise ValueError("shifts must be distinct and nonempty")
    # t < 0.5 log2 p  <=>  4^t < p
    if 4**t >= p:
        raise PremiseError(f"t={t} is not below 0.5*log2({p})")
    chi = ctx.chi
    a = np.arange(p)
    member = np.stack([chi[(a - ri) % p] == 1 for ri in r])
    code = (member.astype(np.int64) * (1 << np.arange(t))[:, None]).sum(axis=0)
    tally = np.bincount(code, minlength=1 << t)
    sizes, holds = {}, {}
    for k in range(1 << t):
        I = tuple(i for i in range(t) if (k >> i) & 1)
        n = int(tally[k])
        sizes[I] = n
        # 2^(t+1) n < 2p + 2^t t (sqrt p + 1)
        holds[I] = lt_sqrt((1 << (t + 1)) * n - 2 * p - (1 << t) * t, (1 << t) * t, p)
    return CellReport(p, tuple(r), sizes, holds, p / 2**t + t * (math.sqrt(p) + 1) / 2)


@dataclass
class MinIntersection:
    lhs: int
    rhs: Fraction
    holds: bool
    argmin: int
    union_sizes: dict
    proviso: bool


def min_intersection_bound(sets, B, r_hat: int) -> MinIntersection:
    """min_i |A_i cap B| <= (1/t)(sum_{r >= r_hat} |U_r| + (r_hat - 1)|B|).

    U_r is the set of points lying in at least r of the A_i (the union of all
    cells with |I| >= r).  Requires |U_{r_hat}| <= |B|.
    """
    A = [frozenset(s) for s in sets]
    B = frozenset(B)
    t = len(A)
    if t < 1 or not 1 <= r_hat <= t:
        raise ValueError("need t >= 1 and 1 <= r_hat <= t")
    depth: dict = {}
    for s in A:
        for x in s:
            depth[x] = depth.get(x, 0) + 1
    union_sizes = {r: sum(1 for d in depth.values() if d >= r) for r in range(1, t + 1)}
    proviso = union_sizes[r_hat] <= len(B)
    if not proviso:
        raise PremiseError(f"|U_{r_hat}| = {union_sizes[r_hat]} exceeds |B| = {len(B)}")
    inter = [len(s & B) for s in A]
    lhs = min(inter)
    rhs = Fraction(sum(union_sizes[r] for r in range(r_hat, t + 1)) + (r_hat - 1) * len(B), t)
    return MinIntersection(lhs, rhs, lhs <= rhs, inter.index(lhs), union_sizes, proviso)


def qr_translates(ctx: PrimeCtx, shifts) -> list[frozenset]:
    Q = np.asarray(ctx.residues, dtype=np.int64)
    return [frozenset(int(v) for v in (Q + int(r)) % ctx.p) for r in shifts]


# ---------------------------------------------------------------------------
# the t = 8, r_hat = 5 arithmetic


def translate_cell_bound(p) -> float:
    return p / 2**8 + 8 * (math.sqrt(p) + 1) / 2


def eight_translate_rhs(p) -> float:
    """Upper bound on min_i |A_i cap Q| for eight residue translates."""
    weight = sum(math.comb(8, i) for i in range(4)) + sum(math.comb(8, i) for i in range(3)) \
        + sum(math.comb(8, i) for i in range(2)) + 1
    return (weight * translate_cell_bound(p) + 4 * (p - 1) / 2) / 8


def eight_translate_proviso(p: int) -> bool:
    """Exact test of (sum_{i<=3} C(8,i)) (p/2^8 + 8 (sqrt p + 1)/2) < (p-1)/2.

    Multiplying by 256: 93 p + 93*1024 (sqrt p + 1) < 128 (p - 1).
    """
    n = sum(math.comb(8, i) for i in range(4))
    return _gt_sqrt(128 * (p - 1) - n * p - n * 1024, n * 1024, p)


def eight_translate_threshold(lo: int = 2, hi: int = 10**9) -> int:
    """Least integer p at which :func:`eight_translate_proviso` holds (it is monotone there)."""
    while not eight_translate_proviso(hi):
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if eight_translate_proviso(mid):
            hi = mid
        else:
            lo = mid
    return hi


def concentration_inequality(p: int) -> bool:
    """Exact test of (1/8)(140 (p/256 + 4(sqrt p + 1)) + 2(p - 1)) < (9/14)(p - 1)/2.

    Times 8 and rearranged: (18/7)(p-1) - 140p/256 - 2(p-1) - 560 > 560 sqrt p.
    """
    u = Fraction(18, 7) * (p - 1) - Fraction(140, 256) * p - 2 * (p - 1) - 560
    return _gt_sqrt(u, 560, p)


def _gt_sqrt(u, v, p) -> bool:
    """u > v sqrt(p) for v >= 0."""
    u, v = Fraction(u), Fraction(v)
    return u > 0 and u * u > v * v * p


def concentration_threshold(lo: int = 2, hi: int = 10**9) -> int:
    while not concentration_inequality(hi):
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if concentration_inequality(mid):
            hi = mid
        else:
            lo = mid
    return hi


def random_minint_instance(ctx: PrimeCtx, rng: np.random.Generator, t: int = 8, r_hat: int = 5,
                           max_tries: int = 1000) -> MinIntersection:
    """t random (p-1)/2-subsets against a random (p-1)/2-subset B.

    Draws are repeated until the proviso |U_r_hat| <= |B| holds.
    """
    for _ in range(max_tries):
        sets = [random_half_subset(ctx, rng) for _ in range(t)]
        B = random_half_subset(ctx, rng)
        try:
            return min_intersection_bound(sets, B, r_hat)
        except PremiseError:
            continue
    raise PremiseError(f"no instance satisfying the proviso in {max_tries} draws")


def square_mask(p: int) -> np.ndarray:
    """Boolean mask of the nonzero squares mod p (no table size limit)."""
    x = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    mask = np.zeros(p, dtype=bool)
    mask[x * x % p] = True
    return mask


def min_intersection_masks(masks: np.ndarray, B: np.ndarray, r_hat: int) -> MinIntersection:
    """:func:`min_intersection_bound` for sets given as boolean rows over F_p."""
    masks = np.asarray(masks, dtype=bool)
    B = np.asarray(B, dtype=bool)
    t = masks.shape[0]
    if t < 1 or not 1 <= r_hat <= t:
        raise ValueError("need t >= 1 and 1 <= r_hat <= t")
    depth = masks.sum(axis=0, dtype=np.int64)
    hist = np.bincount(depth, minlength=t + 1)
    union_sizes = {r: int(hist[r:].sum()) for r in range(1, t + 1)}
    nB = int(B.sum())
    if union_sizes[r_hat] > nB:
        raise PremiseError(f"|U_{r_hat}| = {union_sizes[r_hat]} exceeds |B| = {nB}")
    inter = (masks & B[None, :]).sum(axis=1)
    lhs = int(inter.min())
    rhs = Fraction(sum(union_sizes[r] for r in range(r_hat, t + 1)) + (r_hat - 1) * nB, t)
    return MinIntersection(lhs, rhs, lhs <= rhs, int(inter.argmin()), union_sizes, True)


def structured_instance(ctx: PrimeCtx, shifts=tuple(range(1, 9)), r_hat: int = 5) -> MinIntersection:
    """Residue translates Q + r against B = Q."""
    p = ctx.p
    Q = square_mask(p)
    a = np.arange(p, dtype=np.int64)
    masks = np.stack([Q[(a - int(r)) % p] for r in shifts])
    return min_intersection_masks(masks, Q, r_hat)


def structured_proviso_threshold(shifts=tuple(range(1, 9)), r_hat: int = 5, start: int = 11) -> int:
    """Smallest prime >= start at which the structured instance meets |U_r_hat| <= |B|."""
    p = start
    while True:
        if is_prime(p) and p > max(shifts):
            try:
                structured_instance(prime_ctx(p), shifts, r_hat)
                return p
            except PremiseError:
                pass
        p += 1


# ---------------------------------------------------------------------------
# concentration scan


@dataclass
class ConcentrationReport:
    p: int
    threshold: Fraction
    count: int
    witnesses: list[int]
    asserted: bool
    holds: bool | None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "op": "concentration_scan",
            "threshold": f"{self.threshold.numerator}p/{self.threshold.denominator}"
            if self.threshold.numerator != 1 else f"p/{self.threshold.denominator}",
            "count": self.count,
            "witnesses": self.witnesses,
            "asserted": self.asserted,
            "holds": self.holds,
        }


def parse_threshold(text: str) -> Fraction:
    """'p/7', '2p/9', '0.2p' or a bare fraction '1/7' -> multiple of p."""
    s = text.replace(" ", "").lower()
    if s.endswith("p"):
        s = s[:-1] or "1"
        s = s.rstrip("*")
        return Fraction(s)
    if s.startswith("p/"):
        return Fraction(1, int(s[2:]))
    if "p/" in s:
        num, den = s.split("p/")
        return Fraction(int(num.rstrip("*")), int(den))
    if "p" in s:
        raise ValueError(f"malformed threshold {text!r}")
    return Fraction(s)


def concentration_scan(ctx: PrimeCtx, subset, threshold=Fraction(1, 7)) -> ConcentrationReport:
    """Shifts g with |T_g| >= threshold * p; asserted against 16 only above p0."""
    p = ctx.p
    C = {int(c) % p for c in subset}
    if len(C) != ctx.half:
        raise ValueError(f"subset must have exactly {ctx.half} distinct elements")
    q = Fraction(threshold)
    T = np.abs(shift_sums(ctx, C))
    wit = [int(g) for g in np.flatnonzero(T * q.denominator >= q.numerator * p)]
    asserted = p > P0
    return ConcentrationReport(p, q, len(wit), wit, asserted, (len(wit) <= CONCENTRATION_CAP) if asserted else None)
