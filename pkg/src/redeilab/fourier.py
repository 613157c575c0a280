"""Fourier transform of point-set indicators on F_p^2.

Normalization: ``1hat_S(xi_v) = (1/p) sum_{x in F_p^2} 1_S(x) exp(-2 pi i <x,v>/p)``.
With it Plancherel closes exactly, ``sum_xi |1hat_S(xi)|^2 = |S|``, and the
trivial character contributes ``(|S|/p)^2``.

The nonzero characters split into p + 1 directions.  Slope m owns
``v = lam * (-m, 1)`` and the vertical slope owns ``v = lam * (1, 0)``, for
lam = 1..p-1.  ``<x, v>`` is then lam times the line index of x in that
parallel class, so ``p * 1hat_S(xi_v)`` is entry lam of the length-p DFT
of the line counts.  Magnitudes below are always reported as ``p * |1hat|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import (INF, PointSet, classify_projection, direction_set, projection_counts,
                       projection_polynomial, slope_label, slopes)

TOL = 1e-6

ZERO = "zero"
GAUSS = "gauss"
HEAVY = "heavy"
OTHER = "other"


def character_vector(p: int, m, lam: int = 1) -> tuple[int, int]:
    """The character v of direction ``m`` scaled by ``lam``."""
    if m == INF:
        return lam % p, 0
    return (-lam * int(m)) % p, lam % p


def magnitude_class(p: int, pmag: float, tol: float = TOL) -> str:
    """Bucket ``p * |1hat|`` into zero, gauss (sqrt p), heavy (p/2 +- sqrt(p)/2) or other."""
    r = math.sqrt(p)
    if pmag <= tol:
        return ZERO
    if abs(pmag - r) <= tol:
        return GAUSS
    if p / 2 - r / 2 - tol <= pmag <= p / 2 + r / 2 + tol:
        return HEAVY
    return OTHER


@dataclass
class DirectionSpectrum:
    slope: object
    values: np.ndarray  # p * 1hat at lam = 1..p-1 (complex)
    poly_lc: int
    poly_class: str

    @property
    def p_mags(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def p_mag(self) -> float:
        return float(self.p_mags.max())

    @property
    def spread(self) -> float:
        m = self.p_mags
        return float(m.max() - m.min())

    def magnitude_class(self) -> str:
        p = len(self.values) + 1
        classes = {magnitude_class(p, float(x)) for x in self.p_mags}
        return classes.pop() if len(classes) == 1 else OTHER

    def to_dict(self) -> dict:
        return {
            "slope": slope_label(self.slope),
            "class": self.magnitude_class(),
            "p_mag": round(self.p_mag, 10),
            "poly_lc": self.poly_lc,
        }


@dataclass
class SpectrumReport:
    p: int
    size: int
    trivial: complex
    directions: dict = field(default_factory=dict)

    @property
    def total_energy(self) -> float:
        s = abs(self.trivial) ** 2
        for d in self.directions.values():
            s += float((d.p_mags ** 2).sum()) / self.p ** 2
        return s

    @property
    def plancherel_residual(self) -> float:
        return abs(self.total_energy - self.size)

    @property
    def M(self) -> int:
        return sum(d.magnitude_class() == GAUSS for d in self.directions.values())

    def value(self, v) -> complex:
        """``1hat_S(xi_v)`` for any v in F_p^2."""
        p = self.p
        v1, v2 = (int(t) % p for t in v)
        if v1 == 0 and v2 == 0:
            return self.trivial
        if v2 == 0:
            m, lam = INF, v1
        else:
            lam = v2
            m = (-v1 * pow(v2, -1, p)) % p
        return complex(self.directions[m].values[lam - 1]) / p

    def class_counts(self) -> dict:
        out = {ZERO: 0, GAUSS: 0, HEAVY: 0, OTHER: 0}
        for d in self.directions.values():
            out[d.magnitude_class()] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "size": self.size,
            "trivial": abs(self.trivial),
            "plancherel_residual": self.plancherel_residual,
            "M": self.M,
            "classes": self.class_counts(),
            "directions": [d.to_dict() for d in self.directions.values()],
        }


def spectrum(S: PointSet) -> SpectrumReport:
    """All p^2 Fourier coefficients of 1_S, one DFT of line counts per direction."""
    p = S.p
    rep = SpectrumReport(p, len(S), complex(len(S) / p))
    for m in slopes(p):
        counts = projection_counts(S, m)
        P = projection_polynomial(S, m)
        F = np.fft.fft(counts.astype(np.float64))
        rep.directions[m] = DirectionSpectrum(m, F[1:], P.lc, classify_projection(P))
    return rep


def naive_transform(S: PointSet) -> np.ndarray:
    """``1hat_S(xi_v)`` straight from the definition, indexed ``[v1, v2]`` (O(p^4))."""
    p = S.p
    xs, ys = S.arrays()
    full = np.zeros((p, p), dtype=bool)
    full[xs, ys] = True
    tw = np.exp(-2j * np.pi * np.arange(p) / p)
    out = np.empty((p, p), dtype=np.complex128)
    for v1 in range(p):
        for v2 in range(p):
            acc = 0j
            for x in range(p):
                for y in range(p):
                    if full[x, y]:
                        acc += tw[(x * v1 + y * v2) % p]
            out[v1, v2] = acc / p
    return out


def spectrum_matrix(rep: SpectrumReport) -> np.ndarray:
    """The report's coefficients rearranged as ``[v1, v2]`` for comparison."""
    p = rep.p
    out = np.empty((p, p), dtype=np.complex128)
    for v1 in range(p):
        for v2 in range(p):
            out[v1, v2] = rep.value((v1, v2))
    return out


@dataclass
class Verdict:
    slope: object
    case: str | None  # "constant", "lc+-1", "lc+-h" or None if no case applies
    p_mag: float
    holds: bool | None  # None when no case applies (reported only)


def magnitude_law_check(S: PointSet, tol: float = TOL, rep: SpectrumReport | None = None) -> list[Verdict]:
    """Magnitude laws by projection type.

    constant projection -> 0; family-i (LC +-1) -> sqrt p;
    family-ii (LC +-(p-1)/2) -> within [p/2 - sqrt(p)/2, p/2 + sqrt(p)/2].
    """
    p = S.p
    rep = rep or spectrum(S)
    r = math.sqrt(p)
    out = []
    for m, d in rep.directions.items():
        mags = d.p_mags
        if d.poly_class == "constant":
            case, ok = "constant", bool(mags.max() <= tol)
        elif d.poly_class == "family-i":
            case, ok = "lc+-1", bool(np.abs(mags - r).max() <= tol)
        elif d.poly_class == "family-ii":
            lo, hi = p / 2 - r / 2 - tol, p / 2 + r / 2 + tol
            case, ok = "lc+-h", bool(mags.min() >= lo and mags.max() <= hi)
        else:
            case, ok = None, None
        out.append(Verdict(m, case, d.p_mag, ok))
    return out


def feasible_gaps(p: int) -> list[int]:
    """Gaps g = (p+3)/2 - M compatible with Plancherel and the magnitude laws.

    With g heavy directions of common squared magnitude X, Plancherel forces
    ``X = p + p(p-3)/(2g)``; g is feasible when that X lies in
    ``[(p/2 - sqrt(p)/2)^2, (p/2 + sqrt(p)/2)^2]``.  Decided exactly.
    """
    out = []
    for g in range((p + 3) // 2 + 1):
        if g == 0:
            if p == 3:
                out.append(0)
            continue
        X = p + Fraction(p * (p - 3), 2 * g)
        d = abs(X - Fraction(p * p + p, 4))
        # |d| <= (p/2) sqrt(p)  <=>  d^2 <= p^3 / 4
        if d * d <= Fraction(p ** 3, 4):
            out.append(g)
    return out


@dataclass
class MCount:
    p: int
    M: int
    gap: int
    asserted: bool
    feasible: list

    @property
    def holds(self) -> bool:
        return self.gap == 2 if self.asserted else True

    def to_dict(self) -> dict:
        return {"p": self.p, "M": self.M, "gap": self.gap, "asserted": self.asserted,
                "exploratory": not self.asserted, "holds": self.holds,
                "feasible_gaps": self.feasible}


def m_count_argument(S: PointSet, rep: SpectrumReport | None = None) -> MCount:
    """M = directions with Gauss-size coefficients; gap = (p+3)/2 - M (asserted = 2 for p > 9)."""
    p = S.p
    if len(S) != p:
        raise ValueError(f"need |S| = {p}, got {len(S)}")
    n = len(direction_set(S))
    if n != (p + 3) // 2:
        raise ValueError(f"need exactly {(p + 3) // 2} directions, got {n}")
    rep = rep or spectrum(S)
    M = rep.M
    return MCount(p, M, (p + 3) // 2 - M, p > 9, feasible_gaps(p))
