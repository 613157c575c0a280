"""Point sets in AG(2, p), their directions and projection polynomials.

Slopes are integers 0..p-1, with ``math.inf`` for vertical lines.  The slope
of a pair is dy/dx; the projection polynomial for slope m interpolates the
line counts ``f_m(i) = #{(x, y) in S : y = m x + i}`` (``x = i`` for
m = inf), lifted into F_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classify import OTHER, family_membership
from .field import PrimeCtx, prime_ctx
from .poly import Polynomial, interpolate, range_sum

INF = math.inf


class PointFileError(ValueError):
    pass


@dataclass(frozen=True)
class PointSet:
    ctx: PrimeCtx
    points: frozenset

    def __post_init__(self):
        p = self.ctx.p
        pts = frozenset((int(x) % p, int(y) % p) for x, y in self.points)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_iter(cls, ctx: PrimeCtx, pts) -> PointSet:
        pts = list(pts)
        S = cls(ctx, frozenset(pts))
        if len(S.points) != len(pts):
            raise ValueError("duplicate points")
        return S

    def __len__(self):
        return len(self.points)

    @property
    def p(self) -> int:
        return self.ctx.p

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        pts = sorted(self.points)
        a = np.array(pts, dtype=np.int64).reshape(-1, 2)
        return a[:, 0], a[:, 1]


def slopes(p: int) -> list:
    return list(range(p)) + [INF]


def slope_label(m) -> str:
    return "inf" if m == INF else str(int(m))


def parse_slope(text: str):
    return INF if text.strip().lower() in ("inf", "infinity", "oo") else int(text)


def direction_set(S: PointSet) -> set:
    """Slopes determined by pairs of points (dy/dx, inf when dx = 0)."""
    if len(S) < 2:
        raise ValueError("need at least two points")
    p = S.p
    xs, ys = S.arrays()
    i, j = np.triu_indices(len(xs), k=1)
    dx = (xs[j] - xs[i]) % p
    dy = (ys[j] - ys[i]) % p
    inv = S.ctx.inverses
    finite = dx != 0
    out = set(int(m) for m in np.unique(dy[finite] * inv[dx[finite]] % p))
    if np.any(~finite):
        out.add(INF)
    return out


def projection_counts(S: PointSet, m) -> np.ndarray:
    """Integer number of points on each line of the parallel class of slope m."""
    p = S.p
    xs, ys = S.arrays()
    idx = xs if m == INF else (ys - int(m) * xs) % p
    return np.bincount(idx, minlength=p)


def projection_polynomial(S: PointSet, m) -> Polynomial:
    return interpolate(S.ctx, projection_counts(S, m) % S.p)


def classify_projection(P: Polynomial) -> str:
    """'zero', 'constant', 'family-i', 'family-ii' or 'other'.

    'zero' is a parallel class with all p points on one line (counts p, 0, ...).
    """
    if P.is_zero():
        return "zero"
    if P.is_constant():
        return "constant"
    if P.degree == P.ctx.half and range_sum(P) == P.p:
        fam = family_membership(P)
        return "other" if fam == OTHER else f"family-{fam}"
    return "other"


@dataclass(frozen=True)
class SlopeInfo:
    slope: object
    poly: Polynomial
    kind: str

    @property
    def degree(self):
        return self.poly.degree

    @property
    def lc(self) -> int:
        return self.poly.lc

    def to_dict(self) -> dict:
        d = self.poly.degree
        return {
            "degree": d if d != -math.inf else None,
            "lc": self.lc,
            "class": self.kind,
            "coeffs": list(self.poly.coeffs),
        }


@dataclass
class DirectionReport:
    p: int
    size: int
    directions: set
    slopes: dict = field(default_factory=dict)

    @property
    def n_directions(self) -> int:
        return len(self.directions)

    def census(self) -> dict:
        out = {"zero": 0, "constant": 0, "family-i": 0, "family-ii": 0, "other": 0}
        for info in self.slopes.values():
            out[info.kind] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "size": self.size,
            "n_directions": self.n_directions,
            "directions": [slope_label(m) for m in sorted(self.directions)],
            "census": self.census(),
            "slopes": {slope_label(m): info.to_dict() for m, info in self.slopes.items()},
        }


def direction_report(S: PointSet) -> DirectionReport:
    rep = DirectionReport(S.p, len(S), direction_set(S))
    for m in slopes(S.p):
        P = projection_polynomial(S, m)
        rep.slopes[m] = SlopeInfo(m, P, classify_projection(P))
    return rep


def ls_set(ctx: PrimeCtx) -> PointSet:
    """The residue cross {(0, x), (x, 0) : x a nonzero square} with the origin."""
    Q = ctx.residues
    pts = [(0, x) for x in Q] + [(x, 0) for x in Q] + [(0, 0)]
    S = PointSet.from_iter(ctx, pts)
    assert len(S) == ctx.p
    return S


@dataclass
class DegreeCheck:
    holds: bool
    n_directions: int
    degrees: dict
    tightest: object
    slack: int | None


def direction_degree_check(S: PointSet) -> DegreeCheck:
    """A projection polynomial of degree d in [1, p-2] forces >= d + 2 directions."""
    p = S.p
    if len(S) != p:
        raise ValueError(f"need |S| = {p}, got {len(S)}")
    n = len(direction_set(S))
    degrees, holds, tightest, slack = {}, True, None, None
    for m in slopes(p):
        d = projection_polynomial(S, m).degree
        degrees[m] = d
        if 1 <= d <= p - 2:
            s = n - (d + 2)
            holds &= s >= 0
            if slack is None or s < slack:
                tightest, slack = m, s
    return DegreeCheck(holds, n, degrees, tightest, slack)


@dataclass
class Census:
    p: int
    constant: int
    family_i: int
    family_ii: int
    other: int
    zero: int
    n_directions: int
    printed_constant_count: int

    @property
    def expected(self) -> tuple[int, int, int]:
        p = self.p
        return (p - 1) // 2, 2, (p + 3) // 2 - 2

    @property
    def matches(self) -> bool:
        return (self.constant, self.family_ii, self.family_i) == self.expected and self.other == 0 \
            and self.zero == 0

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "constant": self.constant,
            "family-i": self.family_i,
            "family-ii": self.family_ii,
            "other": self.other,
            "zero": self.zero,
            "n_directions": self.n_directions,
            "matches": self.matches,
            # the (p-1) - (p+3)/2 count disagrees with (p+1) - (p+3)/2 undetermined slopes
            "printed_constant_count": self.printed_constant_count,
            "printed_count_discrepancy": self.printed_constant_count != self.constant,
        }


def ls_profile_census(ctx: PrimeCtx) -> Census:
    rep = direction_report(ls_set(ctx))
    c = rep.census()
    p = ctx.p
    return Census(p, c["constant"], c["family-i"], c["family-ii"], c["other"], c["zero"],
                  rep.n_directions, (p - 1) - (p + 3) // 2)


def is_collinear(S: PointSet) -> bool:
    return len(S) >= 2 and len(direction_set(S)) == 1


def random_point_set(ctx: PrimeCtx, rng: np.random.Generator, size: int | None = None,
                     allow_collinear: bool = False) -> PointSet:
    """Uniform ``size``-subset of the plane (default p), rejecting lines."""
    p = ctx.p
    size = p if size is None else size
    while True:
        flat = rng.choice(p * p, size=size, replace=False)
        S = PointSet(ctx, frozenset((int(v) // p, int(v) % p) for v in flat))
        if allow_collinear or not is_collinear(S):
            return S


def apply_affine(S: PointSet, matrix, shift=(0, 0)) -> PointSet:
    """Image of S under v -> M v + t (M invertible mod p)."""
    p = S.p
    M = np.asarray(matrix, dtype=np.int64) % p
    if (int(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])) % p == 0:
        raise ValueError("matrix is singular mod p")
    xs, ys = S.arrays()
    V = (M @ np.stack([xs, ys]) + np.asarray(shift, dtype=np.int64)[:, None]) % p
    return PointSet(S.ctx, frozenset(zip(V[0].tolist(), V[1].tolist())))


def parse_points(text: str, p: int | None = None) -> PointSet:
    """Read a ``p=<prime>`` header followed by one ``x,y`` pair per line.

    Blank lines and ``#`` comments are ignored; errors carry line numbers.
    """
    header = None
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            if not line.replace(" ", "").startswith("p="):
                raise PointFileError(f"line {lineno}: expected header 'p=<prime>', got {line!r}")
            try:
                header = int(line.replace(" ", "")[2:])
            except ValueError:
                raise PointFileError(f"line {lineno}: bad prime in header {line!r}") from None
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise PointFileError(f"line {lineno}: expected 'x,y', got {line!r}")
        try:
            pts.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise PointFileError(f"line {lineno}: non-integer coordinate in {line!r}") from None
    if header is None:
        if p is None:
            raise PointFileError("missing 'p=<prime>' header")
        header = p
    if p is not None and p != header:
        raise PointFileError(f"header says p={header} but p={p} was requested")
    try:
        ctx = prime_ctx(header)
    except ValueError as e:
        raise PointFileError(str(e)) from None
    for k, (x, y) in enumerate(pts):
        if not (0 <= x < header and 0 <= y < header):
            raise PointFileError(f"point {k + 1} ({x},{y}) is outside F_{header}^2")
    if len(set(pts)) != len(pts):
        raise PointFileError("duplicate points")
    return PointSet(ctx, frozenset(pts))


def read_points(path, p: int | None = None) -> PointSet:
    return parse_points(Path(path).read_text(), p)


def format_points(S: PointSet) -> str:
    lines = [f"p={S.p}"] + [f"{x},{y}" for x, y in sorted(S.points)]
    return "\n".join(lines) + "\n"
