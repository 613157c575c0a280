"""Reduced polynomials F_p -> F_p and their lifted value profiles.

A :class:`Polynomial` is stored densely as ascending coefficients
``a_0..a_d`` with ``d <= p - 1``.  Functions given as value tables are
turned back into polynomials with the power-moment formula
``a_{p-1-t} = -sum_x x^t f(x)`` (valid for ``0 <= t <= p-2``) and
``a_0 = f(0)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .field import FieldElement, FieldError, PrimeCtx, prime_ctx

NEG_INF = -math.inf

# Above this the float64 moment matmul is no longer exact.
_FLOAT_EXACT_P = 1 << 17


@lru_cache(maxsize=64)
def power_table(p: int) -> np.ndarray:
    """``W[t, x] = x^t mod p`` for t, x in [0, p-1], with 0^0 = 1."""
    x = np.arange(p, dtype=np.int64)
    W = np.empty((p, p), dtype=np.int64)
    W[0] = 1
    for t in range(1, p):
        W[t] = W[t - 1] * x % p
    W.setflags(write=False)
    return W


def moments(p: int, values) -> np.ndarray:
    """``sum_x x^t f(x) mod p`` for every t in [0, p-1]; ``values`` may be 2-D (rows)."""
    if p >= _FLOAT_EXACT_P:
        raise FieldError(f"dense interpolation is limited to p < {_FLOAT_EXACT_P}")
    W = power_table(p)
    f = np.asarray(values, dtype=np.int64) % p
    out = np.rint(f.astype(np.float64) @ W.T.astype(np.float64)).astype(np.int64)
    return out % p


def coefficients_from_values(p: int, values) -> np.ndarray:
    """Ascending coefficient arrays (length p) for one or many value rows."""
    f = np.asarray(values, dtype=np.int64) % p
    mom = moments(p, f)
    coeffs = np.empty_like(mom)
    # a_{p-1-t} = -m_t for t <= p-2
    coeffs[..., 1:] = (-mom[..., :p - 1][..., ::-1]) % p
    coeffs[..., 0] = f[..., 0]
    return coeffs


def _trim(coeffs) -> tuple[int, ...]:
    c = [int(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    ctx: PrimeCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        p = self.ctx.p
        c = _trim(a % p for a in self.coeffs)
        if len(c) > p:
            raise FieldError(f"degree {len(c) - 1} exceeds reduced bound {p - 1}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_values(cls, ctx: PrimeCtx, values) -> Polynomial:
        return interpolate(ctx, values)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> int:
        """Leading coefficient lifted to [1, p-1] (0 for the zero polynomial)."""
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def padded(self) -> np.ndarray:
        out = np.zeros(self.p, dtype=np.int64)
        out[:len(self.coeffs)] = self.coeffs
        return out

    @cached_property
    def values(self) -> np.ndarray:
        """Lifted values P(0), ..., P(p-1)."""
        p = self.p
        x = np.arange(p, dtype=np.int64)
        acc = np.zeros(p, dtype=np.int64)
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % p
        acc.setflags(write=False)
        return acc

    def __call__(self, x) -> int:
        if isinstance(x, FieldElement) and x.ctx != self.ctx:
            raise FieldError(f"modulus mismatch: {self.p} vs {x.ctx.p}")
        x = int(x) % self.p
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % self.p
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[k]
            if a == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            coef = str(a) if (a != 1 or k == 0) else ""
            terms.append(coef + ("*" if coef and mono else "") + mono)
        return " + ".join(terms)

    def __add__(self, other: Polynomial) -> Polynomial:
        _same(self, other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Polynomial(self.ctx, tuple(x + y for x, y in zip(a, b)))

    def scale(self, c: int) -> Polynomial:
        return Polynomial(self.ctx, tuple(a * int(c) for a in self.coeffs))


def _same(P: Polynomial, Q: Polynomial):
    if P.ctx != Q.ctx:
        raise FieldError(f"modulus mismatch: {P.p} vs {Q.p}")


def evaluate(P: Polynomial, x: FieldElement) -> FieldElement:
    """Horner evaluation returning a field element."""
    return P.ctx(P(x))


def interpolate(ctx: PrimeCtx, values) -> Polynomial:
    """The unique reduced polynomial with the given value table."""
    f = np.asarray([int(v) for v in values], dtype=np.int64)
    if f.shape != (ctx.p,):
        raise ValueError(f"need exactly {ctx.p} values, got {len(f)}")
    return Polynomial(ctx, tuple(coefficients_from_values(ctx.p, f)))


def min_degree_witness(ctx: PrimeCtx, values):
    """Degree of the interpolating polynomial read off its power moments.

    Returns ``(degree, gamma)`` where gamma is the least exponent with a
    nonvanishing moment ``sum_x x^gamma f(x)``, so that degree = p-1-gamma.
    Constant functions have no witness: ``(0, None)``, or ``(-inf, None)``
    for the zero function.
    """
    p = ctx.p
    f = np.asarray([int(v) for v in values], dtype=np.int64) % p
    if f.shape != (p,):
        raise ValueError(f"need exactly {p} values, got {len(f)}")
    mom = moments(p, f)[:p - 1]
    nz = np.flatnonzero(mom)
    if nz.size:
        gamma = int(nz[0])
        return p - 1 - gamma, gamma
    return (0 if f[0] else NEG_INF), None


@dataclass(frozen=True)
class RangeProfile:
    values: tuple[int, ...]
    range_sum: int
    roots: tuple[int, ...]
    excess: tuple[int, ...]


def range_profile(P: Polynomial) -> RangeProfile:
    vals = P.values
    roots = tuple(int(x) for x in np.flatnonzero(vals == 0))
    excess = tuple(int(x) for x in np.repeat(np.arange(P.p), np.maximum(vals - 1, 0)))
    return RangeProfile(
        values=tuple(int(v) for v in vals),
        range_sum=int(vals.sum()),
        roots=roots,
        excess=excess,
    )


def range_sum(P: Polynomial) -> int:
    return int(P.values.sum())


def substitution_values(P: Polynomial, a: int, b: int) -> np.ndarray:
    """Values of x -> P(a x + b) (a permutation of P's value table)."""
    x = np.arange(P.p, dtype=np.int64)
    return P.values[(a * x + b) % P.p]


def affine_substitute(P: Polynomial, a, b) -> Polynomial:
    """The reduced polynomial x -> P(a x + b), a != 0."""
    a, b = int(a) % P.p, int(b) % P.p
    if a == 0:
        raise ValueError("affine substitution needs a != 0")
    return interpolate(P.ctx, substitution_values(P, a, b))


@dataclass(frozen=True)
class PowerSumReport:
    holds: bool
    residuals: tuple[int, ...]


def power_sum_identity_check(P: Polynomial, j: int) -> PowerSumReport:
    """Check the power-sum decomposition of P for k = 0..j.

    Lifting P(x) = 1 - [P(x) = 0] + (P(x) - 1)[P(x) >= 1] gives
    sum_x x^k P(x) = sum_x x^k - sum(roots^k) + sum(excess^k)  (mod p).
    Residuals are (lhs - rhs) mod p, one per k.
    """
    p = P.p
    if P.is_zero():
        raise ValueError("power-sum identity needs a nonzero polynomial")
    if not 0 <= j <= p - 2:
        raise ValueError(f"j must lie in [0, {p - 2}]")
    prof = range_profile(P)
    W = power_table(p)
    vals = P.values
    roots = np.asarray(prof.roots, dtype=np.int64)
    excess = np.asarray(prof.excess, dtype=np.int64)
    residuals = []
    for k in range(j + 1):
        lhs = int((W[k] * vals).sum()) % p
        rhs = int(W[k].sum()) - int(W[k][roots].sum()) + int(W[k][excess].sum())
        residuals.append((lhs - rhs) % p)
    return PowerSumReport(all(r == 0 for r in residuals), tuple(residuals))


def make_family(ctx: PrimeCtx, variant: str, sign: int, a=0) -> Polynomial:
    """Members of the two degree-(p-1)/2 families with range sum p.

    variant "i":  sign*(x-a)^((p-1)/2) + 1
    variant "ii": (p+1)/2 * (sign*(x-a)^((p-1)/2) + 1)
    """
    p, h = ctx.p, ctx.half
    if variant not in ("i", "ii"):
        raise ValueError(f"unknown family variant {variant!r}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a = int(a) % p
    # sign * (x - a)^h expanded by the binomial theorem
    coeffs = [sign * math.comb(h, k) * pow(-a, h - k, p) for k in range(h + 1)]
    coeffs[0] += 1
    P = Polynomial(ctx, tuple(coeffs))
    if variant == "ii":
        P = P.scale((p + 1) // 2)
    assert P.degree == h and range_sum(P) == p, (variant, sign, a)
    return P


_POLY_RE = re.compile(r"^\s*p\s*=\s*(\d+)\s*;\s*coeffs\s*=\s*\[([^\]]*)\]\s*$")


def parse_polynomial(text: str) -> Polynomial:
    """Parse ``p=7; coeffs=[1,0,0,1]`` (ascending coefficients a_0 first)."""
    m = _POLY_RE.match(text)
    if not m:
        raise ValueError(f"malformed polynomial {text!r}; expected 'p=<prime>; coeffs=[a0,a1,...]'")
    body = m.group(2).strip()
    coeffs = tuple(int(tok) for tok in body.split(",")) if body else ()
    return Polynomial(prime_ctx(int(m.group(1))), coeffs)


def format_polynomial(P: Polynomial) -> str:
    return f"p={P.p}; coeffs=[{','.join(str(a) for a in P.coeffs)}]"
