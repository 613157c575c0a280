"""Prime field arithmetic and the quadratic character.

Residues are plain Python integers in ``[0, p-1]``; :class:`FieldElement`
wraps one together with its :class:`PrimeCtx` for callers who want checked
operator arithmetic.  Hot loops elsewhere in the package work directly on
integers and on the numpy character table :attr:`PrimeCtx.chi`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

# Character/inverse tables are only built below this size.
TABLE_LIMIT = 1 << 20

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (trial division, then Miller-Rabin).

    The fixed base set is a proof of primality for n < 3.3e24.
    """
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n < 41 * 41:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldError(ValueError):
    """Raised for operations mixing incompatible fields or bad moduli."""


@dataclass(frozen=True, eq=False)
class PrimeCtx:
    """The ambient prime field F_p (p odd prime)."""

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or p < 3 or p % 2 == 0 or not is_prime(p):
            raise FieldError(f"p={p!r} is not an odd prime")

    def __repr__(self):
        return f"PrimeCtx(p={self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeCtx) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeCtx", self.p))

    def __call__(self, value) -> FieldElement:
        return FieldElement(int(value) % self.p, self)

    @property
    def half(self) -> int:
        """(p - 1) / 2."""
        return (self.p - 1) // 2

    @cached_property
    def chi(self) -> np.ndarray:
        """Legendre symbol of every residue as an int8 array of length p."""
        p = self.p
        if p > TABLE_LIMIT:
            raise FieldError(f"character table not built for p={p} > {TABLE_LIMIT}")
        table = np.full(p, -1, dtype=np.int8)
        x = np.arange(1, self.half + 1, dtype=np.int64)
        table[(x * x) % p] = 1
        table[0] = 0
        table.setflags(write=False)
        return table

    @cached_property
    def inverses(self) -> np.ndarray:
        """Multiplicative inverses mod p (entry 0 is 0)."""
        p = self.p
        inv = np.zeros(p, dtype=np.int64)
        # inv[i] = -(p // i) * inv[p % i]
        inv[1] = 1
        for i in range(2, p):
            inv[i] = (p - (p // i) * inv[p % i] % p) % p
        inv.setflags(write=False)
        return inv

    @cached_property
    def residues(self) -> tuple[int, ...]:
        """Sorted nonzero quadratic residues."""
        return tuple(sorted({x * x % self.p for x in range(1, self.half + 1)}))

    @cached_property
    def nonresidue(self) -> int:
        """Smallest quadratic nonresidue."""
        return next(a for a in range(2, self.p) if legendre_int(a, self.p) == -1)

    def legendre(self, a) -> int:
        a = int(a) % self.p
        if self.p <= TABLE_LIMIT:
            return int(self.chi[a])
        return legendre_int(a, self.p)


@lru_cache(maxsize=256)
def prime_ctx(p: int) -> PrimeCtx:
    """Shared (cached) context for ``p``."""
    return PrimeCtx(p)


def _coerce(ctx: PrimeCtx, other) -> int:
    if isinstance(other, FieldElement):
        if other.ctx != ctx:
            raise FieldError(f"modulus mismatch: {ctx.p} vs {other.ctx.p}")
        return other.value
    if isinstance(other, (int, np.integer)):
        return int(other) % ctx.p
    return NotImplemented


@dataclass(frozen=True)
class FieldElement:
    value: int
    ctx: PrimeCtx

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.p:
            raise FieldError(f"{self.value} is not a reduced residue mod {self.ctx.p}")

    def __int__(self):
        return self.value

    __index__ = __int__

    def __repr__(self):
        return f"{self.value} (mod {self.ctx.p})"

    def _make(self, v):
        return FieldElement(v % self.ctx.p, self.ctx)

    def __add__(self, other):
        o = _coerce(self.ctx, other)
        return NotImplemented if o is NotImplemented else self._make(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(self.ctx, other)
        return NotImplemented if o is NotImplemented else self._make(self.value - o)

    def __rsub__(self, other):
        o = _coerce(self.ctx, other)
        return NotImplemented if o is NotImplemented else self._make(o - self.value)

    def __mul__(self, other):
        o = _coerce(self.ctx, other)
        return NotImplemented if o is NotImplemented else self._make(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return self._make(pow(self.value, k, self.ctx.p))

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return self._make(pow(self.value, -1, self.ctx.p))

    def __truediv__(self, other):
        o = _coerce(self.ctx, other)
        if o is NotImplemented:
            return o
        return self * self._make(o).inverse()


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return x - y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def inv(x: FieldElement) -> FieldElement:
    return x.inverse()


def legendre_int(a: int, p: int) -> int:
    """Euler's criterion: a^((p-1)/2) mod p mapped to {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def legendre(a: FieldElement) -> int:
    """Legendre symbol (a/p) of a field element."""
    return a.ctx.legendre(a.value)


# The quadratic character of a prime field is the Legendre symbol.
omega = legendre


def gauss_sum(ctx: PrimeCtx) -> complex:
    p = ctx.p
    x = np.arange(p, dtype=np.int64)
    return complex(np.exp(2j * np.pi * ((x * x) % p) / p).sum())


def gauss_sum_magnitude(ctx: PrimeCtx) -> float:
    """|sum_x exp(2 pi i x^2 / p)|, which equals sqrt(p)."""
    return abs(gauss_sum(ctx))


def root_of_unity_table(p: int) -> np.ndarray:
    """exp(2 pi i k / p) for k = 0..p-1."""
    return np.array([cmath.exp(2j * math.pi * k / p) for k in range(p)])
