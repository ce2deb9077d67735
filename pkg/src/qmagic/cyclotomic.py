"""Exact arithmetic in Z[q] for a primitive l-th root of unity q.

Elements are stored as integer coefficient vectors in the power basis
1, q, ..., q^(phi(l)-1), i.e. reduced modulo the cyclotomic polynomial.
Reduction modulo X^l - 1 would not be canonical (that ring has zero
divisors), so everything here goes through Phi_l.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._config import InvalidArgument

__all__ = [
    "IntPoly",
    "CycInt",
    "cyclotomic_poly",
    "totient",
    "cyc_reduce",
    "cyc_add",
    "cyc_mul",
    "cyc_root_power",
    "cyc_to_complex",
    "gaussian_binomial",
    "reduction_matrix",
]


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial; ``coeffs[i]`` is the coefficient of X^i."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> IntPoly:
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: IntPoly) -> IntPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPoly(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    def __neg__(self) -> IntPoly:
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-other)

    def __mul__(self, other: IntPoly) -> IntPoly:
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPoly(tuple(out))

    def divmod_monic(self, divisor: IntPoly) -> tuple[IntPoly, IntPoly]:
        """Exact long division by a monic integer polynomial."""
        d = divisor.coeffs
        if not d or d[-1] != 1:
            raise InvalidArgument("divisor must be monic")
        rem = list(self.coeffs)
        dd = len(d) - 1
        if len(rem) <= dd:
            return IntPoly(), IntPoly(tuple(rem))
        quot = [0] * (len(rem) - dd)
        for shift in range(len(rem) - 1 - dd, -1, -1):
            c = rem[shift + dd]
            if c:
                quot[shift] = c
                for i, dc in enumerate(d):
                    rem[shift + i] -= c * dc
        return IntPoly(tuple(quot)), IntPoly(tuple(rem[:dd]))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "IntPoly(0)"
        terms = [f"{c}*X^{i}" for i, c in enumerate(self.coeffs) if c]
        return "IntPoly(" + " + ".join(terms) + ")"


@lru_cache(maxsize=None)
def cyclotomic_poly(l: int) -> IntPoly:
    """Phi_l, computed as (X^l - 1) divided by Phi_d for every proper divisor d."""
    if l < 1:
        raise InvalidArgument(f"cyclotomic_poly needs l >= 1, got {l}")
    num = IntPoly.monomial(l) - IntPoly((1,))
    for d in range(1, l):
        if l % d == 0:
            num, rem = num.divmod_monic(cyclotomic_poly(d))
            assert not rem.coeffs, f"Phi_{d} does not divide X^{l}-1"
    return num


def totient(l: int) -> int:
    return sum(1 for k in range(1, l + 1) if math.gcd(k, l) == 1)


def _check_order(l: int) -> None:
    if l < 2:
        raise InvalidArgument(f"root order must be >= 2, got {l}")


@dataclass(frozen=True)
class CycInt:
    """An element of Z[q], q a primitive ``order``-th root of unity."""

    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        _check_order(self.order)
        phi = cyclotomic_poly(self.order).degree
        cs = tuple(int(c) for c in self.coeffs)
        if len(cs) > phi:
            raise InvalidArgument(f"CycInt of order {self.order} takes {phi} coefficients, got {len(cs)}")
        object.__setattr__(self, "coeffs", cs + (0,) * (phi - len(cs)))

    @classmethod
    def zero(cls, l: int) -> CycInt:
        return cls(l, ())

    @classmethod
    def integer(cls, l: int, value: int) -> CycInt:
        return cls(l, (value,))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: CycInt) -> CycInt:
        return cyc_add(self, other)

    def __mul__(self, other: CycInt) -> CycInt:
        return cyc_mul(self, other)

    def __neg__(self) -> CycInt:
        return CycInt(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other: CycInt) -> CycInt:
        return cyc_add(self, -other)

    def __pow__(self, e: int) -> CycInt:
        if e < 0:
            raise InvalidArgument("negative powers are not supported")
        out = CycInt.integer(self.order, 1)
        for _ in range(e):
            out = out * self
        return out

    def __complex__(self) -> complex:
        return cyc_to_complex(self)

    def __repr__(self) -> str:
        terms = [f"{c}*q^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"CycInt[{self.order}](" + (" + ".join(terms) or "0") + ")"


def cyc_reduce(l: int, p: IntPoly | Sequence[int]) -> CycInt:
    """Map an integer polynomial to Z[q] by substituting X = q."""
    _check_order(l)
    if not isinstance(p, IntPoly):
        p = IntPoly(tuple(p))
    _, rem = p.divmod_monic(cyclotomic_poly(l))
    return CycInt(l, rem.coeffs)


def _same_order(a: CycInt, b: CycInt) -> int:
    if a.order != b.order:
        raise InvalidArgument(f"order mismatch: {a.order} vs {b.order}")
    return a.order


def cyc_add(a: CycInt, b: CycInt) -> CycInt:
    l = _same_order(a, b)
    return CycInt(l, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def cyc_mul(a: CycInt, b: CycInt) -> CycInt:
    l = _same_order(a, b)
    return cyc_reduce(l, IntPoly(a.coeffs) * IntPoly(b.coeffs))


def cyc_root_power(l: int, k: int) -> CycInt:
    """Canonical form of q^(k mod l)."""
    _check_order(l)
    return cyc_reduce(l, IntPoly.monomial(k % l))


@lru_cache(maxsize=None)
def _root_powers(l: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * i / l) for i in range(l))


def cyc_to_complex(a: CycInt) -> complex:
    """Evaluate at q = exp(2*pi*i/l)."""
    if a.is_zero():
        return 0j
    powers = _root_powers(a.order)
    return complex(sum(c * powers[i] for i, c in enumerate(a.coeffs) if c))


def gaussian_binomial(n: int, k: int) -> IntPoly:
    """The Gaussian binomial [n choose k] as a polynomial in X (Pascal-type recurrence)."""
    if k < 0 or k > n:
        return IntPoly()
    if k == 0 or k == n:
        return IntPoly((1,))
    return gaussian_binomial(n - 1, k - 1) + IntPoly.monomial(k) * gaussian_binomial(n - 1, k)


@lru_cache(maxsize=None)
def reduction_matrix(l: int) -> np.ndarray:
    """Integer (l, phi(l)) matrix whose row j holds the coefficients of q^j.

    Right-multiplying a length-l coefficient vector over 1, X, ..., X^(l-1) by
    this matrix projects from Z[X]/(X^l - 1) onto canonical Z[q].
    """
    _check_order(l)
    phi = cyclotomic_poly(l).degree
    out = np.zeros((l, phi), dtype=np.int64)
    for j in range(l):
        out[j] = cyc_root_power(l, j).coeffs
    out.setflags(write=False)
    return out
