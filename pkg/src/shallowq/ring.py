"""Exact arithmetic in Z[omega][1/sqrt2], omega = exp(i*pi/4).

Every built-in gate has entries of the form (a + b w + c w^2 + d w^3) / sqrt2^k
with integer a, b, c, d, so whole simulations can run without rounding.
Real elements are (a + b sqrt2) / sqrt2^k and compare exactly with rationals.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

_S = 1 / math.sqrt(2)


def _mul_sqrt2(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    # sqrt2 = w - w^3
    return b - d, a + c, b + d, c - a


def _sign_a_plus_b_sqrt2(a: int, b: int) -> int:
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    d = a * a - 2 * b * b
    s = (d > 0) - (d < 0)
    return s if a > 0 else -s


class Cyclotomic:
    """(a + b w + c w^2 + d w^3) / sqrt2^k, kept with the smallest k."""

    __slots__ = ("a", "b", "c", "d", "k")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0, k: int = 0) -> None:
        if k < 0:
            raise ValueError("k must be nonnegative")
        if a == b == c == d == 0:
            k = 0
        while k > 0 and (a - c) % 2 == 0 and (b - d) % 2 == 0:
            a, b, c, d = (b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2
            k -= 1
        self.a, self.b, self.c, self.d, self.k = a, b, c, d, k

    @classmethod
    def coerce(cls, x: object) -> Cyclotomic:
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, Rational):
            den = x.denominator
            j = den.bit_length() - 1
            if den != 1 << j:
                raise TypeError(f"{x} is not a dyadic rational")
            return cls(x.numerator, k=2 * j)
        raise TypeError(f"cannot convert {type(x).__name__} to Cyclotomic")

    @classmethod
    def omega(cls, power: int = 1) -> Cyclotomic:
        power %= 8
        coeffs = [0, 0, 0, 0]
        coeffs[power % 4] = -1 if power >= 4 else 1
        return cls(*coeffs)

    @property
    def coeffs(self) -> tuple[int, int, int, int, int]:
        return self.a, self.b, self.c, self.d, self.k

    def _lift(self, k: int) -> tuple[int, int, int, int]:
        a, b, c, d = self.a, self.b, self.c, self.d
        for _ in range(k - self.k):
            a, b, c, d = _mul_sqrt2(a, b, c, d)
        return a, b, c, d

    def __add__(self, other: object) -> Cyclotomic:
        try:
            o = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        k = max(self.k, o.k)
        x, y = self._lift(k), o._lift(k)
        return Cyclotomic(x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3], k)

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(-self.a, -self.b, -self.c, -self.d, self.k)

    def __sub__(self, other: object) -> Cyclotomic:
        try:
            return self + (-Cyclotomic.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other: object) -> Cyclotomic:
        return (-self) + other

    def __mul__(self, other: object) -> Cyclotomic:
        if isinstance(other, int):
            return Cyclotomic(self.a * other, self.b * other, self.c * other, self.d * other, self.k)
        try:
            o = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        a0, a1, a2, a3 = self.a, self.b, self.c, self.d
        b0, b1, b2, b3 = o.a, o.b, o.c, o.d
        # w^4 = -1
        return Cyclotomic(
            a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
            a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
            a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
            self.k + o.k,
        )

    __rmul__ = __mul__

    def mul_omega(self, power: int) -> Cyclotomic:
        """Multiply by w^power; a unit, so the result needs no reduction."""
        power %= 8
        if not power:
            return self
        v = [self.a, self.b, self.c, self.d]
        for _ in range(power):
            v = [-v[3], v[0], v[1], v[2]]
        out = object.__new__(Cyclotomic)
        out.a, out.b, out.c, out.d, out.k = v[0], v[1], v[2], v[3], self.k
        return out

    def conjugate(self) -> Cyclotomic:
        return Cyclotomic(self.a, -self.d, -self.c, -self.b, self.k)

    def abs2(self) -> Cyclotomic:
        return self * self.conjugate()

    def mul_sqrt2_power(self, m: int) -> Cyclotomic:
        """Multiply by sqrt2^m (m may be negative)."""
        if m >= 0:
            a, b, c, d = self.a, self.b, self.c, self.d
            for _ in range(m):
                a, b, c, d = _mul_sqrt2(a, b, c, d)
            return Cyclotomic(a, b, c, d, self.k)
        return Cyclotomic(self.a, self.b, self.c, self.d, self.k - m)

    def __complex__(self) -> complex:
        re = self.a + (self.b - self.d) * _S
        im = self.c + (self.b + self.d) * _S
        scale = math.sqrt(2) ** -self.k if self.k % 2 else 2.0 ** -(self.k // 2)
        return complex(re * scale, im * scale)

    @property
    def is_real(self) -> bool:
        return self.c == 0 and self.b == -self.d

    def __float__(self) -> float:
        if not self.is_real:
            raise TypeError(f"{self} is not real")
        return complex(self).real

    def _real_parts(self) -> tuple[int, int, int]:
        """(alpha, beta, j) with value = (alpha + beta sqrt2) / 2^j."""
        if not self.is_real:
            raise TypeError(f"{self} is not real")
        a, b = self.a, self.b
        if self.k % 2 == 0:
            return a, b, self.k // 2
        return 2 * b, a, (self.k + 1) // 2

    def compare(self, other: object) -> int:
        """Exact sign of self - other for real self and a rational or real other."""
        if isinstance(other, Cyclotomic):
            alpha, beta, j = (self - other)._real_parts()
            return _sign_a_plus_b_sqrt2(alpha, beta)
        if isinstance(other, (int, Rational)):
            alpha, beta, j = self._real_parts()
            p, q = other.numerator, other.denominator
            return _sign_a_plus_b_sqrt2(q * alpha - p * (1 << j), q * beta)
        raise TypeError(f"cannot compare Cyclotomic with {type(other).__name__}")

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Cyclotomic)):
            return self.coeffs == Cyclotomic.coerce(other).coeffs
        if isinstance(other, Rational):
            return self.is_real and self.compare(other) == 0
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.k == 0 and self.b == self.c == self.d == 0:
            return hash(self.a)
        return hash(self.coeffs)

    def __lt__(self, other: object) -> bool:
        return self.compare(other) < 0

    def __le__(self, other: object) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: object) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: object) -> bool:
        return self.compare(other) >= 0

    def __bool__(self) -> bool:
        return bool(self.a or self.b or self.c or self.d)

    def __repr__(self) -> str:
        return f"Cyclotomic({self.a}, {self.b}, {self.c}, {self.d}, k={self.k})"

    def __str__(self) -> str:
        terms = [
            f"{v}{s}"
            for v, s in zip((self.a, self.b, self.c, self.d), ("", "w", "w^2", "w^3"))
            if v
        ]
        num = " + ".join(terms) or "0"
        return num if self.k == 0 else f"({num})/sqrt2^{self.k}"


ZERO = Cyclotomic(0)
ONE = Cyclotomic(1)
INV_SQRT2 = Cyclotomic(1, k=1)
