"""Exact arithmetic in the multiquadratic field Q(i, sqrt2, sqrt3, sqrt5).

Every closed-form constant handled by this package (golden ratio, the
invariant-form coefficient values, the icosahedral Hessian entries) lives in
the degree-16 field Q(i, sqrt2, sqrt3, sqrt5).  Elements are stored as exact
rational coordinate vectors over the basis

    {1, sqrt2, sqrt3, sqrt5, sqrt6, sqrt10, sqrt15, sqrt30} x {1, i},

so equality tests are exact and all ring operations are closed.  Rational
scalars are plain ``fractions.Fraction`` values (arbitrary-precision, always
normalized with positive denominator).
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = [
    "Rational",
    "NumberFieldElement",
    "ZERO",
    "ONE",
    "IMAG",
    "SQRT2",
    "SQRT3",
    "SQRT5",
    "SQRT6",
    "TAU",
    "rational",
]

Rational = Fraction

# Basis index k = 8*ibit + smask, smask bits (1,2,4) flag sqrt2, sqrt3, sqrt5.
_NB = 16
_RADICAND = [1, 2, 3, 6, 5, 10, 15, 30, 1, 2, 3, 6, 5, 10, 15, 30]

# 40-digit truncations of the surds; summed exactly, rounded to float once.
_SURD_DIGITS = 40
_SURD_APPROX = [
    Fraction(math.isqrt(d * 10 ** (2 * _SURD_DIGITS)), 10 ** _SURD_DIGITS)
    for d in _RADICAND[:8]
]

_ZERO_F = Fraction(0)
_ONE_F = Fraction(1)


def rational(x) -> Fraction:
    """Coerce ints / Fractions to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class NumberFieldElement:
    """Immutable element of Q(i, sqrt2, sqrt3, sqrt5).

    Supports +, -, *, /, ** with other elements and exact rationals.
    Hashable, so elements can key dictionaries (used by the group closure).
    """

    __slots__ = ("_coords", "_hash")

    def __init__(self, coords):
        coords = tuple(coords)
        if len(coords) != _NB:
            raise ValueError("need 16 coordinates")
        self._coords = coords
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rational(cls, x) -> "NumberFieldElement":
        c = [_ZERO_F] * _NB
        c[0] = rational(x)
        return cls(c)

    @classmethod
    def from_basis(cls, index: int, coeff) -> "NumberFieldElement":
        c = [_ZERO_F] * _NB
        c[index] = rational(coeff)
        return cls(c)

    @staticmethod
    def _coerce(x):
        if isinstance(x, NumberFieldElement):
            return x
        if isinstance(x, (int, Fraction, _RationalABC)):
            return NumberFieldElement.from_rational(x)
        return NotImplemented

    # -- field structure ---------------------------------------------------

    @property
    def coords(self):
        return self._coords

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._coords, other._coords
        return NumberFieldElement([a[k] + b[k] for k in range(_NB)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._coords, other._coords
        return NumberFieldElement([a[k] - b[k] for k in range(_NB)])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return NumberFieldElement([-c for c in self._coords])

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._coords, other._coords
        out = [_ZERO_F] * _NB
        for k1 in range(_NB):
            c1 = a[k1]
            if not c1:
                continue
            i1, s1 = k1 >> 3, k1 & 7
            for k2 in range(_NB):
                c2 = b[k2]
                if not c2:
                    continue
                i2, s2 = k2 >> 3, k2 & 7
                coeff = c1 * c2 * _RADICAND[s1 & s2]
                if i1 & i2:  # i*i = -1
                    coeff = -coeff
                out[((i1 ^ i2) << 3) | (s1 ^ s2)] += coeff
        return NumberFieldElement(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return (self ** (-n)).inverse()
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def galois(self, flip_i=False, flip2=False, flip3=False, flip5=False):
        """Field automorphism flipping the signs of the chosen generators."""
        fmask = (1 if flip2 else 0) | (2 if flip3 else 0) | (4 if flip5 else 0)
        out = list(self._coords)
        for k in range(_NB):
            c = out[k]
            if not c:
                continue
            neg = (k >> 3) & (1 if flip_i else 0)
            neg ^= bin(k & fmask).count("1") & 1
            if neg:
                out[k] = -c
        return NumberFieldElement(out)

    def conj(self) -> "NumberFieldElement":
        """Complex conjugation i -> -i."""
        return self.galois(flip_i=True)

    def inverse(self) -> "NumberFieldElement":
        """Exact inverse via the product of the 15 nontrivial conjugates."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        prod = None
        for mask in range(1, 16):
            sig = self.galois(mask & 8, mask & 1, mask & 2, mask & 4)
            prod = sig if prod is None else prod * sig
        norm = self * prod
        n = norm._coords[0]
        if any(norm._coords[k] for k in range(1, _NB)):
            raise ArithmeticError("norm form did not reduce to a rational")
        if n == 0:
            raise ZeroDivisionError("inverse of zero field element")
        inv_n = 1 / n
        return NumberFieldElement([c * inv_n for c in prod._coords])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    # -- predicates and parts ----------------------------------------------

    def is_zero(self) -> bool:
        return not any(self._coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self._coords[1:])

    def is_real(self) -> bool:
        return not any(self._coords[8:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is irrational")
        return self._coords[0]

    def real_part(self) -> "NumberFieldElement":
        return NumberFieldElement(self._coords[:8] + (_ZERO_F,) * 8)

    def imag_part(self) -> "NumberFieldElement":
        """Real element y with self = x + i*y."""
        return NumberFieldElement(self._coords[8:] + (_ZERO_F,) * 8)

    # -- floating embedding --------------------------------------------------

    def to_complex(self) -> complex:
        re = _ZERO_F
        im = _ZERO_F
        for s in range(8):
            c = self._coords[s]
            if c:
                re += c * _SURD_APPROX[s]
            c = self._coords[8 | s]
            if c:
                im += c * _SURD_APPROX[s]
        return complex(float(re), float(im))

    def to_float(self) -> float:
        if not self.is_real():
            raise ValueError("element has an imaginary part")
        re = _ZERO_F
        for s in range(8):
            c = self._coords[s]
            if c:
                re += c * _SURD_APPROX[s]
        return float(re)

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._coords == other._coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._coords)
        return self._hash

    def __repr__(self):
        names = ["", "*r2", "*r3", "*r6", "*r5", "*r10", "*r15", "*r30"]
        parts = []
        for k, c in enumerate(self._coords):
            if not c:
                continue
            term = f"{c}{names[k & 7]}"
            if k >> 3:
                term = f"i*{term}" if (k & 7) == 0 else f"i*({term})"
            parts.append(term)
        return " + ".join(parts) if parts else "0"

    def decimal_str(self, digits: int = 17) -> str:
        z = self.to_complex()
        if self.is_real():
            return f"{z.real:.{digits}g}"
        return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


ZERO = NumberFieldElement.from_rational(0)
ONE = NumberFieldElement.from_rational(1)
IMAG = NumberFieldElement.from_basis(8, 1)
SQRT2 = NumberFieldElement.from_basis(1, 1)
SQRT3 = NumberFieldElement.from_basis(2, 1)
SQRT6 = NumberFieldElement.from_basis(3, 1)
SQRT5 = NumberFieldElement.from_basis(4, 1)

#: golden ratio (1 + sqrt5)/2
TAU = (ONE + SQRT5) / 2
