"""Polynomials on S^3 in the complex coordinates (alpha, conj alpha, beta, conj beta).

Functions on the 3-sphere built from SU(2) matrix coefficients are sparse in
the monomial basis alpha^p conj(alpha)^q beta^r conj(beta)^s, and their
L^2(S^3) pairings reduce to the closed-form moments

    avg( |alpha|^(2p) |beta|^(2r) ) = p! r! / (p + r + 1)!     (else zero),

which makes exact Gram computations cheap.  Coefficients are either exact
(NumberFieldElement) or floating (complex); the two paths share the same
term-dict representation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .exactnum import IMAG, NumberFieldElement, ONE

__all__ = ["CPoly", "monomial_average", "pair_average"]


@lru_cache(maxsize=None)
def monomial_average(p: int, q: int, r: int, s: int) -> Fraction:
    """Exact average of alpha^p conj(alpha)^q beta^r conj(beta)^s over S^3."""
    if p != q or r != s:
        return Fraction(0)
    return Fraction(factorial(p) * factorial(r), factorial(p + r + 1))


_I_HALF = IMAG * Fraction(1, 2)
_NEG_I_HALF = -_I_HALF


class CPoly:
    """Sparse polynomial in (alpha, conj alpha, beta, conj beta).

    ``terms`` maps exponent tuples (p, q, r, s) to coefficients, which are
    NumberFieldElement (exact mode) or python complex (float mode).
    Real-valued functions are represented by conjugation-symmetric terms.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = {k: v for k, v in terms.items() if v}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero() -> "CPoly":
        return CPoly({})

    @staticmethod
    def constant(c) -> "CPoly":
        return CPoly({(0, 0, 0, 0): c})

    def is_exact(self) -> bool:
        for v in self.terms.values():
            return isinstance(v, NumberFieldElement)
        return True

    def to_float(self) -> "CPoly":
        out = {}
        for k, v in self.terms.items():
            out[k] = v.to_complex() if isinstance(v, NumberFieldElement) else complex(v)
        return CPoly(out)

    # -- ring operations ------------------------------------------------------

    def __add__(self, other: "CPoly") -> "CPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            out[k] = v if w is None else w + v
        return CPoly(out)

    def __sub__(self, other: "CPoly") -> "CPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            out[k] = -v if w is None else w - v
        return CPoly(out)

    def __neg__(self) -> "CPoly":
        return CPoly({k: -v for k, v in self.terms.items()})

    def scale(self, c) -> "CPoly":
        return CPoly({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "CPoly") -> "CPoly":
        out: dict = {}
        for (p1, q1, r1, s1), c1 in self.terms.items():
            for (p2, q2, r2, s2), c2 in other.terms.items():
                key = (p1 + p2, q1 + q2, r1 + r2, s1 + s2)
                c = c1 * c2
                w = out.get(key)
                out[key] = c if w is None else w + c
        return CPoly(out)

    def conj(self) -> "CPoly":
        out = {}
        for (p, q, r, s), c in self.terms.items():
            cc = c.conj() if isinstance(c, NumberFieldElement) else c.conjugate()
            out[(q, p, s, r)] = cc
        return CPoly(out)

    def real_part(self) -> "CPoly":
        half = Fraction(1, 2) if self.is_exact() else 0.5
        return (self + self.conj()).scale(half)

    def imag_part(self) -> "CPoly":
        c = _NEG_I_HALF if self.is_exact() else -0.5j
        return (self - self.conj()).scale(c)

    # -- calculus --------------------------------------------------------------

    def _wirtinger(self, slot: int) -> "CPoly":
        out: dict = {}
        for key, c in self.terms.items():
            e = key[slot]
            if e == 0:
                continue
            k2 = list(key)
            k2[slot] = e - 1
            k2 = tuple(k2)
            v = c * e
            w = out.get(k2)
            out[k2] = v if w is None else w + v
        return CPoly(out)

    def derivative(self, axis: int) -> "CPoly":
        """Ambient partial derivative along (a, b, c, d) in R^4."""
        if axis == 0:
            return self._wirtinger(0) + self._wirtinger(1)
        if axis == 1:
            d = self._wirtinger(0) - self._wirtinger(1)
            return d.scale(IMAG if self.is_exact() else 1j)
        if axis == 2:
            return self._wirtinger(2) + self._wirtinger(3)
        if axis == 3:
            d = self._wirtinger(2) - self._wirtinger(3)
            return d.scale(IMAG if self.is_exact() else 1j)
        raise ValueError("axis must be 0..3")

    def gradient(self) -> list["CPoly"]:
        return [self.derivative(k) for k in range(4)]

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(k) for k in self.terms}
        return len(degs) <= 1

    # -- evaluation --------------------------------------------------------------

    def eval_exact(self, alpha: NumberFieldElement, beta: NumberFieldElement):
        ac = alpha.conj()
        bc = beta.conj()
        maxdeg = self.degree()
        pows_a = _power_table(alpha, maxdeg)
        pows_ac = _power_table(ac, maxdeg)
        pows_b = _power_table(beta, maxdeg)
        pows_bc = _power_table(bc, maxdeg)
        total = NumberFieldElement.from_rational(0)
        for (p, q, r, s), c in self.terms.items():
            total = total + c * pows_a[p] * pows_ac[q] * pows_b[r] * pows_bc[s]
        return total

    def eval_batch(self, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
        """Evaluate at arrays of complex (alpha, beta); returns complex array."""
        maxdeg = self.degree()
        pa = _np_powers(alpha, maxdeg)
        pac = _np_powers(alpha.conj(), maxdeg)
        pb = _np_powers(beta, maxdeg)
        pbc = _np_powers(beta.conj(), maxdeg)
        out = np.zeros(alpha.shape, dtype=complex)
        for (p, q, r, s), c in self.terms.items():
            cc = c.to_complex() if isinstance(c, NumberFieldElement) else c
            out += cc * (pa[p] * pac[q] * pb[r] * pbc[s])
        return out

    def eval_points(self, pts: np.ndarray) -> np.ndarray:
        """Evaluate at an (..., 4) array of S^3 points; returns real array."""
        alpha = pts[..., 0] + 1j * pts[..., 1]
        beta = pts[..., 2] + 1j * pts[..., 3]
        return self.eval_batch(alpha, beta).real

    # -- exact integration ----------------------------------------------------

    def average(self):
        """Exact (or floating) average over S^3."""
        exact = self.is_exact()
        total = NumberFieldElement.from_rational(0) if exact else 0j
        for key, c in self.terms.items():
            m = monomial_average(*key)
            if m:
                total = total + c * m
        return total

    def pair(self, other: "CPoly"):
        """avg(self * other) without forming the product polynomial."""
        exact = self.is_exact() and other.is_exact()
        total = NumberFieldElement.from_rational(0) if exact else 0j
        for (p1, q1, r1, s1), c1 in self.terms.items():
            for (p2, q2, r2, s2), c2 in other.terms.items():
                m = monomial_average(p1 + p2, q1 + q2, r1 + r2, s1 + s2)
                if m:
                    if exact:
                        total = total + c1 * c2 * m
                    else:
                        a = c1.to_complex() if isinstance(c1, NumberFieldElement) else c1
                        b = c2.to_complex() if isinstance(c2, NumberFieldElement) else c2
                        total = total + a * b * float(m)
        return total

    # -- conversions -------------------------------------------------------------

    def to_real_coefficients(self) -> dict:
        """Expand into real R^4 monomials x0^e0 x1^e1 x2^e2 x3^e3.

        Returns a dict mapping exponent tuples to NumberFieldElement
        coefficients (exact input required).
        """
        if not self.is_exact():
            raise TypeError("exact coefficients required")
        out: dict = {}
        for (p, q, r, s), c in self.terms.items():
            for e1, c1 in _linear_power(p, False).items():
                for e2, c2 in _linear_power(q, True).items():
                    for e3, c3 in _linear_power(r, False).items():
                        for e4, c4 in _linear_power(s, True).items():
                            key = (
                                e1[0] + e2[0],
                                e1[1] + e2[1],
                                e3[0] + e4[0],
                                e3[1] + e4[1],
                            )
                            v = c * c1 * c2 * c3 * c4
                            w = out.get(key)
                            out[key] = v if w is None else w + v
        return {k: v for k, v in out.items() if not v.is_zero()}

    @staticmethod
    def from_real_coefficients(coeffs: dict) -> "CPoly":
        """Inverse of :meth:`to_real_coefficients` (exact)."""
        half = NumberFieldElement.from_rational(Fraction(1, 2))
        out = CPoly.zero()
        x0 = CPoly({(1, 0, 0, 0): half, (0, 1, 0, 0): half})
        x1 = CPoly({(1, 0, 0, 0): _NEG_I_HALF, (0, 1, 0, 0): _I_HALF})
        x2 = CPoly({(0, 0, 1, 0): half, (0, 0, 0, 1): half})
        x3 = CPoly({(0, 0, 1, 0): _NEG_I_HALF, (0, 0, 0, 1): _I_HALF})
        gens = (x0, x1, x2, x3)
        for key, c in coeffs.items():
            term = CPoly.constant(NumberFieldElement._coerce(c))
            for slot, e in enumerate(key):
                for _ in range(e):
                    term = term * gens[slot]
            out = out + term
        return out

    def __repr__(self):
        n = len(self.terms)
        return f"CPoly({n} terms, degree {self.degree()})"


@lru_cache(maxsize=None)
def _linear_power(n: int, conjugate: bool) -> dict:
    """Expansion of (x + iy)^n (or (x - iy)^n) as {(ex, ey): coeff}."""
    unit = IMAG.conj() if conjugate else IMAG
    out: dict = {}
    coeff = ONE
    # binomial expansion; coeff of x^(n-k) y^k is C(n,k) * (+-i)^k
    from math import comb

    ipow = ONE
    for k in range(n + 1):
        out[(n - k, k)] = NumberFieldElement.from_rational(comb(n, k)) * ipow
        ipow = ipow * unit
    del coeff
    return out


def _power_table(x, n: int) -> list:
    out = [NumberFieldElement.from_rational(1)]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def _np_powers(x: np.ndarray, n: int) -> list[np.ndarray]:
    out = [np.ones_like(x)]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def pair_average(f: CPoly, g: CPoly):
    return f.pair(g)
