"""Binary forms under the SU(2) substitution action and their coefficient functions.

The degree-12 invariant form

    I12(x, y) = x^11 y + 11 x^6 y^6 - x y^11

spans the unique invariant line of Sym^12(C^2) for the binary icosahedral
group in the invariant frame.  Substituting (x, y) -> (alpha x - conj(beta) y,
beta x + conj(alpha) y) and re-expanding gives coefficient functions A_j on
the 3-sphere: right-invariant, pure left-weight 12 - 2j, spanning the
complexified first eigenspace on the quotient.  The same construction at the
degree-20 Hessian form and the degree-24 square (and the degree-30 Jacobian
form, used only for truncation studies) yields the higher invariant blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .cpoly import CPoly
from .exactnum import IMAG, ONE, SQRT2, SQRT3, SQRT6, NumberFieldElement
from .quatgroup import Quaternion

__all__ = [
    "BinaryForm",
    "act",
    "invariant_form_12",
    "hessian_form_20",
    "square_form_24",
    "jacobian_form_30",
    "coefficient_functions",
    "coefficient_A",
    "restriction_frequency",
    "CoefficientFunction",
    "order3_reference_lift",
    "coefficient_at_reference_z3",
]


class BinaryForm:
    """Homogeneous polynomial in (x, y); coeffs[j] multiplies x^(n-j) y^j."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) != degree + 1:
            raise ValueError("need degree+1 coefficients")
        self.degree = degree
        self.coeffs = coeffs

    @staticmethod
    def from_dict(degree: int, entries: dict) -> "BinaryForm":
        coeffs = [NumberFieldElement.from_rational(0)] * (degree + 1)
        for j, c in entries.items():
            coeffs[j] = NumberFieldElement._coerce(c)
        return BinaryForm(degree, coeffs)

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        n = self.degree + other.degree
        zero = NumberFieldElement.from_rational(0)
        out = [zero] * (n + 1)
        for j1, c1 in enumerate(self.coeffs):
            if not c1:
                continue
            for j2, c2 in enumerate(other.coeffs):
                if c2:
                    out[j1 + j2] = out[j1 + j2] + c1 * c2
        return BinaryForm(n, out)

    def dx(self) -> "BinaryForm":
        n = self.degree
        return BinaryForm(n - 1, [self.coeffs[j] * (n - j) for j in range(n)])

    def dy(self) -> "BinaryForm":
        n = self.degree
        return BinaryForm(n - 1, [self.coeffs[j + 1] * (j + 1) for j in range(n)])

    def __eq__(self, other):
        return (
            isinstance(other, BinaryForm)
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        assert self.degree == other.degree
        return BinaryForm(
            self.degree, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def max_abs(self) -> float:
        vals = []
        for c in self.coeffs:
            vals.append(abs(c.to_complex()) if isinstance(c, NumberFieldElement) else abs(c))
        return max(vals) if vals else 0.0

    def __repr__(self):
        return f"BinaryForm(degree={self.degree})"


def act(z: Quaternion, f: BinaryForm) -> BinaryForm:
    """Substitute (x, y) -> (alpha x - conj(beta) y, beta x + conj(alpha) y).

    Composition follows the matrix order: act(z*w, f) = act(z, act(w, f)).
    """
    alpha, beta = z.alpha(), z.beta()
    exact = z.is_exact()
    if exact:
        ac, bc = alpha.conj(), beta.conj()
        zero, one = NumberFieldElement.from_rational(0), ONE
    else:
        alpha, beta = complex(alpha), complex(beta)
        ac, bc = alpha.conjugate(), beta.conjugate()
        zero, one = 0j, 1.0 + 0j
        coeffs = [
            c.to_complex() if isinstance(c, NumberFieldElement) else complex(c)
            for c in f.coeffs
        ]
        f = BinaryForm(f.degree, coeffs)
    n = f.degree
    # coefficient vectors of u = alpha x - conj(beta) y and v = beta x + conj(alpha) y
    u = [alpha, -bc]
    v = [beta, ac]

    def poly_mul(p, q):
        out = [zero] * (len(p) + len(q) - 1)
        for i, ci in enumerate(p):
            if not ci:
                continue
            for j, cj in enumerate(q):
                if cj:
                    out[i + j] = out[i + j] + ci * cj
        return out

    # powers of u and v up to n
    upows = [[one]]
    vpows = [[one]]
    for _ in range(n):
        upows.append(poly_mul(upows[-1], u))
        vpows.append(poly_mul(vpows[-1], v))
    out = [zero] * (n + 1)
    for j, c in enumerate(f.coeffs):
        if c:
            term = poly_mul(upows[n - j], vpows[j])
            for k in range(n + 1):
                out[k] = out[k] + c * term[k]
    return BinaryForm(n, out)


@lru_cache(maxsize=1)
def invariant_form_12() -> BinaryForm:
    """x^11 y + 11 x^6 y^6 - x y^11."""
    return BinaryForm.from_dict(12, {1: 1, 6: 11, 11: -1})


@lru_cache(maxsize=1)
def hessian_form_20() -> BinaryForm:
    """Degree-20 invariant: Hessian determinant of the degree-12 form."""
    f = invariant_form_12()
    fxx = f.dx().dx()
    fyy = f.dy().dy()
    fxy = f.dx().dy()
    h = fxx * fyy - fxy * fxy
    # normalize the leading coefficient scale to keep entries small
    scale = Fraction(1, 121)
    return BinaryForm(20, [c * scale for c in h.coeffs])


@lru_cache(maxsize=1)
def square_form_24() -> BinaryForm:
    f = invariant_form_12()
    return f * f


@lru_cache(maxsize=1)
def jacobian_form_30() -> BinaryForm:
    """Degree-30 invariant: Jacobian of the degree-12 and degree-20 forms."""
    f = invariant_form_12()
    h = hessian_form_20()
    t = f.dx() * h.dy() - f.dy() * h.dx()
    scale = Fraction(1, 20)
    return BinaryForm(30, [c * scale for c in t.coeffs])


def _coefficient_terms(eta: BinaryForm) -> list[dict]:
    """Term dicts of the coefficient functions of act(z, eta).

    Entry j maps (p, q, r, s) (powers of alpha, conj alpha, beta, conj beta)
    to exact rational coefficients.
    """
    n = eta.degree
    out: list[dict] = [dict() for _ in range(n + 1)]
    for k, c in enumerate(eta.coeffs):
        if not c:
            continue
        m = n - k  # u-power; v-power is k
        for b in range(k + 1):
            for a in range(m + 1):
                j = a + b
                if j > n:
                    continue
                coeff = c * (comb(m, a) * comb(k, b) * (-1) ** a)
                key = (m - a, b, k - b, a)  # alpha, conj alpha, beta, conj beta
                d = out[j]
                w = d.get(key)
                d[key] = coeff if w is None else w + coeff
    return out


@lru_cache(maxsize=8)
def coefficient_functions(degree: int = 12) -> tuple[CPoly, ...]:
    """The coefficient functions of the degree-n invariant form, as CPoly's.

    degree 12 -> the 13 functions A_0..A_12 spanning the complexified first
    eigenspace; degrees 20, 24, 30 -> the higher invariant blocks.
    """
    eta = {
        12: invariant_form_12,
        20: hessian_form_20,
        24: square_form_24,
        30: jacobian_form_30,
    }[degree]()
    return tuple(CPoly(t) for t in _coefficient_terms(eta))


def coefficient_A(j: int, z: Quaternion):
    """A_j(z): the e_j coefficient of act(z, I12); exact at exact points."""
    funcs = coefficient_functions(12)
    if not 0 <= j < len(funcs):
        raise ValueError("j must be in 0..12")
    f = funcs[j]
    if z.is_exact():
        return f.eval_exact(z.alpha(), z.beta())
    pts = z.to_float().reshape(1, 4)
    alpha = pts[:, 0] + 1j * pts[:, 1]
    beta = pts[:, 2] + 1j * pts[:, 3]
    return complex(f.eval_batch(alpha, beta)[0])


def restriction_frequency(j: int, m: int):
    """Quotient frequency of A_j on an order-m exceptional fiber.

    Returns ell/(2m) for ell = 12 - 2j when 2m divides ell, else None
    (the restriction vanishes identically).
    """
    if m not in (2, 3, 5):
        raise ValueError("m must be one of 2, 3, 5")
    ell = 12 - 2 * j
    if ell % (2 * m) != 0:
        return None
    return ell // (2 * m)


@dataclass(frozen=True)
class CoefficientFunction:
    """Coefficient function A_j with its weight bookkeeping."""

    index: int

    @property
    def weight(self) -> int:
        return 12 - 2 * self.index

    def __call__(self, z: Quaternion):
        return coefficient_A(self.index, z)

    def poly(self) -> CPoly:
        return coefficient_functions(12)[self.index]


# -- the paper's order-3 reference point ---------------------------------------
#
# The lift (r, s*exp(-i*pi/4)) with r^2 = (3+sqrt3)/6, s^2 = (3-sqrt3)/6 has
# Hopf image (1,1,1)/sqrt3.  Its coordinates are not in the base field, but
# every A_j value there is: each monomial carries r and s in powers of equal
# parity, and r^2, s^2, r*s = 1/sqrt6 are all exact.


def order3_reference_lift() -> Quaternion:
    """Floating form of the reference point (r, s*exp(-i*pi/4))."""
    r = float(np.sqrt((1 + 1 / np.sqrt(3)) / 2))
    s = float(np.sqrt((1 - 1 / np.sqrt(3)) / 2))
    inv_sqrt2 = float(np.sqrt(0.5))
    return Quaternion(r, 0.0, s * inv_sqrt2, -s * inv_sqrt2)


@lru_cache(maxsize=None)
def coefficient_at_reference_z3(j: int) -> NumberFieldElement:
    """Exact A_j at the reference point, via reduction on squared quantities."""
    r_sq = (3 * ONE + SQRT3) / 6
    s_sq = (3 * ONE - SQRT3) / 6
    rs = SQRT6 / 6  # r*s = sqrt(r^2 s^2) = 1/sqrt6, both factors positive
    omega = (ONE - IMAG) / SQRT2  # exp(-i*pi/4)
    omega_bar = omega.conj()
    maxdeg = 12
    om_pows = [ONE]
    omb_pows = [ONE]
    rsq_pows = [ONE]
    ssq_pows = [ONE]
    for _ in range(maxdeg):
        om_pows.append(om_pows[-1] * omega)
        omb_pows.append(omb_pows[-1] * omega_bar)
        rsq_pows.append(rsq_pows[-1] * r_sq)
        ssq_pows.append(ssq_pows[-1] * s_sq)
    total = NumberFieldElement.from_rational(0)
    for (p, q, rr, ss), c in coefficient_functions(12)[j].terms.items():
        # alpha = conj(alpha) = r;  beta = s*omega, conj(beta) = s*omega_bar
        er = p + q
        es = rr + ss
        if er % 2 != es % 2:
            raise ArithmeticError("mixed-parity monomial cannot be exact")
        phase = om_pows[rr] * omb_pows[ss]
        if er % 2 == 0:
            radial = rsq_pows[er // 2] * ssq_pows[es // 2]
        else:
            radial = rs * rsq_pows[(er - 1) // 2] * ssq_pows[(es - 1) // 2]
        total = total + NumberFieldElement._coerce(c) * phase * radial
    return total
