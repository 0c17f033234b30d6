"""Polynomials on S^2 and S^3 with exact Laplacian and exact moment integration.

Houses the golden-ratio invariant sextic, its harmonic correction, the Hopf
lift to a degree-12 polynomial on R^4, and the closed-form even-moment
integration used as the exact oracle for every sphere integral.  Exponents
are sparse multi-indices; coefficients are exact field elements or floats,
sharing one code path.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .exactnum import NumberFieldElement, TAU

__all__ = [
    "SpherePolynomial",
    "invariant_sextic",
    "corrected_sextic",
    "harmonic_correction",
    "hopf_lift",
    "sphere_average",
    "sphere_integral",
    "manifold_integral",
    "sphere_laplacian_eigencheck",
    "harmonic_projection",
]

_ZERO = NumberFieldElement.from_rational(0)


def _coerce_scalar(c):
    if isinstance(c, (NumberFieldElement, float)):
        return c
    if isinstance(c, (int, Fraction)):
        return NumberFieldElement.from_rational(c)
    raise TypeError(f"bad coefficient {c!r}")


class SpherePolynomial:
    """Sparse polynomial on R^dim restricted to the unit sphere."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: dict):
        if dim not in (3, 4):
            raise ValueError("ambient dimension must be 3 or 4")
        self.dim = dim
        self.coeffs = {k: v for k, v in coeffs.items() if v}

    # -- constructors -------------------------------------------------------

    @staticmethod
    def variable(dim: int, axis: int) -> "SpherePolynomial":
        e = [0] * dim
        e[axis] = 1
        return SpherePolynomial(dim, {tuple(e): NumberFieldElement.from_rational(1)})

    @staticmethod
    def constant(dim: int, c) -> "SpherePolynomial":
        return SpherePolynomial(dim, {(0,) * dim: _coerce_scalar(c)})

    def is_exact(self) -> bool:
        for v in self.coeffs.values():
            return isinstance(v, NumberFieldElement)
        return True

    def to_float(self) -> "SpherePolynomial":
        return SpherePolynomial(
            self.dim,
            {
                k: (v.to_float() if isinstance(v, NumberFieldElement) else float(v))
                for k, v in self.coeffs.items()
            },
        )

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "SpherePolynomial") -> "SpherePolynomial":
        assert self.dim == other.dim
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            w = out.get(k)
            out[k] = v if w is None else w + v
        return SpherePolynomial(self.dim, out)

    def __sub__(self, other: "SpherePolynomial") -> "SpherePolynomial":
        return self + other.scale(-1)

    def scale(self, c) -> "SpherePolynomial":
        if isinstance(c, (int, Fraction)) and self.is_exact():
            c = NumberFieldElement.from_rational(c)
        return SpherePolynomial(self.dim, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other: "SpherePolynomial") -> "SpherePolynomial":
        assert self.dim == other.dim
        out: dict = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                c = c1 * c2
                w = out.get(key)
                out[key] = c if w is None else w + c
        return SpherePolynomial(self.dim, out)

    def __pow__(self, n: int) -> "SpherePolynomial":
        result = SpherePolynomial.constant(self.dim, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        return (
            isinstance(other, SpherePolynomial)
            and self.dim == other.dim
            and self.coeffs == other.coeffs
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return max((sum(k) for k in self.coeffs), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(k) for k in self.coeffs}) <= 1

    # -- calculus ---------------------------------------------------------------

    def derivative(self, axis: int) -> "SpherePolynomial":
        out: dict = {}
        for k, c in self.coeffs.items():
            e = k[axis]
            if e == 0:
                continue
            k2 = list(k)
            k2[axis] = e - 1
            key = tuple(k2)
            v = c * e
            w = out.get(key)
            out[key] = v if w is None else w + v
        return SpherePolynomial(self.dim, out)

    def laplacian(self) -> "SpherePolynomial":
        out = SpherePolynomial(self.dim, {})
        for axis in range(self.dim):
            out = out + self.derivative(axis).derivative(axis)
        return out

    def gradient(self) -> list["SpherePolynomial"]:
        return [self.derivative(k) for k in range(self.dim)]

    # -- substitution --------------------------------------------------------------

    def substitute(self, images: list["SpherePolynomial"]) -> "SpherePolynomial":
        """Compose with x_i -> images[i] (a polynomial map)."""
        if len(images) != self.dim:
            raise ValueError("need one image per variable")
        dim_out = images[0].dim
        total = SpherePolynomial(dim_out, {})
        for k, c in self.coeffs.items():
            term = SpherePolynomial.constant(dim_out, 1)
            if not self.is_exact():
                term = term.to_float()
            for axis, e in enumerate(k):
                for _ in range(e):
                    term = term * images[axis]
            total = total + term.scale(c)
        return total

    def rotate(self, rows) -> "SpherePolynomial":
        """Compose with the linear map given by matrix rows (exact or float)."""
        images = []
        for j in range(self.dim):
            coeffs = {}
            for i in range(self.dim):
                e = [0] * self.dim
                e[i] = 1
                c = rows[j][i]
                if isinstance(c, (int, Fraction)):
                    c = NumberFieldElement.from_rational(c)
                if isinstance(c, NumberFieldElement) and c.is_zero():
                    continue
                if isinstance(c, float) and c == 0.0:
                    continue
                coeffs[tuple(e)] = c
            images.append(SpherePolynomial(self.dim, coeffs))
        return self.substitute(images)

    # -- canonical form on the sphere ------------------------------------------------

    def canonical_on_sphere(self) -> "SpherePolynomial":
        """Reduce modulo |x|^2 - 1 by eliminating even powers of the last variable."""
        last = self.dim - 1
        rest_sq = SpherePolynomial(self.dim, {})
        one = SpherePolynomial.constant(self.dim, 1)
        for i in range(last):
            xi = SpherePolynomial.variable(self.dim, i)
            rest_sq = rest_sq + xi * xi
        complement = one - rest_sq  # equals x_last^2 on the sphere
        out = SpherePolynomial(self.dim, {})
        if not self.is_exact():
            complement = complement.to_float()
            one = one.to_float()
        for k, c in self.coeffs.items():
            e = k[last]
            k2 = list(k)
            k2[last] = e % 2
            base = SpherePolynomial(self.dim, {tuple(k2): c})
            for _ in range(e // 2):
                base = base * complement
            out = out + base
        return out

    def equals_on_sphere(self, other: "SpherePolynomial") -> bool:
        return (self - other).canonical_on_sphere().is_zero()

    # -- evaluation ------------------------------------------------------------------

    def eval_points(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        maxdeg = self.degree()
        pows = [
            [np.ones(pts.shape[0])] for _ in range(self.dim)
        ]
        for axis in range(self.dim):
            for _ in range(maxdeg):
                pows[axis].append(pows[axis][-1] * pts[:, axis])
        out = np.zeros(pts.shape[0])
        for k, c in self.coeffs.items():
            cf = c.to_float() if isinstance(c, NumberFieldElement) else c
            term = np.full(pts.shape[0], cf)
            for axis, e in enumerate(k):
                if e:
                    term = term * pows[axis][e]
            out += term
        return out[0] if single else out

    def eval_exact(self, point) -> NumberFieldElement:
        total = NumberFieldElement.from_rational(0)
        for k, c in self.coeffs.items():
            term = c
            for axis, e in enumerate(k):
                for _ in range(e):
                    term = term * point[axis]
            total = total + term
        return total

    def __repr__(self):
        return f"SpherePolynomial(dim={self.dim}, {len(self.coeffs)} terms, degree {self.degree()})"


# -- exact moments ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _monomial_average(dim: int, key: tuple) -> Fraction:
    """Exact average of x^key over S^(dim-1): prod (e_i-1)!! / prod (dim+2j)."""
    if any(e % 2 for e in key):
        return Fraction(0)
    total = sum(key) // 2
    num = 1
    for e in key:
        num *= _double_factorial(e - 1)
    den = 1
    for j in range(total):
        den *= dim + 2 * j
    return Fraction(num, den)


def _double_factorial(n: int) -> int:
    if n <= 0:
        return 1
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def sphere_average(f: SpherePolynomial):
    """Exact (or floating) average of f over the unit sphere."""
    exact = f.is_exact()
    total = NumberFieldElement.from_rational(0) if exact else 0.0
    for k, c in f.coeffs.items():
        m = _monomial_average(f.dim, k)
        if m:
            total = total + c * (m if exact else float(m))
    return total


def surface_measure(dim: int) -> float:
    """|S^(dim-1)|: 4*pi for dim 3, 2*pi^2 for dim 4."""
    if dim == 3:
        return 4.0 * np.pi
    if dim == 4:
        return 2.0 * np.pi ** 2
    raise ValueError("dim must be 3 or 4")


def sphere_integral(f: SpherePolynomial) -> float:
    """Float integral over the unit sphere (average times surface measure)."""
    avg = sphere_average(f)
    if isinstance(avg, NumberFieldElement):
        avg = avg.to_float()
    return avg * surface_measure(f.dim)


def manifold_integral(f: SpherePolynomial) -> float:
    """Integral over the quotient manifold: the S^3 integral divided by 120."""
    if f.dim != 4:
        raise ValueError("quotient integrals require an S^3 polynomial")
    return sphere_integral(f) / 120.0


# -- harmonic decomposition -----------------------------------------------------------


def harmonic_projection(f: SpherePolynomial) -> SpherePolynomial:
    """Degree-n harmonic component of a homogeneous degree-n polynomial.

    Uses h = sum_k a_k r^(2k) Lap^k f with a_0 = 1 and
    a_(k+1) = -a_k / (2(k+1)(d + 2n - 2k - 4)).
    """
    if not f.is_homogeneous():
        raise ValueError("homogeneous input required")
    n = f.degree()
    d = f.dim
    r2 = SpherePolynomial(d, {})
    for i in range(d):
        xi = SpherePolynomial.variable(d, i)
        r2 = r2 + xi * xi
    if not f.is_exact():
        r2 = r2.to_float()
    out = SpherePolynomial(d, {})
    a = Fraction(1)
    lap = f
    r2k = SpherePolynomial.constant(d, 1) if f.is_exact() else SpherePolynomial.constant(d, 1).to_float()
    k = 0
    while not lap.is_zero():
        out = out + r2k.scale(a if f.is_exact() else float(a)) * lap
        a = -a / (2 * (k + 1) * (d + 2 * n - 2 * k - 4))
        lap = lap.laplacian()
        r2k = r2k * r2
        k += 1
    return out


def sphere_laplacian_eigencheck(f: SpherePolynomial, n: int) -> bool:
    """Certify that f restricts to a sphere eigenfunction of eigenvalue n(n+d-2).

    True iff f is homogeneous of degree n and equals its harmonic projection
    (a homogeneous harmonic restricts to an eigenfunction with that eigenvalue).
    """
    if not f.is_homogeneous() or f.degree() != n:
        raise ValueError("homogeneous degree-n input required")
    h = harmonic_projection(f)
    diff = f - h
    if f.is_exact():
        return diff.is_zero()
    scale = max((abs(c) for c in f.coeffs.values()), default=1.0)
    return all(abs(c) <= 1e-10 * scale for c in diff.coeffs.values())


def harmonic_correction(p: SpherePolynomial) -> SpherePolynomial:
    """Add the unique multiple of (x^2+y^2+z^2)^(deg/2) that kills the Laplacian.

    Requires Lap(p) to be an exact multiple of the invariant quartic power
    r^(deg-2); raises otherwise.
    """
    n = p.degree()
    if n % 2:
        raise ValueError("even degree required")
    d = p.dim
    lap = p.laplacian()
    r2 = SpherePolynomial(d, {})
    for i in range(d):
        xi = SpherePolynomial.variable(d, i)
        r2 = r2 + xi * xi
    rpow = SpherePolynomial.constant(d, 1)
    for _ in range(n // 2 - 1):
        rpow = rpow * r2
    if lap.is_zero():
        return p
    # kappa from any matching monomial, then verified exactly
    key = next(iter(rpow.coeffs))
    if key not in lap.coeffs:
        raise ValueError("Laplacian is not proportional to the invariant power")
    kappa = lap.coeffs[key] / rpow.coeffs[key]
    if not (lap - rpow.scale(kappa)).is_zero():
        raise ValueError("Laplacian is not proportional to the invariant power")
    # Lap r^n = n(n+d-2) r^(n-2)
    c = -kappa * Fraction(1, n * (n + d - 2))
    rtop = rpow * r2
    corrected = p + rtop.scale(c)
    assert corrected.laplacian().is_zero()
    return corrected


def sextic_trace_constant(p: SpherePolynomial) -> NumberFieldElement:
    """The proportionality constant kappa with Lap(p) = kappa * r^(deg-2)."""
    n = p.degree()
    d = p.dim
    lap = p.laplacian()
    r2 = SpherePolynomial(d, {})
    for i in range(d):
        xi = SpherePolynomial.variable(d, i)
        r2 = r2 + xi * xi
    rpow = SpherePolynomial.constant(d, 1)
    for _ in range(n // 2 - 1):
        rpow = rpow * r2
    key = next(iter(rpow.coeffs))
    kappa = lap.coeffs[key] / rpow.coeffs[key]
    if not (lap - rpow.scale(kappa)).is_zero():
        raise ValueError("Laplacian is not proportional to the invariant power")
    return kappa


# -- the invariant sextic and its lift ---------------------------------------------------


@lru_cache(maxsize=1)
def invariant_sextic() -> SpherePolynomial:
    """(tau^2 x^2 - y^2)(tau^2 y^2 - z^2)(tau^2 z^2 - x^2)."""
    x = SpherePolynomial.variable(3, 0)
    y = SpherePolynomial.variable(3, 1)
    z = SpherePolynomial.variable(3, 2)
    t2 = TAU * TAU
    a = (x * x).scale(t2) - y * y
    b = (y * y).scale(t2) - z * z
    c = (z * z).scale(t2) - x * x
    return a * b * c


@lru_cache(maxsize=1)
def corrected_sextic() -> SpherePolynomial:
    """The harmonic correction of the invariant sextic."""
    return harmonic_correction(invariant_sextic())


def hopf_map_components() -> list[SpherePolynomial]:
    """The Hopf map written as three quadratics on R^4."""
    a = SpherePolynomial.variable(4, 0)
    b = SpherePolynomial.variable(4, 1)
    c = SpherePolynomial.variable(4, 2)
    d = SpherePolynomial.variable(4, 3)
    x = (a * c + b * d).scale(2)
    y = (b * c - a * d).scale(2)
    z = a * a + b * b - c * c - d * d
    return [x, y, z]


def hopf_lift(f: SpherePolynomial) -> SpherePolynomial:
    """Compose an R^3 polynomial with the Hopf map (degree doubles)."""
    if f.dim != 3:
        raise ValueError("hopf_lift expects an R^3 polynomial")
    return f.substitute(hopf_map_components())


@lru_cache(maxsize=1)
def cartesian_seed() -> SpherePolynomial:
    """Hopf lift of the corrected sextic: a degree-12 harmonic on R^4."""
    return hopf_lift(corrected_sextic())
