"""The binary icosahedral group as unit quaternions, in two frames.

A quaternion q = a + b*i + c*j + d*k corresponds to the special unitary
matrix with alpha = a + b*i and beta = c + d*i; the Hopf map used throughout
is (alpha, beta) -> (2*Re(alpha*conj(beta)), 2*Im(alpha*conj(beta)),
|alpha|^2 - |beta|^2).

Two realizations of the group are provided:

* ``icosahedral_group()`` -- the exact icosian table, generated by closure
  from a golden-ratio pair.  All 120 elements have number-field coordinates,
  so the multiplication table, element orders and the induced rotation
  action on the Hopf base are computed with zero rounding.

* ``invariant_frame()`` -- the conjugate realization that stabilizes the
  degree-12 invariant binary form x^11 y + 11 x^6 y^6 - x y^11.  In this
  frame the vertex fiber passes through (alpha, beta) = (1, 0).  No exact
  realization of this frame exists over Q(i, sqrt2, sqrt3, sqrt5): its
  fiber stabilizer at (1,0) would contain cos(pi/5) + i*sin(pi/5), and
  sin(pi/5) = sqrt((5-sqrt5)/8) generates a quadratic extension of the
  field.  The frame is therefore stored in floating point; its product
  table is recovered exactly by nearest-element matching (elements of a
  free finite action are separated by 2*sin(pi/10) ~ 0.618).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactnum import IMAG, ONE, TAU, ZERO, NumberFieldElement

__all__ = [
    "Quaternion",
    "GroupTable",
    "FrameGroup",
    "icosahedral_group",
    "invariant_frame",
    "standard_generators",
    "order2_lift",
    "order3_lift",
    "order5_lift",
    "hopf",
    "hopf_exact",
    "hopf_batch",
]

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Quaternion:
    """Unit quaternion with exact or floating components."""

    a: object
    b: object
    c: object
    d: object

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm_sq(self):
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def is_exact(self) -> bool:
        return isinstance(self.a, NumberFieldElement)

    def alpha(self):
        """First complex SU(2) entry a + b*i."""
        if self.is_exact():
            return self.a + IMAG * self.b
        return complex(self.a, self.b)

    def beta(self):
        """Second complex SU(2) entry c + d*i."""
        if self.is_exact():
            return self.c + IMAG * self.d
        return complex(self.c, self.d)

    def to_float(self) -> np.ndarray:
        if self.is_exact():
            return np.array(
                [self.a.to_float(), self.b.to_float(), self.c.to_float(), self.d.to_float()]
            )
        return np.array([self.a, self.b, self.c, self.d], dtype=float)

    @staticmethod
    def from_float(v) -> "Quaternion":
        a, b, c, d = (float(x) for x in v)
        return Quaternion(a, b, c, d)

    @staticmethod
    def exact(a, b, c, d) -> "Quaternion":
        wrap = NumberFieldElement._coerce
        return Quaternion(wrap(a), wrap(b), wrap(c), wrap(d))


IDENTITY = Quaternion(ONE, ZERO, ZERO, ZERO)


def standard_generators() -> list[Quaternion]:
    """Golden-ratio generator pair for the exact 120-element icosian group."""
    tinv = TAU - 1  # 1/tau
    g1 = Quaternion(TAU * _HALF, tinv * _HALF, ONE * _HALF, ZERO)
    g2 = Quaternion(ONE * _HALF, ONE * _HALF, ONE * _HALF, ONE * _HALF)
    return [g1, g2]


def order5_lift() -> Quaternion:
    """Lift of the vertex fiber through the base point: (alpha, beta) = (1, 0)."""
    return IDENTITY


def order2_lift() -> Quaternion:
    """Lift of an edge-midpoint fiber: (alpha, beta) = (i, 1)/sqrt2."""
    h = ONE / NumberFieldElement.from_basis(1, 1)  # 1/sqrt2
    return Quaternion(ZERO, h, h, ZERO)


def order3_lift() -> Quaternion:
    """Floating lift of a face-center fiber of the invariant frame.

    The face axis adjacent to the vertex fiber of (1,0) sits at
    (sqrt((10-2*sqrt5)/15), 0, sqrt((5+2*sqrt5)/15)) on the Hopf base; a
    lift with real (alpha, beta) is (r, s) with r^2 = (1+z_f)/2,
    s^2 = (1-z_f)/2.
    """
    zf = np.sqrt((5 + 2 * np.sqrt(5)) / 15)
    r = float(np.sqrt((1 + zf) / 2))
    s = float(np.sqrt((1 - zf) / 2))
    return Quaternion(r, 0.0, s, 0.0)


def hopf(z: Quaternion):
    """Hopf image (2*Re(alpha*conj(beta)), 2*Im(..), |alpha|^2-|beta|^2)."""
    a, b, c, d = z.a, z.b, z.c, z.d
    two = 2 if z.is_exact() else 2.0
    return (
        two * (a * c + b * d),
        two * (b * c - a * d),
        a * a + b * b - c * c - d * d,
    )


def hopf_exact(z: Quaternion) -> tuple[NumberFieldElement, ...]:
    if not z.is_exact():
        raise TypeError("exact quaternion required")
    return hopf(z)


def hopf_batch(v: np.ndarray) -> np.ndarray:
    """Vectorized Hopf map for an (..., 4) array of S^3 points."""
    a, b, c, d = v[..., 0], v[..., 1], v[..., 2], v[..., 3]
    return np.stack(
        [2 * (a * c + b * d), 2 * (b * c - a * d), a * a + b * b - c * c - d * d], axis=-1
    )


def _as_float4(z) -> np.ndarray:
    if isinstance(z, Quaternion):
        return z.to_float()
    return np.asarray(z, dtype=float)


class GroupTable:
    """Finite subgroup of exact unit quaternions with full product tables."""

    def __init__(self, elements: list[Quaternion]):
        self.elements = elements
        self.order = len(elements)
        self._index = {e: k for k, e in enumerate(elements)}
        n = self.order
        self.product = np.empty((n, n), dtype=np.int16)
        for i, gi in enumerate(elements):
            for j, gj in enumerate(elements):
                self.product[i, j] = self._index[gi * gj]
        self.inverse = np.empty(n, dtype=np.int16)
        for i, g in enumerate(elements):
            self.inverse[i] = self._index[g.conjugate()]
        self.identity_index = self._index[IDENTITY]
        self.float_elements = np.stack([g.to_float() for g in elements])
        self._rotations = None
        self.min_coset_separation = self._coset_separation()

    # -- construction ------------------------------------------------------

    @classmethod
    def generate(cls, generators: list[Quaternion], bound: int = 10_000) -> "GroupTable":
        """Closure of the generators under multiplication.

        Raises if the closure exceeds ``bound`` products (wrong generators).
        """
        for g in generators:
            if not g.is_exact():
                raise TypeError("group generation requires exact quaternions")
            if g.norm_sq() != ONE:
                raise ValueError("generator is not a unit quaternion")
        seen = {IDENTITY}
        frontier = [IDENTITY]
        work = 0
        while frontier:
            nxt = []
            for x in frontier:
                for g in generators:
                    work += 1
                    if work > bound:
                        raise RuntimeError(
                            f"group closure exceeded {bound} products; wrong generators?"
                        )
                    y = x * g
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        elements = sorted(seen, key=lambda q: tuple(-x for x in q.to_float()))
        table = cls(elements)
        table._check_axioms()
        return table

    def _check_axioms(self):
        n = self.order
        assert np.all(self.product[self.identity_index] == np.arange(n))
        assert np.all(self.product[np.arange(n), self.inverse] == self.identity_index)

    def _coset_separation(self) -> float:
        # dist(z, z*h)^2 = 2 - 2*Re(h) for unit quaternions, independent of z
        best = 4.0
        for k in range(self.order):
            if k == self.identity_index:
                continue
            best = min(best, 2.0 - 2.0 * float(self.float_elements[k, 0]))
        return float(np.sqrt(best))

    # -- queries -------------------------------------------------------------

    def index_of(self, g: Quaternion) -> int:
        return self._index[g]

    def element_order(self, k: int) -> int:
        j, n = k, 1
        while j != self.identity_index:
            j = self.product[j, k]
            n += 1
        return n

    def order_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for k in range(self.order):
            o = self.element_order(k)
            hist[o] = hist.get(o, 0) + 1
        return dict(sorted(hist.items()))

    @property
    def rotations(self) -> list[tuple]:
        """Exact 3x3 matrices of the induced rotation action on the Hopf base.

        Column m of R_h is read off from hopf(q_m * h) at reference points
        q_m whose Hopf images are e1, -e2, e3.
        """
        if self._rotations is None:
            h = ONE / NumberFieldElement.from_basis(1, 1)
            q1 = Quaternion(h, ZERO, h, ZERO)  # hopf = e1
            q2 = Quaternion(h, ZERO, ZERO, h)  # hopf = -e2
            q3 = IDENTITY  # hopf = e3
            rots = []
            for g in self.elements:
                c1 = hopf(q1 * g)
                c2 = tuple(-x for x in hopf(q2 * g))
                c3 = hopf(q3 * g)
                rots.append(tuple(zip(c1, c2, c3)))  # rows of R_h
            self._rotations = rots
        return self._rotations

    def rotations_float(self) -> np.ndarray:
        mats = np.empty((self.order, 3, 3))
        for k, rows in enumerate(self.rotations):
            for i in range(3):
                for j in range(3):
                    mats[k, i, j] = rows[i][j].to_float()
        return mats

    def hopf_orbit(self, p: tuple) -> list[tuple]:
        """Orbit of an exact Hopf-base point under the induced rotations."""
        seen = []
        for rows in self.rotations:
            q = tuple(
                rows[i][0] * p[0] + rows[i][1] * p[1] + rows[i][2] * p[2] for i in range(3)
            )
            if q not in seen:
                seen.append(q)
        return seen

    def invariant_dimension(self, n: int) -> int:
        """dim of the degree-n invariant binary forms, by character averaging.

        Uses the Chebyshev evaluation chi_n(h) = U_n(Re h), summed exactly
        over the table.
        """
        total = NumberFieldElement.from_rational(0)
        for g in self.elements:
            a = g.a
            u_prev = ONE
            u = a + a
            if n == 0:
                total = total + ONE
                continue
            for _ in range(n - 1):
                u_prev, u = u, (a + a) * u - u_prev
            total = total + u
        avg = total / self.order
        if not avg.is_rational():
            raise ArithmeticError("character average is not rational")
        f = avg.as_fraction()
        if f.denominator != 1:
            raise ArithmeticError("character average is not an integer")
        return int(f)


def molien_invariant_dimension(n: int) -> int:
    """Coefficient of t^n in (1 + t^30) / ((1 - t^12)(1 - t^20))."""
    count = 0
    for shift in (0, 30):
        m = n - shift
        if m < 0:
            continue
        for a in range(m // 12 + 1):
            if (m - 12 * a) % 20 == 0:
                count += 1
    return count


class FrameGroup:
    """Floating copy of the group in the frame of the invariant form.

    Elements stabilize the binary form x^11 y + 11 x^6 y^6 - x y^11 under
    the substitution action; the vertex fiber passes through (1, 0).  The
    product table is combinatorially exact (nearest-element matching with
    residuals ~1e-14 against a separation of 0.618).
    """

    def __init__(self, elements: np.ndarray):
        self.elements = elements
        self.order = len(elements)
        self.identity_index = int(
            np.argmin(np.linalg.norm(elements - np.array([1.0, 0, 0, 0]), axis=1))
        )
        self.min_coset_separation = float(
            np.sqrt(np.min(2.0 - 2.0 * np.delete(elements[:, 0], self.identity_index)))
        )
        prods = _qmul_batch(elements[:, None, :], elements[None, :, :])
        dists = np.linalg.norm(prods[:, :, None, :] - elements[None, None, :, :], axis=3)
        self.product = np.argmin(dists, axis=2).astype(np.int16)
        self.match_residual = float(np.min(dists, axis=2).max())
        if self.match_residual > 1e-9:
            raise RuntimeError("frame group is not closed to tolerance")
        self.inverse = np.empty(self.order, dtype=np.int16)
        conj = elements * np.array([1.0, -1, -1, -1])
        for k in range(self.order):
            self.inverse[k] = int(np.argmin(np.linalg.norm(elements - conj[k], axis=1)))
        self._left_mats = None

    def element_order(self, k: int) -> int:
        j, n = k, 1
        while j != self.identity_index:
            j = self.product[j, k]
            n += 1
        return n

    def order_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for k in range(self.order):
            o = self.element_order(k)
            hist[o] = hist.get(o, 0) + 1
        return dict(sorted(hist.items()))

    def left_mult_mats(self) -> np.ndarray:
        """Matrices M_g with z*g = z @ M_g for row vectors z = (a,b,c,d)."""
        if self._left_mats is None:
            mats = np.empty((self.order, 4, 4))
            basis = np.eye(4)
            for n in range(self.order):
                g = self.elements[n]
                for j in range(4):
                    mats[n, j] = _qmul(basis[j], g)
            self._left_mats = mats
        return self._left_mats

    def coset_orbit(self, v) -> np.ndarray:
        """All 120 right-translates of a point of S^3 (floating)."""
        return np.einsum("j,njk->nk", _as_float4(v), self.left_mult_mats())

    def coset_orbits_batch(self, pts: np.ndarray) -> np.ndarray:
        """(m, 4) points -> (m, order, 4) right-translates."""
        return np.einsum("mj,njk->mnk", pts, self.left_mult_mats())

    def same_coset(self, z1, z2, tol: float = 1e-9) -> bool:
        assert self.min_coset_separation > 10 * tol
        orbit = self.coset_orbit(z1)
        return bool(np.min(np.linalg.norm(orbit - _as_float4(z2), axis=1)) < tol)

    def coset_distance(self, z1, z2) -> float:
        orbit = self.coset_orbit(z1)
        return float(np.min(np.linalg.norm(orbit - _as_float4(z2), axis=1)))

    def fiber_stabilizer_order(self, z, tol: float = 1e-9) -> int:
        """Order of the subgroup preserving the complex line through z."""
        p = hopf_batch(_as_float4(z))
        images = hopf_batch(self.coset_orbit(z))
        return int(np.sum(np.linalg.norm(images - p, axis=1) < tol))

    def hopf_orbit_size(self, z, tol: float = 1e-6) -> int:
        images = hopf_batch(self.coset_orbit(z))
        distinct: list[np.ndarray] = []
        for q in images:
            if not any(np.linalg.norm(q - e) < tol for e in distinct):
                distinct.append(q)
        return len(distinct)


def _qmul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ]
    )


def _qmul_batch(p, q):
    a1, b1, c1, d1 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    a2, b2, c2, d2 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


@lru_cache(maxsize=1)
def icosahedral_group() -> GroupTable:
    """The exact 120-element binary icosahedral group (cached)."""
    table = GroupTable.generate(standard_generators())
    if table.order != 120:
        raise RuntimeError(f"expected 120 elements, closure produced {table.order}")
    return table


@lru_cache(maxsize=1)
def invariant_frame() -> FrameGroup:
    """The group realization stabilizing the degree-12 invariant form (cached).

    Generated by the order-10 rotation about the vertex fiber of (1,0) and
    the half-turn about the edge axis adjacent to that vertex.
    """
    tau = (1 + np.sqrt(5)) / 2
    g1 = np.array([np.cos(np.pi / 5), np.sin(np.pi / 5), 0.0, 0.0])
    m = np.array([tau - 1, 0.0, 1.0])
    m /= np.linalg.norm(m)
    g2 = np.array([0.0, m[0], m[1], m[2]])
    elements = [np.array([1.0, 0.0, 0.0, 0.0])]
    frontier = list(elements)
    while frontier:
        new = []
        for x in frontier:
            for g in (g1, g2):
                y = _qmul(x, g)
                if not any(np.linalg.norm(y - e) < 1e-9 for e in elements):
                    elements.append(y)
                    new.append(y)
        frontier = new
        if len(elements) > 240:
            raise RuntimeError("invariant-frame closure did not terminate at 120")
    if len(elements) != 120:
        raise RuntimeError(f"invariant-frame closure produced {len(elements)} elements")
    arr = np.stack(sorted(elements, key=lambda v: tuple(np.round(-v, 12))))
    return FrameGroup(arr)
