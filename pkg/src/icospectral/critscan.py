"""Constrained critical-point censuses on S^2 and on the quotient 3-manifold.

Multistart Newton on the Lagrange system locates critical points of a
polynomial restricted to the sphere; constrained Hessians classify them.
On the quotient, found points are clustered modulo the right group action
(120 floating translates per coset) and each coset is verified to be a full
free orbit, so the S^3 count is divisible by 120 by construction.

Morse--Bott circles are detected through a near-null transverse eigenvalue
whose eigenvector aligns with the Hopf fiber direction; the tube reduction
solves the normal critical equations along a fiber and applies the
Schur-complement second-derivative formula to the reduced circle function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import norm as _norm
from scipy.stats import qmc

from .cpoly import CPoly
from .exactnum import NumberFieldElement
from .quatgroup import FrameGroup, hopf_batch, invariant_frame, order3_lift
from .spherepoly import SpherePolynomial

__all__ = [
    "SphereFunction",
    "CriticalPointRecord",
    "MorseCensus",
    "m_critical_census",
    "s2_critical_census",
    "exact_hessian_at",
    "tube_reduce",
    "stability_sweep",
    "exceptional_orbit_points",
]

DEGENERACY_FLOOR = 1e-7


# ---------------------------------------------------------------------------
# batched polynomial evaluation
# ---------------------------------------------------------------------------


class _CPolyBatch:
    """Evaluate a family of CPoly's at S^3 points with shared power tables."""

    def __init__(self, polys: list[CPoly]):
        self.specs = []
        maxdeg = 0
        for f in polys:
            keys = np.array(sorted(f.terms), dtype=np.int64).reshape(-1, 4)
            coeffs = np.array(
                [
                    f.terms[tuple(k)].to_complex()
                    if isinstance(f.terms[tuple(k)], NumberFieldElement)
                    else f.terms[tuple(k)]
                    for k in keys
                ],
                dtype=complex,
            )
            self.specs.append((keys, coeffs))
            if len(keys):
                maxdeg = max(maxdeg, int(keys.sum(axis=1).max()))
        self.maxdeg = maxdeg

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        alpha = pts[..., 0] + 1j * pts[..., 1]
        beta = pts[..., 2] + 1j * pts[..., 3]
        pa = [np.ones_like(alpha)]
        pb = [np.ones_like(beta)]
        for _ in range(self.maxdeg):
            pa.append(pa[-1] * alpha)
            pb.append(pb[-1] * beta)
        pac = [p.conj() for p in pa]
        pbc = [p.conj() for p in pb]
        out = np.empty((len(self.specs),) + alpha.shape)
        for i, (keys, coeffs) in enumerate(self.specs):
            acc = np.zeros(alpha.shape, dtype=complex)
            for (p, q, r, s), c in zip(keys, coeffs):
                acc += c * (pa[p] * pac[q] * pb[r] * pbc[s])
            out[i] = acc.real
        return out


class SphereFunction:
    """Right-invariant function on S^3 with batched value/gradient/Hessian."""

    def __init__(self, poly: CPoly, label: str = "", params: dict | None = None):
        self.poly = poly.to_float()
        self.label = label
        self.params = dict(params or {})
        grads = self.poly.gradient()
        hess = [[grads[i].derivative(j) for j in range(i, 4)] for i in range(4)]
        flat = [self.poly] + grads
        self._hess_index = []
        for i in range(4):
            for j in range(i, 4):
                flat.append(hess[i][j - i])
                self._hess_index.append((i, j))
        self._batch = _CPolyBatch(flat)

    def evaluate(self, pts: np.ndarray):
        """Returns (values (N,), gradients (N,4), hessians (N,4,4))."""
        raw = self._batch(pts)
        vals = raw[0]
        grad = np.moveaxis(raw[1:5], 0, -1)
        hess = np.zeros(pts.shape[:-1] + (4, 4))
        for k, (i, j) in enumerate(self._hess_index):
            hess[..., i, j] = raw[5 + k]
            hess[..., j, i] = raw[5 + k]
        return vals, grad, hess

    def value(self, pts: np.ndarray) -> np.ndarray:
        return self._batch(pts)[0]

    def invariance_residual(self, group: FrameGroup, seed: int = 0, samples: int = 8) -> float:
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(samples, 4))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        orbits = group.coset_orbits_batch(pts)  # (samples, order, 4)
        vals = self.value(orbits.reshape(-1, 4)).reshape(samples, group.order)
        return float(np.abs(vals - vals[:, :1]).max())


# ---------------------------------------------------------------------------
# census records
# ---------------------------------------------------------------------------


@dataclass
class CriticalPointRecord:
    location: np.ndarray
    multiplier: float
    hessian_eigenvalues: np.ndarray
    morse_index: int | None
    degenerate: bool
    orbit_label: str
    gradient_norm: float
    fiber_alignment: float | None = None


@dataclass
class MorseCensus:
    label: str
    params: dict
    records: list[CriticalPointRecord]
    circles: list[CriticalPointRecord] = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return len(self.records)

    def counts_by_index(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.records:
            if r.morse_index is not None:
                out[r.morse_index] = out.get(r.morse_index, 0) + 1
        return dict(sorted(out.items()))

    def euler_sum(self) -> int:
        return sum((-1) ** r.morse_index for r in self.records if r.morse_index is not None)

    def counts_by_label(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.records:
            out[r.orbit_label] = out.get(r.orbit_label, 0) + 1
        return dict(sorted(out.items()))

    def circle_labels(self) -> list[str]:
        return sorted(r.orbit_label for r in self.circles)

    def profile(self):
        """Hashable summary used by the stabilization sweep."""
        return (
            self.total,
            tuple(sorted(self.counts_by_index().items())),
            tuple(sorted(self.counts_by_label().items())),
            tuple(self.circle_labels()),
        )


# ---------------------------------------------------------------------------
# low-discrepancy starts and the Newton kernel
# ---------------------------------------------------------------------------


def _sphere_starts(n: int, dim: int, seed: int) -> np.ndarray:
    sob = qmc.Sobol(d=dim, scramble=True, seed=seed)
    u = sob.random(n)
    u = np.clip(u, 1e-12, 1 - 1e-12)
    g = _norm.ppf(u)
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g


def _newton_polish(evaluate, pts: np.ndarray, iters: int, damping: float = 1e-12):
    """Batched Newton on the KKT system grad f = 2*lambda*x, |x|^2 = 1."""
    dim = pts.shape[1]
    x = pts.copy()
    vals, grad, hess = evaluate(x)
    lam = 0.5 * np.einsum("nk,nk->n", x, grad)
    for _ in range(iters):
        res = np.concatenate(
            [grad - 2 * lam[:, None] * x, (np.einsum("nk,nk->n", x, x) - 1)[:, None]],
            axis=1,
        )
        jac = np.zeros((len(x), dim + 1, dim + 1))
        jac[:, :dim, :dim] = hess
        idx = np.arange(dim)
        jac[:, idx, idx] -= 2 * lam[:, None]
        jac[:, :dim, dim] = -2 * x
        jac[:, dim, :dim] = 2 * x
        jac[:, dim, dim] = damping
        try:
            step = np.linalg.solve(jac, -res[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = np.einsum("nij,nj->ni", np.linalg.pinv(jac), -res)
        bad = ~np.isfinite(step).all(axis=1)
        if bad.any():
            pinv = np.linalg.pinv(jac[bad])
            step[bad] = np.einsum("nij,nj->ni", pinv, -res[bad])
        nrm = np.linalg.norm(step, axis=1, keepdims=True)
        step = step * np.minimum(1.0, 0.5 / np.maximum(nrm, 1e-300))
        x = x + step[:, :dim]
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        lam = lam + step[:, dim]
        vals, grad, hess = evaluate(x)
        lam = 0.5 * np.einsum("nk,nk->n", x, grad)
    resid = np.linalg.norm(grad - 2 * lam[:, None] * x, axis=1)
    return x, lam, resid


def _tangent_basis(x: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the tangent space at x (deterministic)."""
    dim = len(x)
    _, _, vt = np.linalg.svd(x.reshape(1, dim))
    return vt[1:].T  # (dim, dim-1)


# ---------------------------------------------------------------------------
# exceptional orbits for labeling
# ---------------------------------------------------------------------------


def exceptional_orbit_points(group: FrameGroup) -> dict[str, np.ndarray]:
    """Hopf-base orbits of the vertex, face and edge fibers (invariant frame)."""
    lifts = {
        "vertex/5": np.array([1.0, 0, 0, 0]),
        "face/3": order3_lift().to_float(),
        "edge/2": np.array([0.0, 1.0, 1.0, 0]) / np.sqrt(2),
    }
    out = {}
    for name, z in lifts.items():
        images = hopf_batch(group.coset_orbit(z))
        distinct = [images[0]]
        for q in images[1:]:
            if min(np.linalg.norm(q - e) for e in distinct) > 1e-6:
                distinct.append(q)
        out[name] = np.stack(distinct)
    return out


def _orbit_label(x: np.ndarray, orbits: dict[str, np.ndarray], tol: float = 0.15) -> str:
    p = hopf_batch(x)
    best_name, best = "other", np.inf
    for name, pts in orbits.items():
        d = float(np.min(np.linalg.norm(pts - p, axis=1)))
        if d < best:
            best_name, best = name, d
    return best_name if best < tol else "other"


# ---------------------------------------------------------------------------
# censuses
# ---------------------------------------------------------------------------


def m_critical_census(
    fn: SphereFunction,
    starts: int = 16384,
    seed: int = 0,
    grad_tol: float = 1e-10,
    merge_tol: float = 1e-6,
    degeneracy_floor: float = DEGENERACY_FLOOR,
    group: FrameGroup | None = None,
) -> MorseCensus:
    """Critical census of a right-invariant function on the quotient manifold."""
    group = group or invariant_frame()
    inv_res = fn.invariance_residual(group)
    if inv_res > 1e-8:
        raise ValueError(f"function is not right-invariant (residual {inv_res:.2e})")
    pts = _sphere_starts(starts, 4, seed)
    x, lam, resid = _newton_polish(fn.evaluate, pts, iters=9)
    scale = max(1.0, float(np.abs(fn.value(pts)).max()))
    ok = resid < 1e-4 * scale
    x = x[ok]
    # coarse dedupe on S^3, then polish survivors hard
    x = _coarse_dedupe(x, 1e-4)
    x, lam, resid = _newton_polish(fn.evaluate, x, iters=12)
    keep = resid < grad_tol * scale
    x, lam, resid = x[keep], lam[keep], resid[keep]
    # cluster modulo the group action
    reps: list[int] = []
    for i in np.lexsort(np.round(x, 8).T[::-1]):
        if all(group.coset_distance(x[i], x[r]) > merge_tol for r in reps):
            reps.append(i)
    records = []
    circles = []
    orbits = exceptional_orbit_points(group)
    orbit_sizes = []
    for r in reps:
        p = x[r]
        orbit = group.coset_orbit(p)
        distinct = len(_coarse_dedupe(orbit, merge_tol))
        orbit_sizes.append(distinct)
        _, grad, hess = fn.evaluate(p.reshape(1, 4))
        grad, hess = grad[0], hess[0]
        lamr = 0.5 * float(p @ grad)
        T = _tangent_basis(p)
        k = T.T @ (hess - 2 * lamr * np.eye(4)) @ T
        w, v = np.linalg.eigh(k)
        top = np.abs(w).max()
        degenerate = bool(np.abs(w).min() < degeneracy_floor * top)
        fiber = np.array([-p[1], p[0], -p[3], p[2]])
        align = None
        if degenerate:
            null_vec = T @ v[:, np.argmin(np.abs(w))]
            align = float(abs(null_vec @ fiber))
        rec = CriticalPointRecord(
            location=p,
            multiplier=lamr,
            hessian_eigenvalues=w,
            morse_index=None if degenerate else int(np.sum(w < 0)),
            degenerate=degenerate,
            orbit_label=_orbit_label(p, orbits),
            gradient_norm=float(resid[r]) if r < len(resid) else 0.0,
            fiber_alignment=align,
        )
        (circles if degenerate else records).append(rec)
    # merge circle hits: one circle per orbit label
    merged: dict[str, CriticalPointRecord] = {}
    for rec in circles:
        merged.setdefault(rec.orbit_label, rec)
    checks = {
        "invariance_residual": inv_res,
        "orbit_sizes": orbit_sizes,
        "free_orbits": all(s == group.order for s in orbit_sizes),
        "euler_sum": sum((-1) ** r.morse_index for r in records if r.morse_index is not None),
        "converged_starts": int(ok.sum()),
    }
    return MorseCensus(
        label=fn.label, params=fn.params, records=records, circles=list(merged.values()), checks=checks
    )


def _coarse_dedupe(x: np.ndarray, tol: float) -> np.ndarray:
    if len(x) == 0:
        return x
    order = np.lexsort(np.round(x, 8).T[::-1])
    out = []
    for i in order:
        if not out or min(np.linalg.norm(x[i] - x[j], axis=-1) for j in out) > tol:
            out.append(i)
    # second pass with vectorized distances for robustness on large sets
    kept = [order[0]]
    for i in order[1:]:
        d = np.linalg.norm(x[kept] - x[i], axis=1)
        if d.min() > tol:
            kept.append(i)
    return x[kept]


class _PolyBatch3:
    """Shared-power evaluation for a family of R^3 polynomials."""

    def __init__(self, polys: list[SpherePolynomial]):
        self.specs = []
        maxdeg = 0
        for f in polys:
            keys = np.array(sorted(f.coeffs), dtype=np.int64).reshape(-1, 3)
            coeffs = np.array(
                [
                    f.coeffs[tuple(k)].to_float()
                    if isinstance(f.coeffs[tuple(k)], NumberFieldElement)
                    else f.coeffs[tuple(k)]
                    for k in keys
                ]
            )
            self.specs.append((keys, coeffs))
            if len(keys):
                maxdeg = max(maxdeg, int(keys.sum(axis=1).max()))
        self.maxdeg = maxdeg

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pows = []
        for axis in range(3):
            p = [np.ones(pts.shape[:-1])]
            for _ in range(self.maxdeg):
                p.append(p[-1] * pts[..., axis])
            pows.append(p)
        out = np.empty((len(self.specs),) + pts.shape[:-1])
        for i, (keys, coeffs) in enumerate(self.specs):
            acc = np.zeros(pts.shape[:-1])
            for (e0, e1, e2), c in zip(keys, coeffs):
                acc += c * (pows[0][e0] * pows[1][e1] * pows[2][e2])
            out[i] = acc
        return out


def s2_critical_census(
    f: SpherePolynomial,
    starts: int = 4096,
    seed: int = 0,
    grad_tol: float = 1e-10,
    merge_tol: float = 1e-6,
    degeneracy_floor: float = DEGENERACY_FLOOR,
) -> MorseCensus:
    """Full critical census of a polynomial restricted to S^2."""
    if f.dim != 3:
        raise ValueError("expected an R^3 polynomial")
    ff = f.to_float()
    grads = ff.gradient()
    flat = [ff] + grads
    hess_index = []
    for i in range(3):
        for j in range(i, 3):
            flat.append(grads[i].derivative(j))
            hess_index.append((i, j))
    batch = _PolyBatch3(flat)

    def evaluate(x):
        raw = batch(x)
        vals = raw[0]
        grad = np.moveaxis(raw[1:4], 0, -1)
        hess = np.zeros(x.shape[:-1] + (3, 3))
        for k, (i, j) in enumerate(hess_index):
            hess[..., i, j] = raw[4 + k]
            hess[..., j, i] = raw[4 + k]
        return vals, grad, hess

    pts = _sphere_starts(starts, 3, seed)
    x, lam, resid = _newton_polish(evaluate, pts, iters=10)
    scale = max(1.0, float(np.abs(batch(pts)[0]).max()))
    x = x[resid < 1e-5 * scale]
    x = _coarse_dedupe(x, 1e-4)
    x, lam, resid = _newton_polish(evaluate, x, iters=12)
    keep = resid < grad_tol * scale
    x, lam = x[keep], lam[keep]
    x = _coarse_dedupe(x, merge_tol)
    labels = _s2_orbit_points()
    records = []
    for p in x:
        _, grad, hess = evaluate(p.reshape(1, 3))
        grad, hess = grad[0], hess[0]
        lamr = 0.5 * float(p @ grad)
        T = _tangent_basis(p)
        k = T.T @ (hess - 2 * lamr * np.eye(3)) @ T
        w, _ = np.linalg.eigh(k)
        top = max(np.abs(w).max(), 1e-300)
        degenerate = bool(np.abs(w).min() < degeneracy_floor * top)
        name, best = "other", np.inf
        for label, ref in labels.items():
            d = float(np.min(np.linalg.norm(ref - p, axis=1)))
            if d < best:
                name, best = label, d
        records.append(
            CriticalPointRecord(
                location=p,
                multiplier=lamr,
                hessian_eigenvalues=w,
                morse_index=None if degenerate else int(np.sum(w < 0)),
                degenerate=degenerate,
                orbit_label=name if best < 0.1 else "other",
                gradient_norm=float(np.linalg.norm(grad - 2 * lamr * p)),
            )
        )
    census = MorseCensus(label="s2", params={}, records=records)
    counts = census.counts_by_label()
    census.checks = {
        "euler_sum": census.euler_sum(),
        "orbit_match": (
            counts.get("vertex/5", 0) == 12
            and counts.get("face/3", 0) == 20
            and counts.get("edge/2", 0) == 30
        ),
    }
    return census


def _s2_orbit_points() -> dict[str, np.ndarray]:
    """Exact icosahedral orbits (Cartesian frame) of the three critical types."""
    from .exactnum import ONE, SQRT3, TAU
    from .quatgroup import icosahedral_group

    g = icosahedral_group()
    norm_v = 1.0 / np.sqrt(1 + ((1 + np.sqrt(5)) / 2) ** 2)
    out = {}
    for label, p in {
        "vertex/5": (TAU, ONE, NumberFieldElement.from_rational(0)),
        "face/3": (ONE / SQRT3, ONE / SQRT3, ONE / SQRT3),
        "edge/2": (NumberFieldElement.from_rational(0), NumberFieldElement.from_rational(0), ONE),
    }.items():
        orbit = g.hopf_orbit(p)
        arr = np.array([[c.to_float() for c in q] for q in orbit])
        if label == "vertex/5":
            arr = arr * norm_v
        out[label] = arr
    return out


# ---------------------------------------------------------------------------
# exact constrained Hessians
# ---------------------------------------------------------------------------


def exact_hessian_at(f: SpherePolynomial, point, basis) -> tuple:
    """Constrained Hessian matrix of f|_sphere at an exact critical point.

    Returns (multiplier, matrix) where matrix[i][j] = u_i^T (Hess f - 2*lam I) u_j
    in the supplied tangent basis; everything exact.  Raises if the gradient
    is not exactly radial.
    """
    point = [NumberFieldElement._coerce(c) for c in point]
    grad = [g.eval_exact(point) for g in f.gradient()]
    norm_sq = point[0] * point[0]
    for c in point[1:]:
        norm_sq = norm_sq + c * c
    if norm_sq != NumberFieldElement.from_rational(1):
        raise ValueError("point is not on the unit sphere")
    dot = grad[0] * point[0]
    for gi, pi in zip(grad[1:], point[1:]):
        dot = dot + gi * pi
    lam = dot * NumberFieldElement.from_rational(Fraction(1, 2))
    for gi, pi in zip(grad, point):
        if gi != (lam + lam) * pi:
            raise ValueError("point is not an exact critical point")
    dim = f.dim
    hess = [[f.derivative(i).derivative(j) for j in range(dim)] for i in range(dim)]
    hval = [[hess[i][j].eval_exact(point) for j in range(dim)] for i in range(dim)]
    two_lam = lam + lam
    out = []
    for u in basis:
        row = []
        u = [NumberFieldElement._coerce(c) for c in u]
        for v in basis:
            v = [NumberFieldElement._coerce(c) for c in v]
            acc = NumberFieldElement.from_rational(0)
            udotv = NumberFieldElement.from_rational(0)
            for i in range(dim):
                udotv = udotv + u[i] * v[i]
                for j in range(dim):
                    acc = acc + u[i] * hval[i][j] * v[j]
            row.append(acc - two_lam * udotv)
        out.append(row)
    return lam, out


# ---------------------------------------------------------------------------
# tube reduction along a Morse--Bott circle
# ---------------------------------------------------------------------------


@dataclass
class TubeReduction:
    thetas: np.ndarray
    g_values: np.ndarray
    xi: np.ndarray  # (n, 2) normal-graph coordinates
    critical_thetas: np.ndarray
    schur_second: np.ndarray
    dominant_frequency: int
    period: float

    @property
    def count(self) -> int:
        return len(self.critical_thetas)


def _circle_chart(lift: np.ndarray, m: int):
    """Chart (theta, u) -> S^3 around the quotient fiber through ``lift``."""
    lift = np.asarray(lift, dtype=float)
    lift = lift / np.linalg.norm(lift)
    period = 2 * np.pi / (2 * m)

    def frame(theta):
        ct, st = np.cos(theta), np.sin(theta)
        p = np.stack(
            [
                ct * lift[0] - st * lift[1],
                st * lift[0] + ct * lift[1],
                ct * lift[2] - st * lift[3],
                st * lift[2] + ct * lift[3],
            ],
            axis=-1,
        )
        fib = np.stack([-p[..., 1], p[..., 0], -p[..., 3], p[..., 2]], axis=-1)
        seeds = np.eye(4)
        normals = []
        for w in seeds:
            cand = w - (p @ w)[..., None] * p - (fib @ w)[..., None] * fib
            for n in normals:
                cand = cand - np.einsum("...k,...k->...", n, cand)[..., None] * n
            nrm = np.linalg.norm(cand, axis=-1)
            if np.min(nrm) > 0.2:
                normals.append(cand / nrm[..., None])
            if len(normals) == 2:
                break
        if len(normals) < 2:
            raise RuntimeError("failed to build a normal frame along the circle")
        return p, normals[0], normals[1]

    def chart(theta, u):
        p, n1, n2 = frame(theta)
        y = p + u[..., 0:1] * n1 + u[..., 1:2] * n2
        return y / np.linalg.norm(y, axis=-1, keepdims=True)

    return chart, period


def reduce_along_circle(
    F,
    period: float,
    n_grid: int = 512,
    newton_iters: int = 40,
    h: float = 1e-5,
    invertibility_floor: float = 1e-8,
):
    """Solve the normal equations along the circle and reduce to one variable.

    ``F(theta, u)`` must accept arrays theta (n,) and u (n, 2).  Returns the
    grid, the graph xi(theta), reduced values, and the Schur second
    derivative at each grid point.
    """
    thetas = np.linspace(0.0, period, n_grid, endpoint=False)
    u = np.zeros((n_grid, 2))

    def grad_u(th, uu):
        e1 = np.array([h, 0.0])
        e2 = np.array([0.0, h])
        g1 = (F(th, uu + e1) - F(th, uu - e1)) / (2 * h)
        g2 = (F(th, uu + e2) - F(th, uu - e2)) / (2 * h)
        return np.stack([g1, g2], axis=-1)

    def hess_u(th, uu):
        out = np.empty(uu.shape[:-1] + (2, 2))
        base = F(th, uu)
        for i in range(2):
            for j in range(2):
                ei = np.zeros(2)
                ej = np.zeros(2)
                ei[i] = h
                ej[j] = h
                out[..., i, j] = (
                    F(th, uu + ei + ej)
                    - F(th, uu + ei - ej)
                    - F(th, uu - ei + ej)
                    + F(th, uu - ei - ej)
                ) / (4 * h * h)
        del base
        return out

    for _ in range(newton_iters):
        g = grad_u(thetas, u)
        if np.max(np.abs(g)) < 1e-11:
            break
        hm = hess_u(thetas, u)
        det = np.abs(np.linalg.det(hm))
        if det.min() < invertibility_floor:
            raise RuntimeError("normal Hessian lost invertibility along the circle")
        step = np.linalg.solve(hm, -g[..., None])[..., 0]
        nrm = np.linalg.norm(step, axis=-1, keepdims=True)
        u = u + step * np.minimum(1.0, 0.05 / np.maximum(nrm, 1e-300))
    g_values = F(thetas, u)

    # derivative of the reduced function along theta (exact chain rule: the
    # u-gradient vanishes on the graph, so dG/dtheta = dF/dtheta)
    ht = period / n_grid * 0.02

    def g_theta(th, uu):
        return (F(th + ht, uu) - F(th - ht, uu)) / (2 * ht)

    gp = g_theta(thetas, u)
    crit = []
    for k in range(n_grid):
        k2 = (k + 1) % n_grid
        a, b = gp[k], gp[k2]
        if a == 0.0:
            crit.append(thetas[k])
        elif a * b < 0:
            t0, t1 = thetas[k], thetas[k] + period / n_grid
            u0 = u[k]
            for _ in range(60):
                tm = 0.5 * (t0 + t1)
                # track the graph while bisecting
                for _ in range(20):
                    gg = grad_u(np.array([tm]), u0.reshape(1, 2))[0]
                    if np.abs(gg).max() < 1e-12:
                        break
                    hm = hess_u(np.array([tm]), u0.reshape(1, 2))[0]
                    u0 = u0 - np.linalg.solve(hm, gg)
                val = g_theta(np.array([tm]), u0.reshape(1, 2))[0]
                if a * val <= 0:
                    t1 = tm
                else:
                    t0 = tm
            crit.append(0.5 * (t0 + t1))
    crit = np.array(sorted(c % period for c in crit))
    # Schur second derivative at the critical angles
    schur = []
    for th in crit:
        u0 = np.zeros(2)
        for _ in range(40):
            gg = grad_u(np.array([th]), u0.reshape(1, 2))[0]
            if np.abs(gg).max() < 1e-12:
                break
            hm = hess_u(np.array([th]), u0.reshape(1, 2))[0]
            u0 = u0 - np.linalg.solve(hm, gg)
        hm = hess_u(np.array([th]), u0.reshape(1, 2))[0]
        tt = (
            F(np.array([th + ht]), u0.reshape(1, 2))[0]
            - 2 * F(np.array([th]), u0.reshape(1, 2))[0]
            + F(np.array([th - ht]), u0.reshape(1, 2))[0]
        ) / (ht * ht)
        tu = np.empty(2)
        for i in range(2):
            ei = np.zeros(2)
            ei[i] = h
            tu[i] = (
                F(np.array([th + ht]), (u0 + ei).reshape(1, 2))[0]
                - F(np.array([th + ht]), (u0 - ei).reshape(1, 2))[0]
                - F(np.array([th - ht]), (u0 + ei).reshape(1, 2))[0]
                + F(np.array([th - ht]), (u0 - ei).reshape(1, 2))[0]
            ) / (4 * ht * h)
        schur.append(tt - tu @ np.linalg.solve(hm, tu))
    return thetas, u, g_values, crit, np.array(schur)


def tube_reduce(fn: SphereFunction, lift: np.ndarray, m: int, n_grid: int = 512) -> TubeReduction:
    """Reduce a perturbed seed function along an exceptional quotient fiber."""
    chart, period = _circle_chart(lift, m)

    def F(theta, u):
        theta = np.asarray(theta, dtype=float)
        u = np.asarray(u, dtype=float)
        pts = chart(theta, u)
        return fn.value(pts)

    thetas, xi, g_values, crit, schur = reduce_along_circle(F, period, n_grid=n_grid)
    centered = g_values - g_values.mean()
    spec = np.abs(np.fft.rfft(centered))
    dom = int(np.argmax(spec[1:]) + 1) if len(spec) > 1 and spec[1:].max() > 0 else 0
    return TubeReduction(
        thetas=thetas,
        g_values=g_values,
        xi=xi,
        critical_thetas=crit,
        schur_second=schur,
        dominant_frequency=dom,
        period=period,
    )


# ---------------------------------------------------------------------------
# stabilization sweep
# ---------------------------------------------------------------------------


def stability_sweep(make_fn, levels, census_kwargs=None) -> dict:
    """Census at geometrically decreasing perturbation sizes until stable.

    ``make_fn(level)`` returns a SphereFunction; the sweep stops when two
    consecutive levels produce identical census profiles.
    """
    census_kwargs = census_kwargs or {}
    results = []
    for lvl in levels:
        fn = make_fn(lvl)
        census = m_critical_census(fn, **census_kwargs)
        results.append((lvl, census))
        if len(results) >= 2 and results[-1][1].profile() == results[-2][1].profile():
            return {
                "stable": True,
                "census": census,
                "levels": [l for l, _ in results],
                "censuses": [c for _, c in results],
            }
    return {
        "stable": False,
        "census": results[-1][1] if results else None,
        "levels": [l for l, _ in results],
        "censuses": [c for _, c in results],
    }
