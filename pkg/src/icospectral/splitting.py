"""First-order conformal splitting algebra on the 13-dimensional first eigenspace.

The real eigenspace E is spanned by the real and imaginary parts of the
thirteen degree-12 coefficient functions; an exact rational Gram matrix
seeds the floating orthonormalization.  Products of basis functions span
the finite-dimensional space P on which the compression map

    B(q)_ij = -integral_M q phi_i phi_j dV

acts; the seed operator is B applied to the Riesz representer of evaluation
at the base coset, the reproducing-kernel line recovers the invariant seed,
and every operator in the image space is realized by an explicit conformal
factor through spectral inversion of 2*lambda + Lap/2.

Unless noted otherwise, functions are normalized in the *mean* inner
product avg(fg) over S^3 (the L^2(M) measure divided by vol(M) = pi^2/60);
operators built from B are unaffected by that choice, and the explicit
volume factor enters only through evaluation and the Riesz representer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .binform import coefficient_functions
from .cpoly import CPoly
from .exactnum import NumberFieldElement

__all__ = [
    "VOL_M",
    "eigenbasis",
    "invariant_block_basis",
    "reproducing_kernel_exact",
    "seed_function",
    "eigenspace_function",
    "twelve_point_function",
    "minimal_morse_function",
    "SplittingContext",
    "context",
    "eigenline_differential",
    "sphere_laplacian",
]

#: volume of the quotient manifold: (2 pi^2) / 120
VOL_M = np.pi ** 2 / 60.0

SPHERICAL_EIGENVALUE = 168.0

_FACT = np.array([float(factorial(k)) for k in range(130)])


# ---------------------------------------------------------------------------
# monomial vector algebra
# ---------------------------------------------------------------------------


def _key_array(keys: list[tuple]) -> np.ndarray:
    return np.array(keys, dtype=np.int32).reshape(-1, 4)


def moment_matrix(keys_a: np.ndarray, keys_b: np.ndarray) -> np.ndarray:
    """Matrix of exact S^3 moments avg(m_a * m_b) for monomial key arrays."""
    na, nb = len(keys_a), len(keys_b)
    out = np.zeros((na, nb))
    block = max(1, min(na, 4_000_000 // max(nb, 1)))
    for start in range(0, na, block):
        sl = slice(start, min(start + block, na))
        P = keys_a[sl, 0][:, None] + keys_b[None, :, 0]
        Q = keys_a[sl, 1][:, None] + keys_b[None, :, 1]
        R = keys_a[sl, 2][:, None] + keys_b[None, :, 2]
        S = keys_a[sl, 3][:, None] + keys_b[None, :, 3]
        mask = (P == Q) & (R == S)
        vals = np.zeros(P.shape)
        if mask.any():
            p = P[mask]
            r = R[mask]
            vals[mask] = _FACT[p] * _FACT[r] / _FACT[p + r + 1]
        out[sl] = vals
    return out


class MonomialSpace:
    """Fixed ordering of the monomial keys spanned by a family of CPoly's."""

    def __init__(self, polys: list[CPoly]):
        keys = sorted({k for f in polys for k in f.terms})
        self.keys = keys
        self.index = {k: i for i, k in enumerate(keys)}
        self.key_array = _key_array(keys)

    def vector(self, f: CPoly) -> np.ndarray:
        v = np.zeros(len(self.keys), dtype=complex)
        for k, c in f.terms.items():
            c = c.to_complex() if isinstance(c, NumberFieldElement) else complex(c)
            v[self.index[k]] = c
        return v

    def matrix(self, polys: list[CPoly]) -> np.ndarray:
        return np.stack([self.vector(f) for f in polys], axis=1)

    def poly(self, v: np.ndarray) -> CPoly:
        return CPoly({k: complex(v[i]) for i, k in enumerate(self.keys) if v[i] != 0})


def gram_via_moments(space: MonomialSpace, mat: np.ndarray) -> np.ndarray:
    mm = moment_matrix(space.key_array, space.key_array)
    return np.real(mat.T @ mm @ mat)


# ---------------------------------------------------------------------------
# eigenbasis of E and the higher invariant blocks
# ---------------------------------------------------------------------------


@dataclass
class EigenBasis:
    """Mean-orthonormal real basis of the first eigenspace."""

    functions: list[CPoly]  # 13 float CPoly's, avg(phi_i phi_j) = delta_ij
    candidates: list[CPoly]  # the 13 selected exact spanning functions
    gram: np.ndarray  # exact Gram of the candidates, as floats
    transform: np.ndarray  # functions = transform @ candidates


def _real_imag_candidates(degree: int) -> list[CPoly]:
    out = []
    for f in coefficient_functions(degree):
        out.append(f.real_part())
        out.append(f.imag_part())
    return out


def _exact_gram(cands: list[CPoly]) -> list[list[Fraction]]:
    n = len(cands)
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            val = cands[i].pair(cands[j])
            f = val.real_part().as_fraction() if isinstance(val, NumberFieldElement) else val
            g[i][j] = g[j][i] = f
    return g

def _greedy_independent(gram: list[list[Fraction]], target: int) -> list[int]:
    """Select indices whose Gram submatrix is exactly nonsingular, in order."""
    chosen: list[int] = []
    n = len(gram)
    for c in range(n):
        trial = chosen + [c]
        sub = [[gram[i][j] for j in trial] for i in trial]
        if _fraction_det(sub) != 0:
            chosen.append(c)
            if len(chosen) == target:
                return chosen
    raise RuntimeError(f"only found {len(chosen)} independent functions, wanted {target}")


def _fraction_det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


@lru_cache(maxsize=4)
def eigenbasis() -> EigenBasis:
    """Mean-orthonormal basis of E, seeded from the exact 26-candidate Gram."""
    cands = _real_imag_candidates(12)
    gram = _exact_gram(cands)
    chosen = _greedy_independent(gram, 13)
    sel = [cands[i] for i in chosen]
    g = np.array([[float(gram[i][j]) for j in chosen] for i in chosen])
    chol = np.linalg.cholesky(g)
    transform = np.linalg.inv(chol)  # rows give orthonormal combinations
    sel_float = [f.to_float() for f in sel]
    funcs = []
    for r in range(13):
        acc = CPoly.zero()
        for c in range(r + 1):
            if transform[r, c] != 0.0:
                acc = acc + sel_float[c].scale(complex(transform[r, c]))
        funcs.append(acc)
    return EigenBasis(functions=funcs, candidates=sel, gram=g, transform=transform)


@lru_cache(maxsize=8)
def invariant_block_basis(degree: int) -> tuple[CPoly, ...]:
    """Mean-orthonormal basis of the degree-n right-invariant block."""
    if degree == 0:
        return (CPoly.constant(1.0 + 0j),)
    if degree == 12:
        return tuple(eigenbasis().functions)
    cands = [f.to_float() for f in _real_imag_candidates(degree)]
    space = MonomialSpace(cands)
    mat = space.matrix(cands)
    g = gram_via_moments(space, mat)
    w, v = np.linalg.eigh(g)
    keep = w > 1e-10 * w.max()
    if keep.sum() != degree + 1:
        raise RuntimeError(f"block {degree}: rank {keep.sum()} != {degree + 1}")
    coef = v[:, keep] / np.sqrt(w[keep])
    funcs = []
    for k in range(coef.shape[1]):
        acc = CPoly.zero()
        for c in range(len(cands)):
            if abs(coef[c, k]) > 1e-15:
                acc = acc + cands[c].scale(complex(coef[c, k]))
        funcs.append(acc)
    return tuple(funcs)


# ---------------------------------------------------------------------------
# reproducing kernel and the invariant seed
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def reproducing_kernel_exact() -> CPoly:
    """Exact Riesz representer of evaluation at the base coset, within E.

    Solves the rational Gram system over the selected exact candidates, in
    mean units: avg(K0 f) = f(o) / vol(M) ... the normalization is fixed so
    that pairing in L^2(M) reproduces point evaluation:
    integral_M K0 f dV = f(o) for all f in E.
    """
    basis = eigenbasis()
    cands = basis.candidates
    n = len(cands)
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            val = cands[i].pair(cands[j])
            gram[i][j] = gram[j][i] = val.real_part().as_fraction()
    one = NumberFieldElement.from_rational(1)
    zero = NumberFieldElement.from_rational(0)
    vals = []
    for f in cands:
        v = f.eval_exact(one, zero)
        vals.append(v.real_part().as_fraction())
    coeffs = _fraction_solve(gram, vals)
    out = CPoly.zero()
    for c, f in zip(coeffs, cands):
        if c:
            out = out + f.scale(NumberFieldElement.from_rational(c))
    return out  # avg(K~ f) = f(o); true kernel K0 = K~ / vol(M)


def _fraction_solve(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


@lru_cache(maxsize=1)
def invariant_seed_exact() -> CPoly:
    """The invariant seed as an exact function: the weight-zero coefficient.

    The middle coefficient function of the degree-12 invariant form is
    real-valued, fiberwise constant (pure left weight 0) and spans the
    Hopf-lift line in E; its mean square is exactly 275/13.
    """
    return coefficient_functions(12)[6]


def seed_norm_sq() -> Fraction:
    val = invariant_seed_exact().pair(invariant_seed_exact())
    return val.real_part().as_fraction()


@lru_cache(maxsize=1)
def seed_coordinates() -> np.ndarray:
    """Coordinates of the unit invariant seed in the orthonormal basis."""
    basis = eigenbasis()
    seed = invariant_seed_exact().to_float()
    space = MonomialSpace(basis.functions + [seed])
    mm = moment_matrix(space.key_array, space.key_array)
    kv = space.vector(seed)
    coords = np.array(
        [np.real(space.vector(f) @ mm @ kv) for f in basis.functions]
    )
    coords /= np.linalg.norm(coords)
    # deterministic sign: positive value at the base coset
    val = sum(
        c * f.eval_points(np.array([1.0, 0, 0, 0])) for c, f in zip(coords, basis.functions)
    )
    if val < 0:
        coords = -coords
    return coords


def eigenspace_function(coords: np.ndarray) -> CPoly:
    """The element of E with the given mean-orthonormal coordinates."""
    basis = eigenbasis()
    acc = CPoly.zero()
    for c, f in zip(coords, basis.functions):
        if c:
            acc = acc + f.scale(complex(c))
    return acc


def seed_function() -> CPoly:
    """The invariant seed, normalized to unit mean square (float CPoly)."""
    return eigenspace_function(seed_coordinates())


def _raw_real_part(j: int) -> CPoly:
    return coefficient_functions(12)[j].real_part().to_float()


def twelve_point_function(a: float, b: float) -> CPoly:
    """Seed plus a*Re(A0) + b*Re(A1), the explicit twelve-critical-point family.

    The seed is normalized in L^2(M); the perturbations are the raw
    coefficient-function real parts.
    """
    f = seed_function().scale(1.0 / np.sqrt(VOL_M))
    return f + _raw_real_part(0).scale(float(a)) + _raw_real_part(1).scale(float(b))


def minimal_morse_function(e2: float, e3: float, e5: float) -> CPoly:
    """Seed plus e2*Re(A4) + e3*Re(A3) + e5*Re(A1): the six-point family."""
    f = seed_function().scale(1.0 / np.sqrt(VOL_M))
    return (
        f
        + _raw_real_part(4).scale(float(e2))
        + _raw_real_part(3).scale(float(e3))
        + _raw_real_part(1).scale(float(e5))
    )


# ---------------------------------------------------------------------------
# Laplacian on the sphere (positive spectrum convention)
# ---------------------------------------------------------------------------


def sphere_laplacian(f: CPoly) -> CPoly:
    """Laplace operator of the round S^3 with nonnegative spectrum.

    For a homogeneous degree-n polynomial restricted to the sphere:
    Lap_S f = n(n+2) f - Lap_R4 f (the ambient term vanishes on harmonics).
    Mixed-degree inputs are handled per homogeneous component.
    """
    by_degree: dict[int, CPoly] = {}
    for k, c in f.terms.items():
        n = sum(k)
        by_degree.setdefault(n, CPoly.zero())
        by_degree[n] = by_degree[n] + CPoly({k: c})
    out = CPoly.zero()
    for n, part in by_degree.items():
        amb = CPoly.zero()
        for axis in range(4):
            amb = amb + part.derivative(axis).derivative(axis)
        scale = float(n * (n + 2)) if not part.is_exact() else Fraction(n * (n + 2))
        out = out + part.scale(scale) - amb
    return out


# ---------------------------------------------------------------------------
# the splitting context
# ---------------------------------------------------------------------------


@dataclass
class SplittingContext:
    """Assembled splitting algebra over the product space P."""

    basis: EigenBasis
    pairs: list[tuple[int, int]]  # the 91 (i <= j) index pairs
    products: list[CPoly]  # \tilde phi_i \tilde phi_j
    space: MonomialSpace  # degree-24 monomial indexing
    prod_mat: np.ndarray  # (n_keys, 91) complex coefficient matrix
    prod_gram: np.ndarray  # (91, 91) real
    chi_coeff: np.ndarray  # (91, d_P): mean-orthonormal P-basis over products
    d_P: int
    b_ops: np.ndarray  # (d_P, 13, 13): B applied to each P-basis element
    chi_at_o: np.ndarray  # (d_P,) values at the base coset
    seed_op: np.ndarray  # (13, 13) A0
    seed_q_coords: np.ndarray  # q_o over the P-basis (true-measure units)
    f0_coords: np.ndarray  # seed coordinates in the eigenbasis

    # -- operator assembly --------------------------------------------------

    def splitting_matrix(self, q) -> np.ndarray:
        """B(q)_ij = -integral_M q phi_i phi_j dV, in the orthonormal basis."""
        q = _as_cpoly(q)
        qspace_keys = _key_array(sorted(q.terms))
        qv = np.zeros(len(qspace_keys), dtype=complex)
        for i, k in enumerate(sorted(q.terms)):
            c = q.terms[k]
            qv[i] = c.to_complex() if isinstance(c, NumberFieldElement) else c
        mm = moment_matrix(qspace_keys, self.space.key_array)
        vals = np.real(qv @ mm @ self.prod_mat)
        return -_sym_from_pairs(vals, self.pairs)

    def operator_from_p_coords(self, coords: np.ndarray) -> np.ndarray:
        return np.tensordot(coords, self.b_ops, axes=(0, 0))

    def p_function(self, coords: np.ndarray) -> CPoly:
        v = self.prod_mat @ (self.chi_coeff @ coords)
        return self.space.poly(v)

    # -- seed operator and kernel ------------------------------------------

    def reproducing_kernel(self) -> CPoly:
        """K0 with integral_M K0 f dV = f(o): the exact representer over vol."""
        return reproducing_kernel_exact().to_float().scale(1.0 / VOL_M)

    def rayleigh_residual(self, rng: np.random.Generator, samples: int = 50) -> float:
        """max |<A0 f, f> + f(o)^2| over random unit f (true normalization)."""
        basis = self.basis
        worst = 0.0
        base = np.array([1.0, 0, 0, 0])
        phi_at_o = np.array([f.eval_points(base) for f in basis.functions])
        for _ in range(samples):
            v = rng.normal(size=13)
            v /= np.linalg.norm(v)
            quad = v @ self.seed_op @ v
            fo = (v @ phi_at_o) / np.sqrt(VOL_M)
            worst = max(worst, abs(quad + fo ** 2))
        return worst

    # -- submersion and realizability -----------------------------------------

    def lowest_eigvec(self, a: np.ndarray) -> tuple[float, np.ndarray, float]:
        w, v = np.linalg.eigh(a)
        gap = float(w[1] - w[0])
        vec = v[:, 0]
        k = int(np.argmax(np.abs(vec)))
        if vec[k] < 0:
            vec = -vec
        return float(w[0]), vec, gap

    def submersion_rank(self, a: np.ndarray | None = None, threshold: float = 1e-8) -> dict:
        """Rank of H -> P_perp(H v) over the image basis, with singular values."""
        if a is None:
            a = self.seed_op
        _, v, gap = self.lowest_eigvec(a)
        vecs = self.b_ops @ v  # (d_P, 13)
        vecs = vecs - np.outer(vecs @ v, v)
        sing = np.linalg.svd(vecs.T, compute_uv=False)
        rank = int(np.sum(sing > threshold * sing[0]))
        return {"rank": rank, "singular_values": sing, "gap": gap}

    def realize_conformal_factor(self, a: np.ndarray, tol: float = 1e-9) -> dict:
        """Invert B over P, then invert (Lap/2 + 2*lambda) spectrally.

        Returns the conformal factor rho (as a CPoly on the sphere), the
        unique q in P with B(q) = a, and the round-trip operator.
        """
        flat = self.b_ops.reshape(self.d_P, -1).T
        coords, *_ = np.linalg.lstsq(flat, a.reshape(-1), rcond=None)
        resid = np.linalg.norm(flat @ coords - a.reshape(-1))
        if resid > tol * max(1.0, np.linalg.norm(a)):
            raise ValueError(
                f"operator is not in the realizable space (residual {resid:.2e})"
            )
        q = self.p_function(coords)
        rho = CPoly.zero()
        for degree in (0, 12, 20, 24):
            block = invariant_block_basis(degree)
            bspace = MonomialSpace(list(block) + [q])
            mm = moment_matrix(bspace.key_array, bspace.key_array)
            qv = bspace.vector(q)
            lam = degree * (degree + 2) / 2.0 + 2.0 * SPHERICAL_EIGENVALUE
            for f in block:
                c = float(np.real(bspace.vector(f) @ mm @ qv))
                if c:
                    rho = rho + f.scale(c / lam)
        q_rho = sphere_laplacian(rho).scale(0.5) + rho.scale(2.0 * SPHERICAL_EIGENVALUE)
        b_round = self.splitting_matrix(q_rho)
        return {
            "rho": rho,
            "q": q,
            "q_coords": coords,
            "solve_residual": float(resid),
            "roundtrip": b_round,
            "roundtrip_error": float(np.abs(b_round - a).max()),
        }

    def line_realization(
        self,
        target: np.ndarray,
        radius: float = 0.2,
        tol: float = 1e-9,
        max_iter: int = 50,
    ) -> dict:
        """Newton/least-squares on the eigenline chart, starting at the seed operator.

        Finds an operator in the realizable space whose simple lowest
        eigendirection matches the target line in E.
        """
        u = np.asarray(target, dtype=float)
        u = u / np.linalg.norm(u)
        angle0 = float(np.arccos(min(1.0, abs(u @ self.f0_coords))))
        if angle0 > radius:
            return {"status": "out-of-chart", "initial_angle": angle0, "iterations": 0}
        coords = np.zeros(self.d_P)
        a = self.seed_op.copy()
        basisP = _orth_complement(u)
        it = 0
        angle = None
        for it in range(max_iter + 1):
            lam, v, gap = self.lowest_eigvec(a)
            if v @ u < 0:
                v = -v
            r = (basisP.T @ v) / (u @ v)
            angle = float(np.arctan(np.linalg.norm(r)))
            if angle < tol:
                break
            if it == max_iter:
                break
            w, vv = np.linalg.eigh(a)
            jac = np.zeros((12, self.d_P))
            for k in range(self.d_P):
                dv = _eigvec_derivative(w, vv, self.b_ops[k])
                jac[:, k] = (basisP.T @ dv) / (u @ v) - (u @ dv) * (basisP.T @ v) / (
                    u @ v
                ) ** 2
            step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
            coords = coords + step
            a = self.seed_op + self.operator_from_p_coords(coords)
        lam, v, gap = self.lowest_eigvec(a)
        status = "converged" if angle is not None and angle < tol else "no-convergence"
        return {
            "status": status,
            "operator": a,
            "p_coords": coords,
            "iterations": it,
            "angle": angle,
            "gap": gap,
            "initial_angle": angle0,
        }


def _as_cpoly(q) -> CPoly:
    if isinstance(q, CPoly):
        return q
    # real sphere polynomial on R^4
    from .spherepoly import SpherePolynomial

    if isinstance(q, SpherePolynomial):
        if q.dim != 4:
            raise ValueError("conformal factors live on S^3")
        if q.is_exact():
            return CPoly.from_real_coefficients(q.coeffs).to_float()
        exact = {k: Fraction(v).limit_denominator(10 ** 12) for k, v in q.coeffs.items()}
        return CPoly.from_real_coefficients(exact).to_float()
    raise TypeError(f"cannot interpret {q!r} as a function on M")


def _sym_from_pairs(vals: np.ndarray, pairs: list[tuple[int, int]]) -> np.ndarray:
    out = np.zeros((13, 13))
    for v, (i, j) in zip(vals, pairs):
        out[i, j] = v
        out[j, i] = v
    return out


def _orth_complement(u: np.ndarray) -> np.ndarray:
    """Columns form an orthonormal basis of the hyperplane orthogonal to u."""
    n = len(u)
    full = np.eye(n) - np.outer(u, u)
    q, r = np.linalg.qr(full)
    cols = [k for k in range(n) if abs(r[k, k]) > 1e-12]
    return q[:, cols[: n - 1]]


def _eigvec_derivative(w: np.ndarray, v: np.ndarray, h: np.ndarray) -> np.ndarray:
    """First-order change of the lowest eigenvector under A -> A + tH."""
    v0 = v[:, 0]
    num = v.T @ (h @ v0)
    coef = np.zeros_like(num)
    coef[1:] = num[1:] / (w[0] - w[1:])
    return v @ coef


def eigenline_differential(a: np.ndarray, h: np.ndarray, gap_floor: float = 1e-8) -> np.ndarray:
    """d ell_A(H) = -(A - lambda_1 I)^{-1} P_{v_perp}(H v), as a vector in E.

    Raises if the lowest eigenvalue is not simple at relative floor 1e-8.
    """
    w, v = np.linalg.eigh(a)
    scale = max(abs(w[0]), abs(w[-1]), 1e-300)
    if (w[1] - w[0]) <= gap_floor * scale:
        raise ValueError("lowest eigenvalue is not simple (outside the chart domain)")
    v = v.copy()
    k = int(np.argmax(np.abs(v[:, 0])))
    if v[k, 0] < 0:
        v[:, 0] = -v[:, 0]
    return _eigvec_derivative(w, v, h)


@lru_cache(maxsize=1)
def context() -> SplittingContext:
    """Build (and cache) the full splitting algebra."""
    basis = eigenbasis()
    funcs = basis.functions
    pairs = [(i, j) for i in range(13) for j in range(i, 13)]
    products = [funcs[i] * funcs[j] for i, j in pairs]
    space = MonomialSpace(products)
    prod_mat = space.matrix(products)
    mm = moment_matrix(space.key_array, space.key_array)
    prod_gram = np.real(prod_mat.T @ mm @ prod_mat)
    w, v = np.linalg.eigh(prod_gram)
    keep = w > 1e-10 * w.max()
    d_p = int(keep.sum())
    chi_coeff = v[:, keep] / np.sqrt(w[keep])
    # B over the P-basis: B(chi_k)_ij = -avg(chi_k p_ij) = -(chi^T G)_k,(ij)
    pair_vals = -(chi_coeff.T @ prod_gram)
    b_ops = np.stack([_sym_from_pairs(pair_vals[k], pairs) for k in range(d_p)])
    base = np.array([1.0, 0, 0, 0])
    prod_at_o = np.array([p.eval_points(base) for p in products])
    chi_at_o = chi_coeff.T @ prod_at_o
    seed_q_coords = chi_at_o / VOL_M
    seed_op = np.tensordot(seed_q_coords, b_ops, axes=(0, 0))
    return SplittingContext(
        basis=basis,
        pairs=pairs,
        products=products,
        space=space,
        prod_mat=prod_mat,
        prod_gram=prod_gram,
        chi_coeff=chi_coeff,
        d_P=d_p,
        b_ops=b_ops,
        chi_at_o=chi_at_o,
        seed_op=seed_op,
        seed_q_coords=seed_q_coords,
        f0_coords=seed_coordinates(),
    )
