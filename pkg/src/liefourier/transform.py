"""Matrix-valued Fourier transform, Plancherel norm and convolution.

Orientation conventions, fixed globally:

* forward:  fhat(xi) = sum_x w(x) f(x) xi(x)^*          (exact for
  band-limited samples on a sufficient grid),
* inverse:  f(x) = sum_xi d_xi Tr(xi(x) fhat(xi)),
* right convolution: (f * k)(x) = integral f(y) k(y^{-1} x) dy, so that
  widehat(f * k) = khat . fhat (matrix product in that order),
* translation: the coefficients of x -> f(zx) are fhat(xi) xi(z).

All functions are identified with their band-limited truncation at the
working cutoff; no operation silently extends the dual slice.

Transforms use separable quadrature plans (cached per grid) rather than FFTs;
the direct evaluation keeps the exactness bookkeeping simple and is fast
enough at the scales supported here (torus |xi| <= 512, SU(2) spin <= 64).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dual import DualSlice, _jy_eig, evaluate_irrep, little_d
from .errors import PreconditionError
from .groups import TORUS, QuadratureGrid, build_grid, distance_to_identity

_SCALAR_BLOCK_TOL = 1e-13


@dataclass
class GridFunction:
    """Complex samples of a function at the nodes of a quadrature grid."""

    grid: QuadratureGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (len(self.grid),):
            raise PreconditionError("sample count must equal the grid size")


@dataclass
class FourierCoefficients:
    """Band-limited function as one d_xi x d_xi complex matrix per irrep,
    aligned with ``dual.irreps``."""

    dual: DualSlice
    blocks: list[np.ndarray]

    def __post_init__(self):
        if len(self.blocks) != len(self.dual.irreps):
            raise PreconditionError("one block per irrep required")
        self.blocks = [np.asarray(b, dtype=complex) for b in self.blocks]
        for blk, ir in zip(self.blocks, self.dual.irreps):
            if blk.shape != (ir.dim, ir.dim):
                raise PreconditionError(f"block shape {blk.shape} does not match irrep dim {ir.dim}")

    def copy(self) -> "FourierCoefficients":
        return FourierCoefficients(self.dual, [b.copy() for b in self.blocks])


def zero_coefficients(dual: DualSlice) -> FourierCoefficients:
    return FourierCoefficients(dual, [np.zeros((ir.dim, ir.dim), dtype=complex) for ir in dual.irreps])


def random_coefficients(dual: DualSlice, rng: np.random.Generator) -> FourierCoefficients:
    """Independent standard complex Gaussian entries in every block."""
    blocks = []
    for ir in dual.irreps:
        blocks.append(
            (rng.standard_normal((ir.dim, ir.dim)) + 1j * rng.standard_normal((ir.dim, ir.dim)))
            / np.sqrt(2.0)
        )
    return FourierCoefficients(dual, blocks)


def default_grid(dual: DualSlice) -> QuadratureGrid:
    """The coarsest grid of :func:`build_grid` that transforms ``dual`` exactly."""
    return build_grid(dual.group, dual.max_band)


# ---------------------------------------------------------------------------
# Quadrature plans
# ---------------------------------------------------------------------------

class _TorusPlan:
    # full phase tables up to this many entries are cached in the plan
    # (256 MB of complex128); larger products fall back to chunked
    # recomputation
    _TABLE_CAP = 16_000_000

    def __init__(self, grid: QuadratureGrid, dual: DualSlice):
        self.labels = np.array([ir.label for ir in dual.irreps], dtype=float)  # (m, n)
        self.grid = grid
        self.chunk = max(1, 4_000_000 // max(len(grid), 1))
        self.table = None
        if len(grid) * len(self.labels) <= self._TABLE_CAP:
            self.table = np.exp(2j * np.pi * (grid.points @ self.labels.T))

    def forward(self, values: np.ndarray) -> np.ndarray:
        wf = self.grid.weights * values
        if self.table is not None:
            return self.table.conj().T @ wf
        out = np.empty(len(self.labels), dtype=complex)
        pts = self.grid.points
        for lo in range(0, len(self.labels), self.chunk):
            lbl = self.labels[lo : lo + self.chunk]
            phases = np.exp(-2j * np.pi * (pts @ lbl.T))
            out[lo : lo + len(lbl)] = phases.T @ wf
        return out

    def inverse_grid(self, coeff_vector: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return self.table @ coeff_vector
        return self.inverse(coeff_vector, self.grid.points)

    def inverse(self, coeff_vector: np.ndarray, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        vals = np.zeros(len(points), dtype=complex)
        for lo in range(0, len(self.labels), self.chunk):
            lbl = self.labels[lo : lo + self.chunk]
            phases = np.exp(2j * np.pi * (points @ lbl.T))
            vals += phases @ coeff_vector[lo : lo + len(lbl)]
        return vals


class _Su2Plan:
    """Separable transform on the (alpha, beta, gamma) product grid.

    The alpha/gamma sums are plain matrix products against phase tables over
    the half-integer frequency ladder; the beta sum contracts with cached
    little-d tables at the Gauss-Legendre nodes.
    """

    def __init__(self, grid: QuadratureGrid, dual: DualSlice):
        self.grid = grid
        self.dual = dual
        alpha, beta, gamma = grid.axes
        self.shape = (len(alpha), len(beta), len(gamma))
        self.top = int(round(2.0 * dual.max_band))  # largest two_ell
        m = (self.top - np.arange(2 * self.top + 1)) / 2.0  # descending, half steps
        self.freqs = m
        self.p_fwd_a = np.exp(1j * np.outer(m, alpha))
        self.p_fwd_g = np.exp(1j * np.outer(m, gamma))
        self.e_inv_a = np.exp(-1j * np.outer(alpha, m))
        self.e_inv_g = np.exp(-1j * np.outer(m, gamma))
        self.c_beta = grid.beta_weights
        self.d_tables = {}
        for ir in dual.irreps:
            two_ell = int(round(2.0 * ir.label))
            self.d_tables[two_ell] = little_d(two_ell, beta)  # (Nb, d, d)

    def _ids(self, two_ell: int) -> np.ndarray:
        return self.top - two_ell + 2 * np.arange(two_ell + 1)

    def forward(self, values: np.ndarray) -> list[np.ndarray]:
        f3 = values.reshape(self.shape)
        t = np.tensordot(self.p_fwd_a, f3, axes=(1, 0))       # (nf, Nb, Ng)
        t = np.tensordot(t, self.p_fwd_g, axes=(2, 1))        # (nf, Nb, nf) [b, j, a]
        blocks = []
        for ir in self.dual.irreps:
            two_ell = int(round(2.0 * ir.label))
            ids = self._ids(two_ell)
            sub = t[np.ix_(ids, np.arange(self.shape[1]), ids)]
            dl = self.d_tables[two_ell]
            blocks.append(np.einsum("j,jba,bja->ab", self.c_beta, dl, sub, optimize=True))
        return blocks

    def inverse_on_grid(self, blocks: list[np.ndarray]) -> np.ndarray:
        nf = 2 * self.top + 1
        nb = self.shape[1]
        acc = np.zeros((nf, nb, nf), dtype=complex)
        for ir, blk in zip(self.dual.irreps, blocks):
            if not blk.any():
                continue
            two_ell = int(round(2.0 * ir.label))
            ids = self._ids(two_ell)
            dl = self.d_tables[two_ell]
            acc[np.ix_(ids, np.arange(nb), ids)] += ir.dim * np.einsum(
                "jba,ab->bja", dl, blk, optimize=True
            )
        out = np.tensordot(self.e_inv_a, acc, axes=(1, 0))    # (Na, Nb, nf)
        out = np.tensordot(out, self.e_inv_g, axes=(2, 0))    # (Na, Nb, Ng)
        return out.ravel()


def _get_plan(grid: QuadratureGrid, dual: DualSlice):
    if grid.group != dual.group:
        raise PreconditionError("grid and dual slice belong to different groups")
    key = (round(dual.cutoff, 9), len(dual.irreps))
    plan = grid._plans.get(key)
    if plan is None:
        plan = _TorusPlan(grid, dual) if grid.group.kind == TORUS else _Su2Plan(grid, dual)
        grid._plans[key] = plan
    return plan


def _require_resolves(grid: QuadratureGrid, dual: DualSlice):
    if grid.bandlimit < dual.max_band - 1e-9:
        raise PreconditionError(
            f"grid bandlimit {grid.bandlimit} too coarse for dual slice (needs {dual.max_band})"
        )


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def forward_transform(gridfn: GridFunction, dual: DualSlice) -> FourierCoefficients:
    """fhat(xi) = sum_x w(x) f(x) xi(x)^*, exact for band-limited samples."""
    grid = gridfn.grid
    _require_resolves(grid, dual)
    plan = _get_plan(grid, dual)
    if grid.group.kind == TORUS:
        vec = plan.forward(gridfn.values)
        blocks = [np.array([[v]]) for v in vec]
    else:
        blocks = plan.forward(gridfn.values)
    return FourierCoefficients(dual, blocks)


def _scalar_profile(coeffs: FourierCoefficients) -> np.ndarray | None:
    """If every block is c * I, return the vector of c values, else None."""
    out = np.empty(len(coeffs.blocks), dtype=complex)
    for i, blk in enumerate(coeffs.blocks):
        d = blk.shape[0]
        c = np.trace(blk) / d
        if not np.allclose(blk, c * np.eye(d), atol=_SCALAR_BLOCK_TOL * max(1.0, abs(c)), rtol=0.0):
            return None
        out[i] = c
    return out


def inverse_on_grid(coeffs: FourierCoefficients, grid: QuadratureGrid) -> GridFunction:
    """Evaluate the inversion series at every grid node (separable fast path)."""
    _require_resolves(grid, coeffs.dual)
    plan = _get_plan(grid, coeffs.dual)
    if grid.group.kind == TORUS:
        vec = np.array([b[0, 0] for b in coeffs.blocks])
        return GridFunction(grid, plan.inverse_grid(vec))
    return GridFunction(grid, plan.inverse_on_grid(coeffs.blocks))


def inverse_evaluate(coeffs: FourierCoefficients, points: np.ndarray) -> np.ndarray:
    """f(x) = sum_xi d_xi Tr(xi(x) fhat(xi)) at arbitrary points (P, dim).

    On SU(2), coefficients proportional to the identity in every block
    describe a class function; those are summed through characters
    (Chebyshev recurrence in the conjugacy angle), which is what makes
    kernel evaluation at a million translated points affordable.  The
    general path evaluates Wigner matrices per point.
    """
    dual = coeffs.dual
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if dual.group.kind == TORUS:
        labels = np.array([ir.label for ir in dual.irreps], dtype=float)
        vec = np.array([b[0, 0] for b in coeffs.blocks])
        vals = np.zeros(len(points), dtype=complex)
        chunk = max(1, 4_000_000 // max(len(points), 1))
        for lo in range(0, len(labels), chunk):
            lbl = labels[lo : lo + chunk]
            vals += np.exp(2j * np.pi * (points @ lbl.T)) @ vec[lo : lo + len(lbl)]
        return vals

    profile = _scalar_profile(coeffs)
    if profile is not None:
        theta = distance_to_identity(dual.group, points)
        u = np.cos(theta)
        top = int(round(2.0 * dual.max_band))
        coef = np.zeros(top + 1, dtype=complex)
        for ir, c in zip(dual.irreps, profile):
            coef[int(round(2.0 * ir.label))] = ir.dim * c
        # accumulate sum_k coef[k] U_k(u) with the three-term recurrence
        vals = np.full(len(points), coef[0], dtype=complex)
        if top >= 1:
            prev = np.ones_like(u)
            cur = 2.0 * u
            vals = vals + coef[1] * cur
            for k in range(2, top + 1):
                prev, cur = cur, 2.0 * u * cur - prev
                if coef[k] != 0:
                    vals = vals + coef[k] * cur
        return vals

    alpha, beta, gamma = points[:, 0], points[:, 1], points[:, 2]
    vals = np.zeros(len(points), dtype=complex)
    for ir, blk in zip(dual.irreps, coeffs.blocks):
        if not blk.any():
            continue
        two_ell = int(round(2.0 * ir.label))
        lam, vec = _jy_eig(two_ell)
        m = (two_ell / 2.0) - np.arange(two_ell + 1)
        chunk = max(1, 2_000_000 // max((two_ell + 1) ** 2, 1))
        for lo in range(0, len(points), chunk):
            sl = slice(lo, lo + chunk)
            ph = np.exp(-1j * np.outer(beta[sl], lam))
            dmat = np.einsum("ab,pb,cb->pac", vec, ph, np.conj(vec), optimize=True)
            ea = np.exp(-1j * np.outer(alpha[sl], m))
            eg = np.exp(-1j * np.outer(gamma[sl], m))
            vals[sl] += ir.dim * np.einsum("pb,pba,pa,ab->p", ea, dmat, eg, blk, optimize=True)
    return vals


def plancherel_norm(coeffs: FourierCoefficients) -> float:
    """(sum_xi d_xi ||fhat(xi)||_HS^2)^(1/2)."""
    total = 0.0
    for ir, blk in zip(coeffs.dual.irreps, coeffs.blocks):
        total += ir.dim * float(np.sum(np.abs(blk) ** 2))
    return float(np.sqrt(total))


def inner_product(f: FourierCoefficients, g: FourierCoefficients) -> complex:
    """Plancherel pairing sum_xi d_xi Tr(fhat(xi) ghat(xi)^*)."""
    require_same_dual(f.dual, g.dual)
    total = 0.0 + 0.0j
    for ir, fb, gb in zip(f.dual.irreps, f.blocks, g.blocks):
        total += ir.dim * np.trace(fb @ gb.conj().T)
    return complex(total)


def convolve(f: FourierCoefficients, g: FourierCoefficients) -> FourierCoefficients:
    """Right convolution f * g on the shared dual slice: ghat . fhat per irrep."""
    require_same_dual(f.dual, g.dual)
    return FourierCoefficients(f.dual, [gb @ fb for fb, gb in zip(f.blocks, g.blocks)])


def translate_coefficients(coeffs: FourierCoefficients, z: np.ndarray) -> FourierCoefficients:
    """Coefficients of x -> f(zx), namely fhat(xi) xi(z)."""
    dual = coeffs.dual
    blocks = [
        blk @ evaluate_irrep(dual.group, ir, z) for ir, blk in zip(dual.irreps, coeffs.blocks)
    ]
    return FourierCoefficients(dual, blocks)


def reality_defect(coeffs: FourierCoefficients) -> float:
    """How far the coefficients are from those of a real-valued function.

    Torus: max |fhat(-xi) - conj(fhat(xi))|.  SU(2): the corresponding Wigner
    conjugation symmetry conj(fhat[r, c]) = (-1)^(r-c) fhat[d-1-r, d-1-c].
    Checked only on demand (for functions declared real).
    """
    dual = coeffs.dual
    worst = 0.0
    if dual.group.kind == TORUS:
        for ir, blk in zip(dual.irreps, coeffs.blocks):
            neg = tuple(-c for c in ir.label)
            other = coeffs.blocks[dual.index_of[neg]]
            worst = max(worst, float(np.abs(other[0, 0] - np.conj(blk[0, 0]))))
        return worst
    for blk in coeffs.blocks:
        d = blk.shape[0]
        r = np.arange(d)
        signs = (-1.0) ** (r[:, None] - r[None, :])
        worst = max(worst, float(np.max(np.abs(np.conj(blk) - signs * blk[::-1, ::-1]))))
    return worst


def require_same_dual(left: DualSlice, right: DualSlice):
    if left.group != right.group or len(left.irreps) != len(right.irreps):
        raise PreconditionError("operands live on different dual slices")
    if abs(left.cutoff - right.cutoff) > 1e-9:
        raise PreconditionError("operands live on different dual slices")
