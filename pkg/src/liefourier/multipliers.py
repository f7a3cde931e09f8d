"""Fourier multiplier application, window kernels, the far-field
kernel-difference integrals, and empirical operator-norm probes.

A multiplier acts per irrep as fhat(xi) -> sigma(xi) fhat(xi) (left product,
the right-convolution convention).  The window kernel at level ell is the
right-convolution kernel of A psi_ell(B), i.e. the coefficients
sigma(xi) psi_ell(<xi>).

Operator norms on F^r_{p,q} are probed from below with seeded function
ensembles: no finite ensemble certifies an upper bound, so sweep results are
empirical lower bounds and the meaningful assertions are stability (bounded
symbols) or growth trends (symbols violating the conditions).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dual import DualSlice, enumerate_dual, evaluate_irrep
from .errors import ConfigurationError, PreconditionError
from .groups import (
    GroupDescriptor,
    QuadratureGrid,
    distance_to_identity,
    group_diameter,
    inverse,
    multiply,
    random_point,
)
from .spaces import (
    LPPartition,
    NormSpec,
    build_partition,
    lebesgue_norm,
    tl_aggregate,
    window_samples,
)
from .symbols import Symbol, cached_grid
from .transform import (
    FourierCoefficients,
    GridFunction,
    inverse_evaluate,
    inverse_on_grid,
    random_coefficients,
    require_same_dual,
)

ENSEMBLE_KINDS = (
    "gaussian-coefficients",
    "dirichlet-kernels",
    "translated-windows",
    "adjoint-dirichlet",
    "directed-irrep",
)


def apply_multiplier(symbol: Symbol, coeffs: FourierCoefficients) -> FourierCoefficients:
    """T_sigma on the coefficient side: per-irrep left product sigma . fhat."""
    require_same_dual(symbol.dual, coeffs.dual)
    return FourierCoefficients(
        coeffs.dual, [s @ f for s, f in zip(symbol.blocks, coeffs.blocks)]
    )


@dataclass
class KernelWindow:
    """Right-convolution kernel of A psi_ell(B): coefficients
    sigma(xi) psi_ell(<xi>), vanishing outside <xi> in (2^(ell-1), 2^(ell+1))."""

    level: int
    coeffs: FourierCoefficients


def window_kernel(symbol: Symbol, partition: LPPartition, level: int) -> KernelWindow:
    if level < 0:
        raise PreconditionError("window index must be >= 0")
    scale = partition.psi(level, symbol.dual.eigenvalues)
    blocks = [s * blk for s, blk in zip(scale, symbol.blocks)]
    return KernelWindow(level, FourierCoefficients(symbol.dual, blocks))


def kernel_difference_integral(
    kernel: KernelWindow | FourierCoefficients,
    z: np.ndarray,
    c: float,
    grid: QuadratureGrid,
) -> float:
    """integral over {|x| > 4c|z|} of |kappa(z^{-1} x) - kappa(x)| dx,
    by quadrature on the grid, with the translated values summed exactly
    through the inversion series (never grid interpolation).

    Returns 0 when the domain is empty (4c|z| at least the diameter).
    """
    coeffs = kernel.coeffs if isinstance(kernel, KernelWindow) else kernel
    group = coeffs.dual.group
    if c <= 0:
        raise PreconditionError("c must be positive")
    zlen = float(distance_to_identity(group, np.asarray(z, dtype=float)))
    if zlen == 0.0:
        raise PreconditionError("z must differ from the identity")
    threshold = 4.0 * c * zlen
    if threshold >= group_diameter(group):
        return 0.0
    dist = distance_to_identity(group, grid.points)
    mask = dist > threshold
    if not np.any(mask):
        return 0.0
    base = inverse_on_grid(coeffs, grid).values[mask]
    z_inv = inverse(group, z)
    translated = multiply(group, z_inv, grid.points[mask])
    moved = inverse_evaluate(coeffs, translated)
    return float(np.sum(grid.weights[mask] * np.abs(moved - base)))


def decay_slope(levels, integrals) -> float:
    """Least-squares slope of log2(integral) against the window index."""
    levels = np.asarray(levels, dtype=float)
    vals = np.log2(np.maximum(np.asarray(integrals, dtype=float), 1e-300))
    return float(np.polyfit(levels, vals, 1)[0])


def exact_l2_operator_norm(symbol: Symbol) -> float:
    """sup_xi ||sigma(xi)||_op: the exact L2 -> L2 operator norm."""
    worst = 0.0
    for blk in symbol.blocks:
        if blk.size:
            worst = max(worst, float(np.linalg.norm(blk, 2)))
    return worst


# ---------------------------------------------------------------------------
# Seeded ensembles and boundedness sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnsembleConfig:
    """Which probe family to draw and how many members."""

    kind: str
    count: int

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ConfigurationError(f"unknown ensemble kind {self.kind!r}")
        if self.count < 1:
            raise ConfigurationError("ensemble count must be >= 1")


def ensemble_member(
    config: EnsembleConfig,
    index: int,
    dual: DualSlice,
    partition: LPPartition,
    rng: np.random.Generator,
    symbol: Symbol | None = None,
) -> FourierCoefficients:
    """Deterministic member ``index`` of the ensemble (rng carries the seed).

    gaussian-coefficients: white complex Gaussian blocks.
    dirichlet-kernels: identity blocks up to a member-dependent cutoff.
    translated-windows: a dyadic window kernel translated by a random point.
    adjoint-dirichlet: sigma(xi)^* times a Dirichlet cutoff (probes T_sigma
        through its adjoint; the natural growth witness for chirp symbols).
    directed-irrep: the rank-one block aligned with the top singular
        direction at the irrep attaining ||sigma||_Linf.
    """
    group = dual.group
    if config.kind == "gaussian-coefficients":
        return random_coefficients(dual, rng)
    if config.kind == "dirichlet-kernels":
        frac = (index + 1) / config.count
        thr = 1.0 + frac * (dual.cutoff - 1.0)
        blocks = [
            np.eye(ir.dim, dtype=complex) if ir.eigenvalue <= thr else np.zeros((ir.dim, ir.dim), complex)
            for ir in dual.irreps
        ]
        return FourierCoefficients(dual, blocks)
    if config.kind == "translated-windows":
        levels = partition.levels(dual.cutoff)
        ell = levels[max(0, len(levels) - 1 - (index % min(3, len(levels))))]
        z = random_point(group, rng)
        scale = partition.psi(ell, dual.eigenvalues)
        blocks = [
            s * evaluate_irrep(group, ir, z) for s, ir in zip(scale, dual.irreps)
        ]
        return FourierCoefficients(dual, blocks)
    if config.kind == "adjoint-dirichlet":
        if symbol is None:
            raise PreconditionError("adjoint-dirichlet members need the symbol")
        frac = (index + 1) / config.count
        thr = 1.0 + frac * (dual.cutoff - 1.0)
        blocks = [
            blk.conj().T if ir.eigenvalue <= thr else np.zeros((ir.dim, ir.dim), complex)
            for ir, blk in zip(dual.irreps, symbol.blocks)
        ]
        return FourierCoefficients(dual, blocks)
    if config.kind == "directed-irrep":
        if symbol is None:
            raise PreconditionError("directed-irrep members need the symbol")
        best_i = max(
            range(len(symbol.blocks)), key=lambda i: np.linalg.norm(symbol.blocks[i], 2)
        )
        blocks = [np.zeros((ir.dim, ir.dim), dtype=complex) for ir in dual.irreps]
        _, _, vh = np.linalg.svd(symbol.blocks[best_i])
        blocks[best_i][:, 0] = vh[0].conj()
        return FourierCoefficients(dual, blocks)
    raise ConfigurationError(f"unknown ensemble kind {config.kind!r}")


@dataclass
class BoundednessSweep:
    """max_{ensemble} ||T_sigma f|| / ||f|| per cutoff, for one (r, p, q).

    Ratios are empirical lower bounds of the operator norm; the p = 1 rows
    use the weak quasi-norm in the numerator (weak-type probing) over the
    strong F^r_{1,q} norm of the input.
    """

    symbol_id: str
    spec: NormSpec
    cutoffs: tuple[float, ...]
    max_ratios: tuple[float, ...]
    argmax_members: tuple[int, ...]
    ensemble: EnsembleConfig
    seed: int
    metadata: dict = field(default_factory=dict)


def boundedness_sweep(
    group: GroupDescriptor,
    symbol_builder,
    specs: NormSpec | list[NormSpec],
    cutoffs: list[float],
    ensemble: EnsembleConfig,
    seed: int,
    partition: LPPartition | None = None,
    symbol_id: str = "symbol",
) -> list[BoundednessSweep]:
    """Run the ensemble through T_sigma at each cutoff.

    ``symbol_builder`` maps a dual slice to the symbol on it (symbols must be
    rebuilt per cutoff).  Members are deterministic functions of
    (seed, cutoff index, member index); reductions run in member order.
    """
    single = isinstance(specs, NormSpec)
    spec_list = [specs] if single else list(specs)
    part = partition if partition is not None else build_partition()
    if list(cutoffs) != sorted(cutoffs):
        raise PreconditionError("cutoffs must be ascending")
    ratios = np.zeros((len(spec_list), len(cutoffs)))
    argmax = np.zeros((len(spec_list), len(cutoffs)), dtype=int)
    for ci, lam in enumerate(cutoffs):
        dual = enumerate_dual(group, lam)
        grid = cached_grid(group, dual.max_band)
        symbol = symbol_builder(dual)
        for mi in range(ensemble.count):
            rng = np.random.default_rng([seed, ci, mi])
            f = ensemble_member(ensemble, mi, dual, part, rng, symbol)
            tf = apply_multiplier(symbol, f)
            levels, wf = window_samples(f, part, grid)
            _, wt = window_samples(tf, part, grid)
            for si, spec in enumerate(spec_list):
                denom_agg = tl_aggregate(levels, wf, spec.r, spec.q)
                denom = lebesgue_norm(GridFunction(grid, denom_agg.astype(complex)), spec.p)
                num_agg = tl_aggregate(levels, wt, spec.r, spec.q)
                if spec.p == 1.0:
                    num = _weak_from_aggregate(num_agg, grid.weights)
                else:
                    num = lebesgue_norm(GridFunction(grid, num_agg.astype(complex)), spec.p)
                if denom <= 0.0:
                    continue
                ratio = num / denom
                if ratio > ratios[si, ci]:
                    ratios[si, ci] = ratio
                    argmax[si, ci] = mi
    sweeps = []
    for si, spec in enumerate(spec_list):
        sweeps.append(
            BoundednessSweep(
                symbol_id,
                spec,
                tuple(float(c) for c in cutoffs),
                tuple(float(v) for v in ratios[si]),
                tuple(int(v) for v in argmax[si]),
                ensemble,
                seed,
            )
        )
    return sweeps


def _weak_from_aggregate(agg: np.ndarray, weights: np.ndarray) -> float:
    order = np.argsort(agg)
    values = agg[order]
    w = weights[order]
    measure_ge = np.cumsum(w[::-1])[::-1]
    return float(np.max(values * measure_ge)) if len(values) else 0.0
