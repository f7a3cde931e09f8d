"""Symbols on the unitary dual, difference operators, dual-side Sobolev
norms, and the symbol-condition checkers (Marcinkiewicz, Hormander-Mihlin,
weak Marcinkiewicz).

Difference operators act through the transform: for sigma = fhat, a smooth q
vanishing at the identity induces  Delta_q sigma = widehat(q f).  The
first-order generator collections used here are

* torus:  q_j(x) = exp(-2*pi*i*x_j) - 1, one per coordinate, so that the
  one-dimensional difference is the forward difference
  sigma(xi + 1) - sigma(xi);
* SU(2):  q_ij(g) = xi0(g)_ij - delta_ij for the fundamental (spin 1/2)
  representation xi0, four generators.

Both collections are strongly admissible (the common zero set is {e}).
A degree-one generator couples <xi>-neighbours only, so a difference of
order |alpha| is trusted on irreps whose neighbours within |alpha| coupling
steps stay inside the working cutoff; every returned symbol carries that
validity mask and the checkers report constants over trusted irreps only.

Constants are basis dependent (the fundamental representation is fixed in
the standard spin basis); reports are convention relative.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .dual import DualSlice, IrrepIndex
from .errors import ConfigurationError, MarginError, PreconditionError
from .groups import TORUS, GroupDescriptor, QuadratureGrid, build_grid, q1_weight, su2_pair
from .spaces import LPPartition, build_partition
from .transform import FourierCoefficients, GridFunction, forward_transform, inverse_on_grid

_GRID_CACHE: "OrderedDict[tuple, QuadratureGrid]" = OrderedDict()
_GRID_CACHE_MAX = 24


def cached_grid(group: GroupDescriptor, bandlimit: float) -> QuadratureGrid:
    """Memoised build_grid; grids are immutable so sharing is safe."""
    key = (group.kind, group.dim, round(float(bandlimit), 9))
    grid = _GRID_CACHE.get(key)
    if grid is None:
        grid = build_grid(group, bandlimit)
        _GRID_CACHE[key] = grid
        while len(_GRID_CACHE) > _GRID_CACHE_MAX:
            _GRID_CACHE.popitem(last=False)
    return grid


@dataclass
class Symbol:
    """Matrix-valued function on a dual slice: one d_xi x d_xi block per
    irrep.  ``valid`` marks the irreps on which the values are trusted after
    difference operations (None means all)."""

    dual: DualSlice
    blocks: list[np.ndarray]
    valid: np.ndarray | None = None

    def __post_init__(self):
        if len(self.blocks) != len(self.dual.irreps):
            raise PreconditionError("one block per irrep required")
        self.blocks = [np.asarray(b, dtype=complex) for b in self.blocks]
        for blk, ir in zip(self.blocks, self.dual.irreps):
            if blk.shape != (ir.dim, ir.dim):
                raise PreconditionError(f"block shape {blk.shape} does not match irrep dim {ir.dim}")
        if self.valid is not None:
            self.valid = np.asarray(self.valid, dtype=bool)

    def valid_mask(self) -> np.ndarray:
        if self.valid is None:
            return np.ones(len(self.blocks), dtype=bool)
        return self.valid

    def as_coefficients(self) -> FourierCoefficients:
        return FourierCoefficients(self.dual, [b.copy() for b in self.blocks])


def identity_symbol(dual: DualSlice) -> Symbol:
    return Symbol(dual, [np.eye(ir.dim, dtype=complex) for ir in dual.irreps])


def build_spectral_symbol(profile, dual: DualSlice) -> Symbol:
    """sigma(xi) = g(<xi>) * I for a scalar profile g defined on [1, inf)."""
    values = np.asarray(profile(dual.eigenvalues), dtype=complex)
    return Symbol(dual, [v * np.eye(ir.dim) for v, ir in zip(values, dual.irreps)])


def sign_symbol(dual: DualSlice) -> Symbol:
    """sign of the first label coordinate (torus only); the classical
    bounded-variation test symbol."""
    if dual.group.kind != TORUS:
        raise ConfigurationError("the sign symbol is defined on the torus only")
    blocks = [np.array([[float(np.sign(ir.label[0]))]], dtype=complex) for ir in dual.irreps]
    return Symbol(dual, blocks)


def dyadic_rademacher_symbol(dual: DualSlice, seed: int) -> Symbol:
    """Random +-1 on each dyadic block 2^(j-1) <= <xi> < 2^j (seeded)."""
    rng = np.random.default_rng(seed)
    signs = rng.choice([-1.0, 1.0], size=80)
    blocks = []
    for ir in dual.irreps:
        j = max(0, int(math.floor(math.log2(ir.eigenvalue))) + 1)
        blocks.append(signs[j] * np.eye(ir.dim, dtype=complex))
    return Symbol(dual, blocks)


def symbol_from_config(cfg: dict, dual: DualSlice, partition: LPPartition | None = None) -> Symbol:
    """Build a symbol from a declarative config, e.g. {"type": "power_it",
    "t": 5.0}.  Supported types: identity, power_it, wave, sign, window,
    dyadic_rademacher."""
    kind = cfg.get("type")
    if kind == "identity":
        return identity_symbol(dual)
    if kind == "power_it":
        t = float(cfg.get("t", 1.0))
        return build_spectral_symbol(lambda lam: lam ** (1j * t), dual)
    if kind == "wave":
        return build_spectral_symbol(lambda lam: np.exp(1j * lam), dual)
    if kind == "sign":
        return sign_symbol(dual)
    if kind == "window":
        part = partition if partition is not None else build_partition()
        ell = int(cfg["ell"])
        return build_spectral_symbol(lambda lam: part.psi(ell, lam).astype(complex), dual)
    if kind == "dyadic_rademacher":
        return dyadic_rademacher_symbol(dual, int(cfg.get("seed", 0)))
    raise ConfigurationError(f"unknown symbol type {cfg.get('type')!r}")


def symbol_linf(symbol: Symbol) -> float:
    """sup over the slice of the per-irrep operator norm."""
    mask = symbol.valid_mask()
    worst = 0.0
    for keep, blk in zip(mask, symbol.blocks):
        if keep and blk.size:
            worst = max(worst, float(np.linalg.norm(blk, 2)))
    return worst


# ---------------------------------------------------------------------------
# Difference operators
# ---------------------------------------------------------------------------

def generator_count(group: GroupDescriptor) -> int:
    return group.dim if group.kind == TORUS else 4


def generator_values(group: GroupDescriptor, index: int, points: np.ndarray) -> np.ndarray:
    """The first-order generator function q_index evaluated at points."""
    points = np.asarray(points, dtype=float)
    if group.kind == TORUS:
        if not 0 <= index < group.dim:
            raise ConfigurationError(f"torus generator index {index} out of range")
        return np.exp(-2j * np.pi * points[..., index]) - 1.0
    if not 0 <= index < 4:
        raise ConfigurationError(f"su2 generator index {index} out of range")
    a, b = su2_pair(points)
    i, j = divmod(index, 2)
    if (i, j) == (0, 0):
        return a - 1.0
    if (i, j) == (0, 1):
        return -np.conj(b)
    if (i, j) == (1, 0):
        return b
    return np.conj(a) - 1.0


@dataclass(frozen=True)
class DifferenceSpec:
    """A concrete difference operation: the multi-index over the group's
    first-order generator collection, optionally followed by the fractional
    weight q1^s."""

    group: GroupDescriptor
    alpha: tuple[int, ...]
    fractional_order: float = 0.0

    def __post_init__(self):
        if len(self.alpha) != generator_count(self.group):
            raise PreconditionError("multi-index length must match the generator count")
        if any(a < 0 for a in self.alpha) or self.fractional_order < 0:
            raise PreconditionError("difference orders must be nonnegative")

    @property
    def order(self) -> int:
        return int(sum(self.alpha))


def _band_extension(group: GroupDescriptor, order: int) -> float:
    # one torus generator shifts a frequency by 1; one su2 generator couples
    # spins l to l +- 1/2
    return float(order) if group.kind == TORUS else order / 2.0


def difference_validity(dual: DualSlice, order: int) -> np.ndarray:
    """Mask of irreps whose |alpha|-step neighbourhoods stay inside the slice."""
    if order == 0:
        return np.ones(len(dual.irreps), dtype=bool)
    if dual.group.kind == TORUS:
        max_norm = math.sqrt(max(dual.cutoff**2 - 1.0, 0.0))
        norms = np.array([math.sqrt(sum(c * c for c in ir.label)) for ir in dual.irreps])
        return norms <= max_norm - order + 1e-9
    ell_max = dual.max_band
    spins = np.array([float(ir.label) for ir in dual.irreps])
    return spins <= ell_max - order / 2.0 + 1e-9


def _realize(symbol: Symbol, order: int) -> tuple[GridFunction, QuadratureGrid]:
    grid = cached_grid(symbol.dual.group, symbol.dual.max_band + math.ceil(_band_extension(symbol.dual.group, order)))
    return inverse_on_grid(symbol.as_coefficients(), grid), grid


def apply_difference(symbol: Symbol, alpha: tuple[int, ...]) -> Symbol:
    """The multi-index difference of a symbol.

    Realises f with sigma = fhat, multiplies by q^alpha pointwise on a grid
    fine enough for exactness, and transforms back.  The result is valid on
    irreps with an |alpha|-step margin to the cutoff; if no irrep has that
    margin a :class:`MarginError` states the required cutoff.
    """
    return _difference_batch(symbol, [tuple(alpha)])[0]


def _difference_batch(symbol: Symbol, alphas: list[tuple[int, ...]]) -> list[Symbol]:
    """Differences for several multi-indices, sharing one realisation of f."""
    group = symbol.dual.group
    count = generator_count(group)
    orders = []
    for alpha in alphas:
        if len(alpha) != count:
            raise PreconditionError(f"multi-index {alpha} has wrong length for {group.kind}")
        if any(a < 0 for a in alpha):
            raise PreconditionError("multi-index entries must be nonnegative")
        orders.append(int(sum(alpha)))
    max_order = max(orders)
    _require_margin(symbol.dual, max_order)
    base_valid = symbol.valid_mask()
    if max_order == 0:
        return [Symbol(symbol.dual, [b.copy() for b in symbol.blocks], base_valid.copy()) for _ in alphas]

    fgrid, grid = _realize(symbol, max_order)
    gen_cache: dict[int, np.ndarray] = {}
    out = []
    for alpha, order in zip(alphas, orders):
        if order == 0:
            out.append(Symbol(symbol.dual, [b.copy() for b in symbol.blocks], base_valid.copy()))
            continue
        factor = np.ones(len(grid), dtype=complex)
        for idx, power in enumerate(alpha):
            if power:
                if idx not in gen_cache:
                    gen_cache[idx] = generator_values(group, idx, grid.points)
                factor = factor * gen_cache[idx] ** power
        shifted = forward_transform(GridFunction(grid, fgrid.values * factor), symbol.dual)
        valid = base_valid & difference_validity(symbol.dual, order)
        out.append(Symbol(symbol.dual, shifted.blocks, valid))
    return out


def _require_margin(dual: DualSlice, order: int):
    if order == 0:
        return
    if not difference_validity(dual, order).any():
        if dual.group.kind == TORUS:
            needed = math.sqrt(1.0 + float(order) ** 2)
        else:
            ell = order / 2.0
            needed = math.sqrt(1.0 + ell * (ell + 1.0))
        raise MarginError(
            f"no irrep has an order-{order} margin inside cutoff {dual.cutoff:g}; "
            f"the cutoff must be at least {needed:g} (and larger to trust useful irreps)"
        )


def multi_indices(count: int, order: int) -> list[tuple[int, ...]]:
    """All multi-indices over ``count`` generators with |alpha| = order."""
    if order == 0:
        return [tuple([0] * count)]
    if count == 1:
        return [(order,)]
    out = []
    for head in range(order + 1):
        for tail in multi_indices(count - 1, order - head):
            out.append((head,) + tail)
    return out


# ---------------------------------------------------------------------------
# Dual-side Sobolev norms
# ---------------------------------------------------------------------------

def dual_sobolev_norm(symbol: Symbol, s: float) -> float:
    """|| q1^s f ||_{L^2(G)} with sigma = fhat (homogeneous dual Sobolev norm).

    Exact quadrature for integer s (q1^2 is band limited); fractional s uses
    the same oversampled grid as an approximation.
    """
    if s < 0:
        raise PreconditionError("the Sobolev order must be >= 0")
    group = symbol.dual.group
    grid = cached_grid(group, symbol.dual.max_band + math.ceil(max(s, 0.0)))
    f = inverse_on_grid(symbol.as_coefficients(), grid)
    weight = q1_weight(group, grid.points) ** (2.0 * s) if s > 0 else 1.0
    return float(np.sqrt(np.sum(grid.weights * weight * np.abs(f.values) ** 2)))


def dual_l2_norm(symbol: Symbol, valid_only: bool = True) -> float:
    """Plancherel norm over (optionally only the trusted part of) the slice."""
    mask = symbol.valid_mask() if valid_only else np.ones(len(symbol.blocks), dtype=bool)
    total = 0.0
    for keep, ir, blk in zip(mask, symbol.dual.irreps, symbol.blocks):
        if keep:
            total += ir.dim * float(np.sum(np.abs(blk) ** 2))
    return float(np.sqrt(total))


# ---------------------------------------------------------------------------
# Condition checkers
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    """Outcome of one symbol-condition check.

    ``constants`` maps the per-order keys (multi-indices, dyadic scales or
    block indices) to nonnegative constants; ``headline`` is their max.
    """

    condition: str
    constants: dict
    headline: float
    worst_irrep: IrrepIndex | None
    threshold: float | None = None
    passed: bool | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.threshold is not None and self.passed is None:
            self.passed = bool(self.headline <= self.threshold)


def default_kappa(group: GroupDescriptor) -> int:
    return group.dim // 2 + 1


def check_marcinkiewicz(symbol: Symbol, kappa: int | None = None, threshold: float | None = None) -> CheckReport:
    """C_alpha = sup_xi ||D^alpha sigma(xi)||_op <xi>^{|alpha|} for every
    multi-index with |alpha| <= kappa (default floor(n/2) + 1)."""
    group = symbol.dual.group
    if kappa is None:
        kappa = default_kappa(group)
    count = generator_count(group)
    alphas = [a for k in range(kappa + 1) for a in multi_indices(count, k)]
    diffs = _difference_batch(symbol, alphas)
    eigs = symbol.dual.eigenvalues
    constants: dict = {}
    worst_irrep = None
    worst_val = -1.0
    for alpha, diff in zip(alphas, diffs):
        order = sum(alpha)
        mask = diff.valid_mask()
        best = 0.0
        best_ir = None
        for keep, ir, blk, eig in zip(mask, symbol.dual.irreps, diff.blocks, eigs):
            if not keep:
                continue
            val = float(np.linalg.norm(blk, 2)) * eig**order
            if val > best:
                best, best_ir = val, ir
        constants[alpha] = best
        if best > worst_val:
            worst_val, worst_irrep = best, best_ir
    headline = max(constants.values()) if constants else 0.0
    return CheckReport(
        "marcinkiewicz",
        constants,
        headline,
        worst_irrep,
        threshold,
        metadata={"kappa": kappa, "cutoff": symbol.dual.cutoff},
    )


def check_hormander_mihlin(
    symbol: Symbol,
    s: float | None = None,
    partition: LPPartition | None = None,
    threshold: float | None = None,
) -> CheckReport:
    """||sigma||_Linf + sup_r r^{s - n/2} ||sigma . eta(<xi>/r)||_{L2_s(dual)}
    with the sup taken over the half-octave grid r = 2^{j/2}, j = 0 ..
    2*log2(cutoff).

    The half-octave spacing is a sup surrogate: refining the r grid changes
    the sup by at most the eta-overlap factor.
    """
    group = symbol.dual.group
    n = group.dim
    if s is None:
        s = float(n // 2 + 1)
    if s <= n / 2.0:
        raise PreconditionError(f"the Sobolev order must exceed n/2 = {n / 2}")
    part = partition if partition is not None else build_partition()
    linf = symbol_linf(symbol)
    eigs = symbol.dual.eigenvalues
    constants: dict = {}
    worst_r = None
    worst_val = -1.0
    j_top = int(math.ceil(2.0 * math.log2(max(symbol.dual.cutoff, 1.0))))
    for j in range(j_top + 1):
        r = 2.0 ** (j / 2.0)
        window = part.eta(eigs / r)
        if not np.any(window > 1e-15):
            continue
        tau = Symbol(symbol.dual, [w * blk for w, blk in zip(window, symbol.blocks)], symbol.valid)
        val = r ** (s - n / 2.0) * dual_sobolev_norm(tau, s)
        constants[r] = linf + val
        if val > worst_val:
            worst_val, worst_r = val, r
    headline = max(constants.values()) if constants else linf
    return CheckReport(
        "hormander-mihlin",
        constants,
        headline,
        None,
        threshold,
        metadata={"s": s, "cutoff": symbol.dual.cutoff, "linf": linf, "worst_scale": worst_r},
    )


def check_weak_marcinkiewicz(symbol: Symbol, s0: int, threshold: float | None = None) -> CheckReport:
    """Per dyadic block j: 2^{-j(n - s0)} sum_{|alpha| = s0}
    sum_{<xi> in block} d_xi Tr|D^alpha sigma(xi)|, headline = sup over j.

    Differences are taken of the full symbol and then summed over the block
    (the classical torus condition sums |sigma(xi+1) - sigma(xi)| over
    blocks), so blocks where the symbol is locally constant contribute 0.
    Blocks touching irreps without the order-s0 margin are skipped and
    listed in the metadata.
    """
    group = symbol.dual.group
    n = group.dim
    if s0 != int(s0) or not 0 <= s0 <= n:
        raise PreconditionError(f"s0 must be an integer in [0, {n}]")
    s0 = int(s0)
    count = generator_count(group)
    alphas = multi_indices(count, s0)
    diffs = _difference_batch(symbol, alphas)
    valid = np.ones(len(symbol.dual.irreps), dtype=bool)
    for diff in diffs:
        valid &= diff.valid_mask()
    eigs = symbol.dual.eigenvalues
    dims = symbol.dual.dims
    nuclear = np.zeros(len(eigs))
    for diff in diffs:
        for i, blk in enumerate(diff.blocks):
            if valid[i]:
                nuclear[i] += float(np.sum(np.linalg.svd(blk, compute_uv=False)))
    constants: dict = {}
    skipped = []
    j_top = int(math.ceil(math.log2(max(symbol.dual.cutoff, 1.0)))) + 1
    for j in range(j_top + 1):
        in_block = (eigs >= 2.0 ** (j - 1)) & (eigs < 2.0**j)
        if not np.any(in_block):
            continue
        if not valid[in_block].all():
            skipped.append(j)
            continue
        total = float(np.sum(dims[in_block] * nuclear[in_block]))
        constants[j] = total * 2.0 ** (-j * (n - s0))
    headline = max(constants.values()) if constants else 0.0
    return CheckReport(
        "weak-marcinkiewicz",
        constants,
        headline,
        None,
        threshold,
        metadata={
            "s0": s0,
            "cutoff": symbol.dual.cutoff,
            "linf": symbol_linf(symbol),
            "skipped_blocks": skipped,
        },
    )
