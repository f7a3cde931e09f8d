import numpy as np
import pytest

from liefourier import (
    EnsembleConfig,
    FourierCoefficients,
    NormSpec,
    Symbol,
    apply_multiplier,
    boundedness_sweep,
    build_spectral_symbol,
    enumerate_dual,
    exact_l2_operator_norm,
    identity_symbol,
    kernel_difference_integral,
    plancherel_norm,
    random_coefficients,
    window_kernel,
)
from liefourier.dual import spin_cutoff
from liefourier.errors import ConfigurationError, PreconditionError
from liefourier.groups import build_grid, su2_point_from_distance
from liefourier.multipliers import decay_slope, ensemble_member
from liefourier.symbols import cached_grid


def test_identity_symbol_acts_trivially(torus1):
    dual = enumerate_dual(torus1, 16.0)
    f = random_coefficients(dual, np.random.default_rng(0))
    out = apply_multiplier(identity_symbol(dual), f)
    assert max(np.max(np.abs(a - b)) for a, b in zip(out.blocks, f.blocks)) == 0.0


def test_mode_projection_symbol(torus1):
    dual = enumerate_dual(torus1, 8.0)
    blocks = [
        (np.eye(1, dtype=complex) if ir.label == (3,) else np.zeros((1, 1), complex))
        for ir in dual.irreps
    ]
    sig = Symbol(dual, blocks)
    f = random_coefficients(dual, np.random.default_rng(1))
    out = apply_multiplier(sig, f)
    for ir, fb, ob in zip(dual.irreps, f.blocks, out.blocks):
        if ir.label == (3,):
            assert abs(ob[0, 0] - fb[0, 0]) < 1e-15
        else:
            assert abs(ob[0, 0]) < 1e-15


def test_l2_contraction_bound(su2):
    dual = enumerate_dual(su2, spin_cutoff(3))
    rng = np.random.default_rng(2)
    sig = build_spectral_symbol(lambda lam: np.exp(1j * lam) / np.sqrt(lam), dual)
    bound = exact_l2_operator_norm(sig)
    for _ in range(5):
        f = random_coefficients(dual, rng)
        assert plancherel_norm(apply_multiplier(sig, f)) <= bound * plancherel_norm(f) * (1 + 1e-12)


def test_multiplier_composition(su2):
    dual = enumerate_dual(su2, spin_cutoff(2))
    rng = np.random.default_rng(3)
    a = Symbol(dual, [rng.standard_normal((ir.dim, ir.dim)) + 0j for ir in dual.irreps])
    b = Symbol(dual, [rng.standard_normal((ir.dim, ir.dim)) + 0j for ir in dual.irreps])
    ab = Symbol(dual, [x @ y for x, y in zip(a.blocks, b.blocks)])
    f = random_coefficients(dual, rng)
    lhs = apply_multiplier(a, apply_multiplier(b, f))
    rhs = apply_multiplier(ab, f)
    assert max(np.max(np.abs(x - y)) for x, y in zip(lhs.blocks, rhs.blocks)) < 1e-12


def test_shape_mismatch_raises(torus1):
    f = random_coefficients(enumerate_dual(torus1, 8.0), np.random.default_rng(4))
    sig = identity_symbol(enumerate_dual(torus1, 4.0))
    with pytest.raises(PreconditionError):
        apply_multiplier(sig, f)


# ---------------------------------------------------------------------------
# Window kernels
# ---------------------------------------------------------------------------

def test_window_support_invariant(torus1, partition):
    dual = enumerate_dual(torus1, 64.0)
    sig = build_spectral_symbol(lambda lam: lam ** (1j), dual)
    for ell in (1, 2, 3):
        kernel = window_kernel(sig, partition, ell)
        for ir, blk in zip(dual.irreps, kernel.coeffs.blocks):
            if not 2.0 ** (ell - 1) < ir.eigenvalue < 2.0 ** (ell + 1):
                assert np.max(np.abs(blk)) <= 1e-15


def test_window_kernel_positive_at_identity(torus1, partition):
    from liefourier.transform import inverse_evaluate

    dual = enumerate_dual(torus1, 32.0)
    kernel = window_kernel(identity_symbol(dual), partition, 2)
    val = inverse_evaluate(kernel.coeffs, np.zeros((1, 1)))
    expected = sum(partition.psi(2, ir.eigenvalue) for ir in dual.irreps)
    assert val[0].real > 0
    assert abs(val[0] - expected) < 1e-10


def test_window_zero_mean_except_low_piece(torus1, partition):
    # only the trivial irrep contributes to the mean; psi_0(1) = 1
    dual = enumerate_dual(torus1, 16.0)
    rng = np.random.default_rng(5)
    sig = Symbol(dual, [np.array([[rng.standard_normal() + 0j]]) for _ in dual.irreps])
    k0 = window_kernel(sig, partition, 0)
    trivial = dual.index_of[(0,)]
    assert abs(k0.coeffs.blocks[trivial][0, 0] - sig.blocks[trivial][0, 0]) < 1e-15
    k2 = window_kernel(sig, partition, 2)
    assert abs(k2.coeffs.blocks[trivial][0, 0]) < 1e-15


def test_window_sum_reconstructs_symbol(su2, partition):
    dual = enumerate_dual(su2, spin_cutoff(4))
    sig = build_spectral_symbol(lambda lam: lam ** (2j), dual)
    acc = [np.zeros_like(b) for b in sig.blocks]
    for ell in partition.levels(dual.cutoff):
        kernel = window_kernel(sig, partition, ell)
        acc = [a + b for a, b in zip(acc, kernel.coeffs.blocks)]
    assert max(np.max(np.abs(a - b)) for a, b in zip(acc, sig.blocks)) < 1e-11


# ---------------------------------------------------------------------------
# Kernel difference integrals
# ---------------------------------------------------------------------------

def test_empty_domain_returns_zero(torus1, partition):
    dual = enumerate_dual(torus1, 16.0)
    kernel = window_kernel(identity_symbol(dual), partition, 1)
    grid = cached_grid(torus1, dual.max_band)
    z = np.array([0.3])  # |z| = 0.6 pi, 4|z| = 2.4 pi > pi = diameter
    assert kernel_difference_integral(kernel, z, 1.0, grid) == 0.0


def test_oversampling_oracle_torus(torus1, partition):
    # the coarse-grid quadrature must match a 10x denser reference within 1%
    dual = enumerate_dual(torus1, 64.0)
    sig = identity_symbol(dual)
    kernel = window_kernel(sig, partition, 0)
    z = np.array([0.07])
    coarse = kernel_difference_integral(kernel, z, 1.0, cached_grid(torus1, dual.max_band))
    dense = kernel_difference_integral(kernel, z, 1.0, build_grid(torus1, 10 * int(dual.max_band)))
    assert abs(coarse - dense) <= 0.01 * dense


def test_inverse_symmetry_real_kernel(torus1, partition):
    # real symmetric kernels: the integral is invariant under z -> z^-1
    dual = enumerate_dual(torus1, 32.0)
    kernel = window_kernel(identity_symbol(dual), partition, 2)
    grid = cached_grid(torus1, dual.max_band)
    z = np.array([0.06])
    zi = np.array([1.0 - 0.06])
    v1 = kernel_difference_integral(kernel, z, 1.0, grid)
    v2 = kernel_difference_integral(kernel, zi, 1.0, grid)
    assert abs(v1 - v2) < 1e-10 * max(1.0, v1)


def test_su2_class_function_path_matches_general(su2, partition):
    # scalar blocks trigger the character fast path inside inverse_evaluate;
    # force the generic Wigner path with a tiny non-scalar perturbation and
    # compare the two integrals
    dual = enumerate_dual(su2, spin_cutoff(3))
    grid = cached_grid(su2, dual.max_band)
    sig = build_spectral_symbol(lambda lam: lam ** (1j), dual)
    kernel = window_kernel(sig, partition, 1)
    z = su2_point_from_distance(0.4)
    fast = kernel_difference_integral(kernel, z, 1.0, grid)
    bumped = FourierCoefficients(dual, [b.copy() for b in kernel.coeffs.blocks])
    idx = dual.index_of[1.0]
    bumped.blocks[idx][0, 1] += 1e-300  # breaks the scalar detection only
    general = kernel_difference_integral(bumped, z, 1.0, grid)
    assert abs(fast - general) < 1e-9 * max(1.0, fast)


def test_z_must_not_be_identity(torus1, partition):
    dual = enumerate_dual(torus1, 8.0)
    kernel = window_kernel(identity_symbol(dual), partition, 1)
    grid = cached_grid(torus1, dual.max_band)
    with pytest.raises(PreconditionError):
        kernel_difference_integral(kernel, np.array([0.0]), 1.0, grid)


def test_torus_decay_trend_small(torus1, partition):
    dual = enumerate_dual(torus1, 128.0)
    grid = cached_grid(torus1, dual.max_band)
    sig = build_spectral_symbol(lambda lam: lam ** (1j), dual)
    z = np.array([0.05])
    vals = [
        kernel_difference_integral(window_kernel(sig, partition, ell), z, 1.0, grid)
        for ell in (2, 3, 4)
    ]
    assert decay_slope((2, 3, 4), vals) <= -0.2


# ---------------------------------------------------------------------------
# Exact L2 norm and ensembles
# ---------------------------------------------------------------------------

def test_exact_l2_norm_examples(torus1, su2):
    dual = enumerate_dual(torus1, 8.0)
    assert exact_l2_operator_norm(identity_symbol(dual)) == 1.0
    dsu = enumerate_dual(su2, spin_cutoff(1))
    blocks = [np.zeros((ir.dim, ir.dim), complex) for ir in dsu.irreps]
    blocks[dsu.index_of[0.5]] = np.diag([2.0, 0.5]).astype(complex)
    assert abs(exact_l2_operator_norm(Symbol(dsu, blocks)) - 2.0) < 1e-15


def test_ensemble_kinds_and_determinism(torus1, partition):
    dual = enumerate_dual(torus1, 16.0)
    sig = build_spectral_symbol(lambda lam: lam ** (1j), dual)
    for kind in ("gaussian-coefficients", "dirichlet-kernels", "translated-windows",
                 "adjoint-dirichlet", "directed-irrep"):
        cfg = EnsembleConfig(kind, 4)
        m1 = ensemble_member(cfg, 1, dual, partition, np.random.default_rng([3, 0, 1]), sig)
        m2 = ensemble_member(cfg, 1, dual, partition, np.random.default_rng([3, 0, 1]), sig)
        assert max(np.max(np.abs(a - b)) for a, b in zip(m1.blocks, m2.blocks)) == 0.0
        assert plancherel_norm(m1) > 0
    with pytest.raises(ConfigurationError):
        EnsembleConfig("bogus", 4)


def test_sweep_identity_ratios_one(torus1, partition):
    sweeps = boundedness_sweep(
        torus1,
        identity_symbol,
        [NormSpec(0.0, 2.0, 2.0), NormSpec(1.0, 4.0, 1.5)],
        [8.0, 16.0],
        EnsembleConfig("gaussian-coefficients", 3),
        seed=12,
        partition=partition,
    )
    for sweep in sweeps:
        for ratio in sweep.max_ratios:
            assert abs(ratio - 1.0) <= 1e-9


def test_sweep_determinism(torus1, partition):
    run = lambda: boundedness_sweep(
        torus1,
        lambda d: build_spectral_symbol(lambda lam: lam ** (3j), d),
        NormSpec(0.0, 4.0, 2.0),
        [16.0, 32.0],
        EnsembleConfig("gaussian-coefficients", 4),
        seed=99,
        partition=partition,
    )[0]
    assert run().max_ratios == run().max_ratios


def test_sweep_l2_never_exceeds_exact_norm(torus1, partition):
    # after the F^0_{2,2} <-> L^2 comparison (ratio in [1/sqrt2, 1]) the
    # sweep lower bounds can reach at most sqrt(2) times the exact norm
    builder = lambda d: build_spectral_symbol(lambda lam: (1.0 + 0.5 * np.sin(lam)) * lam ** (2j), d)
    dual = enumerate_dual(torus1, 32.0)
    opnorm = exact_l2_operator_norm(builder(dual))
    for kind, count in (("gaussian-coefficients", 6), ("dirichlet-kernels", 4), ("directed-irrep", 1)):
        sweep = boundedness_sweep(
            torus1, builder, NormSpec(0.0, 2.0, 2.0), [32.0],
            EnsembleConfig(kind, count), seed=21, partition=partition,
        )[0]
        assert sweep.max_ratios[0] / np.sqrt(2.0) <= opnorm + 1e-9
        if kind == "directed-irrep":
            assert sweep.max_ratios[0] >= 0.8 * opnorm


def test_weak_numerator_for_p1(torus1, partition):
    # p = 1 rows probe the weak-type ratio; for the identity symbol the weak
    # quasi-norm of Tf = f is Chebyshev-dominated by the strong norm
    sweep = boundedness_sweep(
        torus1,
        identity_symbol,
        NormSpec(0.0, 1.0, 2.0),
        [16.0],
        EnsembleConfig("gaussian-coefficients", 4),
        seed=17,
        partition=partition,
    )[0]
    assert 0.0 < sweep.max_ratios[0] <= 1.0 + 1e-12
