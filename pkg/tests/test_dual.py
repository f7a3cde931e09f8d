import numpy as np
import pytest

from liefourier import enumerate_dual, evaluate_irrep
from liefourier.dual import spin_cutoff, su2_character, wigner_matrix
from liefourier.errors import ConfigurationError, PreconditionError
from liefourier.groups import distance_to_identity, identity, multiply, random_point, su2_matrix


def test_enumerate_torus_sqrt2(torus1):
    dual = enumerate_dual(torus1, np.sqrt(2.0))
    assert [ir.label for ir in dual.irreps] == [(0,), (-1,), (1,)]
    assert dual.irreps[0].eigenvalue == 1.0
    assert abs(dual.irreps[1].eigenvalue - np.sqrt(2)) < 1e-15


def test_enumerate_su2_cutoff2(su2):
    dual = enumerate_dual(su2, 2.0)
    assert [ir.label for ir in dual.irreps] == [0.0, 0.5, 1.0]
    assert [ir.dim for ir in dual.irreps] == [1, 2, 3]
    assert abs(dual.irreps[2].eigenvalue - np.sqrt(3)) < 1e-15


def test_trivial_irrep_present(torus2, su2):
    for group in (torus2, su2):
        dual = enumerate_dual(group, 3.0)
        first = dual.irreps[0]
        assert first.dim == 1 and first.eigenvalue == 1.0


def test_sorted_and_symmetric(torus2):
    dual = enumerate_dual(torus2, 5.0)
    eigs = [ir.eigenvalue for ir in dual.irreps]
    assert eigs == sorted(eigs)
    labels = {ir.label for ir in dual.irreps}
    assert all(tuple(-c for c in lab) in labels for lab in labels)


def test_cutoff_precondition(torus1):
    with pytest.raises(PreconditionError):
        enumerate_dual(torus1, 0.5)


def test_identity_matrix_everywhere(torus2, su2):
    for group in (torus2, su2):
        dual = enumerate_dual(group, 8.0 if group.kind == "torus" else spin_cutoff(4))
        for ir in dual.irreps:
            mat = evaluate_irrep(group, ir, identity(group))
            assert np.max(np.abs(mat - np.eye(ir.dim))) < 1e-13


def test_spin_half_is_fundamental(su2):
    rng = np.random.default_rng(0)
    for _ in range(10):
        x = random_point(su2, rng)
        assert np.max(np.abs(wigner_matrix(0.5, x) - su2_matrix(x))) < 1e-14


def test_unitarity(su2):
    rng = np.random.default_rng(1)
    for ell in (0.5, 3.0, 8.5, 16.0):
        for _ in range(5):
            x = random_point(su2, rng)
            mat = wigner_matrix(ell, x)
            defect = mat @ mat.conj().T - np.eye(mat.shape[0])
            assert np.max(np.abs(defect)) < 1e-11


def test_homomorphism_all_small_irreps(torus2, su2):
    rng = np.random.default_rng(2)
    for group in (torus2, su2):
        dual = enumerate_dual(group, 8.0)
        for _ in range(5):
            x = random_point(group, rng)
            y = random_point(group, rng)
            xy = multiply(group, x, y)
            for ir in dual.irreps:
                lhs = evaluate_irrep(group, ir, xy)
                rhs = evaluate_irrep(group, ir, x) @ evaluate_irrep(group, ir, y)
                assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_character_formula(su2):
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = random_point(su2, rng)
        theta = float(distance_to_identity(su2, x))
        if not 0.1 < theta < np.pi - 0.1:
            continue
        for ell in (0.5, 1.0, 2.5, 6.0):
            expected = np.sin((2 * ell + 1) * theta) / np.sin(theta)
            assert abs(np.trace(wigner_matrix(ell, x)) - expected) < 1e-10
            assert abs(su2_character(ell, theta) - expected) < 1e-10


def test_eigenvalue_monotone_in_spin(su2):
    dual = enumerate_dual(su2, spin_cutoff(10))
    eigs = [ir.eigenvalue for ir in dual.irreps]
    assert all(a < b for a, b in zip(eigs, eigs[1:]))


def test_spin_range_guard(su2):
    rng = np.random.default_rng(4)
    x = random_point(su2, rng)
    wigner_matrix(64.0, x)  # validated boundary
    with pytest.raises(ConfigurationError):
        wigner_matrix(64.5, x)


def test_large_spin_unitary(su2):
    # the eigendecomposition route must stay stable at the validated top
    rng = np.random.default_rng(5)
    x = random_point(su2, rng)
    mat = wigner_matrix(64.0, x)
    assert np.max(np.abs(mat @ mat.conj().T - np.eye(129))) < 1e-10
