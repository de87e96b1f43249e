import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from scsphase.fock import (
    FockVector,
    SpectralError,
    Truncation,
    annihilation,
    bogoliubov_A,
    herm_expm,
    kron,
    project,
    rank2_expectation,
    spectral_decomposition,
)
from scsphase.states import SCSParams, eta, scs_fock


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (m + m.conj().T)


def random_state(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def test_truncation_validation():
    assert Truncation(5).dim == 6
    assert Truncation(5).dim2 == 36
    assert Truncation(5, buffer=3).buffered_dim == 9
    for bad in (dict(n_max=0), dict(n_max=2.5), dict(n_max=4, buffer=-1), dict(n_max=4, tail_tol=1e-3),
                dict(n_max=4, tail_tol=0.0)):
        with pytest.raises(ValueError):
            Truncation(**bad)


def test_fock_vector_is_read_only():
    v = FockVector(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        v.amplitudes[0] = 2.0
    assert v.norm() == 1.0
    with pytest.raises(ValueError):
        FockVector(np.ones(2), modes=3)


def test_annihilation_examples():
    np.testing.assert_array_equal(annihilation(Truncation(1, buffer=0)), [[0, 1], [0, 0]])
    a = annihilation(Truncation(6, buffer=0))
    assert a[2, 3] == pytest.approx(math.sqrt(3.0), rel=1e-15)
    comm = a @ a.T - a.T @ a
    np.testing.assert_allclose(comm[:-1, :-1], np.eye(6), atol=1e-14)
    assert comm[-1, -1] == pytest.approx(-6.0)


def test_bogoliubov_reduces_to_a_without_squeezing():
    t = Truncation(8)
    np.testing.assert_array_equal(bogoliubov_A(0.0, t), annihilation(t))
    with pytest.raises(ValueError):
        bogoliubov_A(math.nan, t)


@pytest.mark.parametrize("alpha,r", [(1.0, 0.2), (-1.5, 0.5), (0.5, 0.0), (1.2, 0.35)])
def test_scs_is_eigenvector_of_bogoliubov_operator(alpha, r):
    # adequate cutoff: the boundary term sqrt(n_max+1) sinh(r) c_{n_max} must be tiny
    trunc = Truncation(64)
    p = SCSParams(alpha, r)
    v = np.zeros(trunc.buffered_dim)
    v[: trunc.dim] = scs_fock(p, trunc).amplitudes
    A = bogoliubov_A(r, trunc)
    assert np.linalg.norm(A @ v - eta(p) * v) <= 1e-8


@pytest.mark.parametrize("r", [0.0, 0.2, 0.5])
def test_bogoliubov_commutator_on_retained_block(r):
    trunc = Truncation(30, buffer=10)
    A = bogoliubov_A(r, trunc)
    comm = project(A @ A.T - A.T @ A, trunc.dim)
    np.testing.assert_allclose(comm, np.eye(trunc.dim), atol=1e-10)


def test_kron_examples_and_properties():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    np.testing.assert_array_equal(kron(np.diag([1.0, 2.0]), np.eye(2)), np.diag([1.0, 1.0, 2.0, 2.0]))
    rng = np.random.default_rng(3)
    a, b, c, d = (rng.normal(size=(3, 3)) for _ in range(4))
    np.testing.assert_allclose(kron(a, np.eye(3)) @ kron(np.eye(3), b), kron(a, b), atol=1e-12)
    np.testing.assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)
    np.testing.assert_allclose(kron(a + 2 * c, b), kron(a, b) + 2 * kron(c, b), atol=1e-12)
    np.testing.assert_allclose(kron(a, b - d), kron(a, b) - kron(a, d), atol=1e-12)
    with pytest.raises(ValueError):
        kron(np.ones((2, 3)), np.eye(2))


def test_herm_expm_examples():
    rng = np.random.default_rng(1)
    m = random_hermitian(rng, 6)
    np.testing.assert_allclose(herm_expm(m, 0.0), np.eye(6), atol=1e-14)
    np.testing.assert_allclose(herm_expm(np.diag([0.3, -1.1]), 2.0),
                               np.diag(np.exp(-2j * np.array([0.3, -1.1]))), atol=1e-15)
    np.testing.assert_allclose(herm_expm(m, 0.7) @ herm_expm(m, 0.4), herm_expm(m, 1.1), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 24), st.floats(-5, 5), st.integers(0, 2**31))
def test_herm_expm_matches_pade_and_is_unitary(n, scale, seed):
    m = random_hermitian(np.random.default_rng(seed), n)
    u = herm_expm(m, scale)
    np.testing.assert_allclose(u, scipy.linalg.expm(-1j * scale * m), atol=1e-10)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(n), atol=1e-10)


def test_spectral_decomposition_blocks():
    rng = np.random.default_rng(5)
    m = np.zeros((5, 5), dtype=complex)
    even, odd = np.array([0, 2, 4]), np.array([1, 3])
    m[np.ix_(even, even)] = random_hermitian(rng, 3)
    m[np.ix_(odd, odd)] = random_hermitian(rng, 2)
    spec = spectral_decomposition(m, blocks=(even, odd))
    np.testing.assert_allclose(spec.expm(0.9), scipy.linalg.expm(-0.9j * m), atol=1e-12)
    np.testing.assert_allclose(spec.expm(0.9, keep=np.array([0, 1, 3])),
                               scipy.linalg.expm(-0.9j * m)[np.ix_([0, 1, 3], [0, 1, 3])], atol=1e-12)
    x = rng.normal(size=(5, 2))
    np.testing.assert_allclose(spec.apply(0.9, x), scipy.linalg.expm(-0.9j * m) @ x, atol=1e-12)
    with pytest.raises(SpectralError):
        spectral_decomposition(m + np.eye(5, k=1) + np.eye(5, k=-1), blocks=(even, odd))
    with pytest.raises(SpectralError):
        spectral_decomposition(m, blocks=(even, np.array([1])))


def test_spectral_decomposition_rejects_non_hermitian():
    with pytest.raises(SpectralError, match="not Hermitian"):
        herm_expm(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)
    with pytest.raises(SpectralError):
        herm_expm(np.ones((2, 3)), 1.0)


def test_symmetrization_absorbs_roundoff_asymmetry():
    m = np.array([[1.0, 0.5 + 1e-15], [0.5, -1.0]])
    u = herm_expm(m, 1.0)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-14)


def test_rank2_expectation_examples():
    rng = np.random.default_rng(11)
    p1, p2 = random_state(rng, 4), random_state(rng, 4)
    assert rank2_expectation(p1, p2, 0.3, np.eye(4)) == pytest.approx(1.0, abs=1e-14)
    op = random_hermitian(rng, 4)
    assert rank2_expectation(p1, p2, 1.0, op) == np.vdot(p1, op @ p1)
    for lam in (0.0, 0.25, 0.8):
        rho = lam * np.outer(p1, p1.conj()) + (1 - lam) * np.outer(p2, p2.conj())
        assert abs(rank2_expectation(p1, p2, lam, op) - np.trace(rho @ op)) <= 1e-12
    with pytest.raises(ValueError):
        rank2_expectation(p1, p2[:3], 0.5, op)
    with pytest.raises(ValueError):
        rank2_expectation(p1, p2, 1.5, op)
