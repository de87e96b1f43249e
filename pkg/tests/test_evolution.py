import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
import scipy.linalg
from scipy import sparse

from scsphase.evolution import (
    EvolutionSpec,
    build_context,
    commutator_residual,
    generator_check,
    unitary_at,
)
from scsphase.fock import Truncation, bogoliubov_A
from scsphase.phase import geometric_phase_numeric
from scsphase.states import Family, MixedStateSpec, SCSParams, scs_fock

N_SMALL = 24


def test_spec_validation():
    t = Truncation(8)
    for theta, r in ((-0.1, 0.0), (3.2, 0.0), (0.5, -0.1), (0.5, math.inf)):
        with pytest.raises(ValueError):
            EvolutionSpec(theta, r, t)


def test_trivial_rotation_is_jz(context):
    ctx = context(0.0, 0.0, N_SMALL)
    np.testing.assert_array_equal(ctx.g, ctx.jz)
    assert np.count_nonzero(ctx.jz - np.diag(np.diag(ctx.jz))) == 0
    expected = np.diag(np.exp(-2j * math.pi * np.diag(ctx.jz)))
    np.testing.assert_allclose(ctx.u_final, expected, atol=1e-12)
    np.testing.assert_allclose(unitary_at(ctx, 0.0), np.eye(ctx.jz.shape[0]), atol=1e-14)


def test_operators_match_definitions_on_small_space():
    trunc = Truncation(6, buffer=5)
    r, theta = 0.3, 0.7
    ctx = build_context(EvolutionSpec(theta, r, trunc))
    A = bogoliubov_A(r, trunc)
    eye = np.eye(trunc.buffered_dim)
    Ab, Bb = np.kron(A, eye), np.kron(eye, A)
    keep = [i * trunc.buffered_dim + j for i in range(trunc.dim) for j in range(trunc.dim)]
    sub = np.ix_(keep, keep)
    jx = 0.5 * (Ab.T @ Bb + Ab @ Bb.T)
    jy = (Ab.T @ Bb - Ab @ Bb.T) / 2j
    np.testing.assert_allclose(ctx.jx, jx[sub], atol=1e-13)
    np.testing.assert_allclose(ctx.jy, jy[sub], atol=1e-13)
    np.testing.assert_allclose(ctx.uy, scipy.linalg.expm(-1j * theta * jy)[sub], atol=1e-11)
    np.testing.assert_allclose(ctx.g, math.cos(theta) * ctx.jz - math.sin(theta) * ctx.jx, atol=1e-15)


def test_context_is_read_only(context):
    ctx = context(math.pi / 4, 0.2, N_SMALL)
    with pytest.raises(ValueError):
        ctx.g[0, 0] = 1.0


def test_equal_modes_have_zero_jz(context):
    ctx = context(math.pi / 4, 0.2, N_SMALL)
    v = scs_fock(SCSParams(0.7, 0.2), ctx.spec.trunc).amplitudes
    vv = np.kron(v, v)
    assert abs(np.vdot(vv, ctx.jz @ vv)) <= 1e-12


def test_unitary_at_examples(context):
    ctx = context(math.pi / 4, 0.2, N_SMALL)
    np.testing.assert_allclose(unitary_at(ctx, 2 * math.pi), ctx.u_final, atol=1e-12)
    flat = context(0.0, 0.0, N_SMALL)
    composed = unitary_at(flat, 0.9) @ unitary_at(flat, 1.3)
    np.testing.assert_allclose(composed, unitary_at(flat, 2.2), atol=1e-10)
    y = np.random.default_rng(2).normal(size=ctx.jz.shape[0])
    np.testing.assert_allclose(ctx.apply(1.7, y), unitary_at(ctx, 1.7) @ y, atol=1e-13)


@pytest.mark.parametrize("theta,r,n_max", [(math.pi / 4, 0.2, N_SMALL), (math.pi / 2, 0.0, N_SMALL),
                                           (math.pi / 2, 0.5, 48)])
def test_unitary_on_interior(context, theta, r, n_max):
    # n_max = 48 is what the adaptive cutoff selects for r = 0.5 on the oracle grid
    assert context(theta, r, n_max).unitarity_defect() <= 1e-10


@pytest.mark.parametrize("theta,r", [(math.pi / 4, 0.2), (math.pi / 2, 0.0)])
def test_generator_identity_small(context, theta, r):
    ctx = context(theta, r, N_SMALL)
    fine = generator_check(ctx, 1.0, 1e-3)
    coarse = generator_check(ctx, 1.0, 1e-2)
    assert fine <= 1e-5
    assert 90 <= coarse / fine <= 110
    assert abs(generator_check(ctx, 4.0, 1e-3) - fine) <= 1e-8
    assert commutator_residual(ctx) <= 1e-8


def test_generator_check_arguments(context):
    ctx = context(0.0, 0.0, N_SMALL)
    with pytest.raises(ValueError):
        generator_check(ctx, 1.0, 0.1)
    with pytest.raises(ValueError):
        generator_check(ctx, 2 * math.pi, 1e-3)


def test_mode_spectrum_is_integer_ladder(context):
    ctx = context(0.0, 0.5, N_SMALL)
    k = N_SMALL // 2 + 1
    np.testing.assert_allclose(ctx.mode_values[:k], np.arange(k), atol=1e-10)
    assert ctx.mode_dim >= 2 * (N_SMALL + 1)


def test_buffer_changes_expectations_below_bound():
    spec = MixedStateSpec(Family.ENT, 0.5, SCSParams(1.0, 0.2), SCSParams(-0.5, 0.2))
    n = 40
    values = []
    for buffer in (0, 10):
        ctx = build_context(EvolutionSpec(math.pi / 4, 0.2, Truncation(n, buffer)))
        values.append(geometric_phase_numeric(spec, ctx=ctx).dynamical)
    assert abs(values[0] - values[1]) <= 1e-8


def test_shared_context_matches_fresh_contexts(context):
    theta, r = math.pi / 4, 0.2
    shared = context(theta, r, N_SMALL)
    specs = [MixedStateSpec(f, 0.25, SCSParams(0.5, r), SCSParams(-1.0, r)) for f in Family]
    for s in specs:
        fresh = build_context(EvolutionSpec(theta, r, Truncation(N_SMALL)))
        a = geometric_phase_numeric(s, ctx=shared)
        b = geometric_phase_numeric(s, ctx=fresh)
        assert abs(a.geometric - b.geometric) <= 1e-14
        assert abs(a.total - b.total) <= 1e-14


def test_context_is_thread_safe(context):
    ctx = context(math.pi / 4, 0.2, N_SMALL)
    specs = [MixedStateSpec(Family.SEP_UNBAL, lam, SCSParams(1.0, 0.2), SCSParams(0.5, 0.2))
             for lam in np.linspace(0, 1, 8)]
    serial = [geometric_phase_numeric(s, ctx=ctx).geometric for s in specs]
    with ThreadPoolExecutor(4) as pool:
        parallel = list(pool.map(lambda s: geometric_phase_numeric(s, ctx=ctx).geometric, specs))
    assert serial == parallel


def test_jy_uses_parity_blocks(context):
    ctx = context(math.pi / 4, 0.0, N_SMALL)
    assert len(ctx.jy_spectrum.blocks) == 2
    assert sparse.issparse(sparse.csr_matrix(ctx.jy))
