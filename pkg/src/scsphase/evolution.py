"""Jordan-Schwinger rotations built from two Bogoliubov modes.

With ``A = a cosh r + a^dagger sinh r`` on mode one and the same combination
``B`` on mode two,

    Jx = (A^dagger B + A B^dagger) / 2
    Jy = (A^dagger B - A B^dagger) / (2i)
    Jz = (A^dagger A - B^dagger B) / 2

and the path is ``U(phi) = exp(-i phi Jz) exp(-i theta Jy)`` for phi in
[0, 2 pi] at fixed theta.

Two truncation facts shape the numerics:

* ``Jz`` is a Kronecker sum, so ``exp(-i phi Jz)`` factors into single-mode
  unitaries. These are computed from the spectrum of ``A^dagger A`` on a much
  larger single-mode space (cheap) and then projected, because the truncated
  Bogoliubov number operator only reproduces integer eigenvalues well below
  its cutoff.
* ``Jy`` conserves total photon parity ``(n_a + n_b) mod 2``, which splits its
  dense eigendecomposition into two half-size blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse
import scipy.linalg

from .fock import Spectrum, Truncation, TruncationError, bogoliubov_A, spectral_decomposition

__all__ = [
    "EvolutionSpec",
    "EvolutionContext",
    "build_context",
    "unitary_at",
    "generator_check",
    "commutator_residual",
]

MODE_SPECTRUM_TOL = 1e-10
_MODE_DIM_GROWTH = 1.5
_MODE_DIM_CAP_FACTOR = 8


@dataclass(frozen=True)
class EvolutionSpec:
    theta: float
    r_ref: float
    trunc: Truncation

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not (math.isfinite(self.r_ref) and self.r_ref >= 0.0):
            raise ValueError(f"r_ref must be finite and >= 0, got {self.r_ref}")


def _mode_number_spectrum(r_ref: float, n_max: int, buffer: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Spectrum of ``A^dagger A`` on a single mode, grown until the lowest
    ``n_max // 2 + 1`` eigenvalues are integers to ``MODE_SPECTRUM_TOL``."""
    k_need = max(n_max // 2, 4)
    dim = 2 * (n_max + 1) + buffer
    cap = _MODE_DIM_CAP_FACTOR * (n_max + 1) + buffer
    while True:
        a = np.diag(np.sqrt(np.arange(1, dim + 1, dtype=float)), k=1)
        A = a * math.cosh(r_ref) + a.T * math.sinh(r_ref)
        num = (A.T @ A)[:dim, :dim]
        w, v = scipy.linalg.eigh(num)
        err = np.abs(w[: k_need + 1] - np.arange(k_need + 1)).max()
        if err <= MODE_SPECTRUM_TOL:
            return w, v, dim
        if dim >= cap:
            raise TruncationError(
                f"Bogoliubov number spectrum off by {err:.2e} at internal dimension {dim} (r_ref={r_ref})",
                n_max_reached=n_max,
            )
        dim = min(int(dim * _MODE_DIM_GROWTH) + 1, cap)


@dataclass(eq=False)
class EvolutionContext:
    """Operators for one ``(theta, r_ref, truncation)``; read-only once built.

    ``jx``, ``jy``, ``jz`` and ``g`` are the projected ``(n_max+1)**2`` square
    matrices. ``uy`` is ``exp(-i theta Jy)`` computed on the buffered space and
    projected. ``mode_values``/``mode_vectors`` hold the single-mode spectrum
    of ``A^dagger A`` (vectors restricted to the retained levels).
    """

    spec: EvolutionSpec
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    g: np.ndarray
    uy: np.ndarray
    mode_values: np.ndarray
    mode_vectors: np.ndarray
    mode_dim: int
    jy_spectrum: Spectrum = field(repr=False)

    @property
    def theta(self) -> float:
        return self.spec.theta

    @property
    def dim(self) -> int:
        return self.spec.trunc.dim

    def mode_rotation(self, phi: float) -> np.ndarray:
        """Projected single-mode ``exp(-i phi A^dagger A / 2)``."""
        v = self.mode_vectors
        return (v * np.exp(-0.5j * phi * self.mode_values)) @ v.conj().T

    def mode_rotation_derivative(self, phi: float) -> np.ndarray:
        v = self.mode_vectors
        w = self.mode_values
        return (v * (-0.5j * w * np.exp(-0.5j * phi * w))) @ v.conj().T

    def _kron_apply(self, ua: np.ndarray, ub: np.ndarray, x: np.ndarray) -> np.ndarray:
        n = self.dim
        shaped = x.reshape(n, n, -1)
        out = np.einsum("ij,jkc->ikc", ua, shaped)
        out = np.einsum("kl,ilc->ikc", ub, out)
        return out.reshape(x.shape)

    def apply_z(self, phi: float, x: np.ndarray) -> np.ndarray:
        """``exp(-i phi Jz) @ x`` for a vector or a stack of column vectors."""
        u = self.mode_rotation(phi)
        return self._kron_apply(u, u.conj(), np.asarray(x, dtype=complex))

    def apply(self, phi: float, x: np.ndarray) -> np.ndarray:
        """``U(theta, phi) @ x``."""
        return self.apply_z(phi, self.uy @ x)

    def apply_derivative(self, phi: float, x: np.ndarray) -> np.ndarray:
        """``dU/dphi @ x`` from the exact derivative of the spectral factors."""
        y = np.asarray(self.uy @ x, dtype=complex)
        u = self.mode_rotation(phi)
        du = self.mode_rotation_derivative(phi)
        # mode B carries exp(+i phi N/2) = conj of mode A's factor
        return self._kron_apply(du, u.conj(), y) + self._kron_apply(u, du.conj(), y)

    @cached_property
    def u_final(self) -> np.ndarray:
        return unitary_at(self, 2.0 * math.pi)

    def interior_basis(self, max_excitation: int = 4) -> np.ndarray:
        """Columns ``|k_a> (x) |k_b>`` of Bogoliubov number states with
        ``k_a + k_b <= max_excitation``, expressed in the truncated Fock basis."""
        v = self.mode_vectors
        cols = [np.kron(v[:, i], v[:, j])
                for i in range(max_excitation + 1)
                for j in range(max_excitation + 1 - i)]
        return np.stack(cols, axis=1)

    def unitarity_defect(self, max_excitation: int = 4) -> float:
        """``max |(U W)^H (U W) - I|`` for ``U = U_final`` on the interior basis."""
        w = self.interior_basis(max_excitation)
        uw = self.apply(2.0 * math.pi, w)
        return float(np.abs(uw.conj().T @ uw - np.eye(w.shape[1])).max())


def build_context(spec: EvolutionSpec) -> EvolutionContext:
    """Build Jx, Jy, Jz, the generator and the cached exponential factors."""
    trunc = spec.trunc
    n = trunc.n_max
    d = trunc.buffered_dim

    A = sparse.csr_matrix(bogoliubov_A(spec.r_ref, trunc))
    eye = sparse.identity(d, format="csr")
    Ab = sparse.kron(A, eye, format="csr")
    Bb = sparse.kron(eye, A, format="csr")
    adag_b = (Ab.T @ Bb).tocsr()
    a_bdag = (Ab @ Bb.T).tocsr()

    levels = np.arange(d)
    na = np.repeat(levels, d)
    nb = np.tile(levels, d)
    keep = np.flatnonzero((na <= n) & (nb <= n))

    def projected(m):
        return m[keep][:, keep].toarray()

    jx = 0.5 * projected(adag_b + a_bdag)
    antisym = (adag_b - a_bdag).tocsr()
    jy = -0.5j * projected(antisym)

    num = (A.T @ A).toarray()[: n + 1, : n + 1]
    eye_n = np.eye(n + 1)
    jz = 0.5 * (np.kron(num, eye_n) - np.kron(eye_n, num))
    g = math.cos(spec.theta) * jz - math.sin(spec.theta) * jx

    parity = (na + nb) % 2
    jy_buffered = (-0.5j * antisym).tocsr()
    jy_spec = spectral_decomposition(jy_buffered, blocks=(np.flatnonzero(parity == 0), np.flatnonzero(parity == 1)))
    uy = jy_spec.expm(spec.theta, keep=keep)

    w, v, mode_dim = _mode_number_spectrum(spec.r_ref, n, trunc.buffer)

    arrays = (jx, jy, jz, g, uy, w)
    for arr in arrays:
        arr.setflags(write=False)
    mode_vectors = np.ascontiguousarray(v[: n + 1, :])
    mode_vectors.setflags(write=False)
    return EvolutionContext(spec, jx, jy, jz, g, uy, w, mode_vectors, mode_dim, jy_spec)


def unitary_at(ctx: EvolutionContext, phi: float) -> np.ndarray:
    """Dense ``U(theta, phi) = exp(-i phi Jz) exp(-i theta Jy)``."""
    return ctx.apply_z(phi, ctx.uy)


def generator_check(ctx: EvolutionContext, phi: float, h: float = 1e-3, max_excitation: int = 4) -> float:
    """Central-difference residual of ``U^dagger dU/dphi = -i G``.

    Returns ``max |W^H (U(phi)^H [U(phi+h) - U(phi-h)] / (2h) + i G) W|`` where
    the columns of ``W`` span Bogoliubov excitations up to ``max_excitation``;
    on that subspace the truncated operators represent the infinite-dimensional
    ones faithfully.
    """
    if not (0.0 < h <= 1e-2):
        raise ValueError(f"step must satisfy 0 < h <= 1e-2, got {h}")
    if not (h < phi < 2.0 * math.pi - h):
        raise ValueError(f"phi must lie in (h, 2 pi - h), got {phi}")
    w = ctx.interior_basis(max_excitation)
    yw = ctx.uy @ w
    u0 = ctx.apply_z(phi, yw)
    up = ctx.apply_z(phi + h, yw)
    um = ctx.apply_z(phi - h, yw)
    fd = u0.conj().T @ (up - um) / (2.0 * h)
    target = -1j * (w.conj().T @ (ctx.g @ w))
    return float(np.abs(fd - target).max())


def commutator_residual(ctx: EvolutionContext, margin: int = 2) -> float:
    """Largest violation of ``[J_i, J_j] = i eps_ijk J_k`` on Fock levels
    ``n_a, n_b <= n_max - margin`` (where projection cannot interfere)."""
    n = ctx.spec.trunc.n_max
    levels = np.arange(n + 1)
    na = np.repeat(levels, n + 1)
    nb = np.tile(levels, n + 1)
    inner = np.flatnonzero((na <= n - margin) & (nb <= n - margin))
    worst = 0.0
    for a, b, c in ((ctx.jx, ctx.jy, ctx.jz), (ctx.jy, ctx.jz, ctx.jx), (ctx.jz, ctx.jx, ctx.jy)):
        comm = a[inner] @ b[:, inner] - b[inner] @ a[:, inner]
        worst = max(worst, float(np.abs(comm - 1j * c[np.ix_(inner, inner)]).max()))
    return worst
