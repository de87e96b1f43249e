"""Truncated Fock-space linear algebra.

Operators are dense numpy arrays. Single-mode operators live on the buffered
space of ``n_max + buffer + 1`` levels; products are formed there and then
projected back to ``n_max + 1`` levels, so matrix elements inside the retained
block are exact. Two-mode states use the ``np.kron`` ordering, mode A first:
index ``i = n_a * (n_max + 1) + n_b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy import sparse

__all__ = [
    "Truncation",
    "FockVector",
    "Spectrum",
    "SpectralError",
    "TruncationError",
    "annihilation",
    "bogoliubov_A",
    "kron",
    "project",
    "spectral_decomposition",
    "herm_expm",
    "rank2_expectation",
]

HERMITIAN_ATOL = 1e-12
MAX_DENSE_DIM = 20_000


class TruncationError(RuntimeError):
    """A state or operator could not be represented within the allowed cutoff."""

    def __init__(self, message: str, n_max_reached: int | None = None):
        super().__init__(message)
        self.n_max_reached = n_max_reached


class SpectralError(RuntimeError):
    """Eigendecomposition failed or the input was not Hermitian."""


@dataclass(frozen=True)
class Truncation:
    """Photon-number cutoff for one mode.

    ``buffer`` extra levels are used while building operators; ``tail_tol``
    bounds the probability mass a constructed state may lose above ``n_max``.
    """

    n_max: int
    buffer: int = 10
    tail_tol: float = 1e-12

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max}")
        if int(self.buffer) != self.buffer or self.buffer < 0:
            raise ValueError(f"buffer must be an integer >= 0, got {self.buffer}")
        if not (0.0 < self.tail_tol <= 1e-6):
            raise ValueError(f"tail_tol must lie in (0, 1e-6], got {self.tail_tol}")

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @property
    def dim2(self) -> int:
        return (self.n_max + 1) ** 2

    @property
    def buffered_dim(self) -> int:
        return self.n_max + self.buffer + 1


@dataclass(frozen=True)
class FockVector:
    """Amplitudes in the truncated number basis of one or two modes.

    ``tail`` is the probability mass missing before normalization.
    """

    amplitudes: np.ndarray
    modes: int = 1
    tail: float = 0.0

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise ValueError(f"modes must be 1 or 2, got {self.modes}")
        amps = np.asarray(self.amplitudes)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be one-dimensional")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.amplitudes
        return self.amplitudes.astype(dtype)


def annihilation(trunc: Truncation) -> np.ndarray:
    """Lowering operator on the buffered space, ``<n-1|a|n> = sqrt(n)``."""
    d = trunc.buffered_dim
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1)


def bogoliubov_A(r_ref: float, trunc: Truncation) -> np.ndarray:
    """``a cosh(r_ref) + a^dagger sinh(r_ref)`` on the buffered space."""
    if not np.isfinite(r_ref):
        raise ValueError(f"r_ref must be finite, got {r_ref}")
    a = annihilation(trunc)
    return a * np.cosh(r_ref) + a.T * np.sinh(r_ref)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two square matrices (mode A is the left factor)."""
    a = np.asarray(a)
    b = np.asarray(b)
    for name, m in (("a", a), ("b", b)):
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"{name} must be square, got shape {m.shape}")
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_DENSE_DIM:
        raise MemoryError(f"Kronecker product of dimension {dim} exceeds dense limit {MAX_DENSE_DIM}")
    return np.kron(a, b)


def project(m: np.ndarray, keep: int) -> np.ndarray:
    """Restrict a single-mode matrix to its leading ``keep`` levels."""
    return m[:keep, :keep]


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix, optionally block-diagonal.

    ``blocks`` lists index sets that the matrix leaves invariant; each is
    decomposed separately, which cuts the cubic cost when the generator
    conserves a quantum number such as total photon parity.
    """

    dim: int
    blocks: tuple[np.ndarray, ...]
    values: tuple[np.ndarray, ...]
    vectors: tuple[np.ndarray, ...]

    def expm(self, scale: float, keep: np.ndarray | None = None) -> np.ndarray:
        """``exp(-i * scale * M)`` as a dense matrix.

        With ``keep`` (sorted indices), only that principal submatrix is built.
        """
        if keep is None:
            keep = np.arange(self.dim)
        keep = np.asarray(keep, dtype=int)
        pos = np.full(self.dim, -1)
        pos[keep] = np.arange(keep.size)
        out = np.zeros((keep.size, keep.size), dtype=complex)
        for idx, w, v in zip(self.blocks, self.values, self.vectors):
            rows = pos[idx] >= 0
            if not rows.any():
                continue
            vk = v[rows]
            target = pos[idx[rows]]
            out[np.ix_(target, target)] = (vk * np.exp(-1j * scale * w)) @ vk.conj().T
        return out

    def apply(self, scale: float, vec: np.ndarray) -> np.ndarray:
        """``exp(-i * scale * M) @ vec`` without forming the matrix."""
        vec = np.asarray(vec)
        out = np.zeros(vec.shape, dtype=complex)
        for idx, w, v in zip(self.blocks, self.values, self.vectors):
            coeff = v.conj().T @ vec[idx]
            phase = np.exp(-1j * scale * w)
            out[idx] = v @ (phase[:, None] * coeff if coeff.ndim == 2 else phase * coeff)
        return out


def _check_square(m) -> None:
    if len(m.shape) != 2 or m.shape[0] != m.shape[1]:
        raise SpectralError(f"matrix must be square, got shape {m.shape}")


def _symmetrized_block(sub: np.ndarray) -> np.ndarray:
    asym = np.abs(sub - sub.conj().T).max() if sub.size else 0.0
    scale = max(1.0, np.abs(sub).max()) if sub.size else 1.0
    if asym > HERMITIAN_ATOL * scale:
        raise SpectralError(
            f"matrix is not Hermitian: max|M - M^H| = {asym:.3e} (block dim {sub.shape[0]}, max|M| = {scale:.3e})"
        )
    return 0.5 * (sub + sub.conj().T)


def spectral_decomposition(m, blocks: Sequence[np.ndarray] | None = None) -> Spectrum:
    """Eigendecompose the Hermitian matrix ``m`` after symmetrizing it.

    ``m`` may be a dense array or a scipy sparse matrix; only the diagonal
    blocks are ever densified. If ``blocks`` is given, couplings between
    different blocks must vanish.
    """
    is_sparse = sparse.issparse(m)
    m = m.tocsr() if is_sparse else np.asarray(m)
    _check_square(m)
    dim = m.shape[0]
    if blocks is None:
        blocks = (np.arange(dim),)
    else:
        blocks = tuple(np.sort(np.asarray(b, dtype=int)) for b in blocks)
        covered = np.concatenate(blocks)
        if covered.size != dim or np.unique(covered).size != dim:
            raise SpectralError("blocks must partition the index range")
        label = np.empty(dim, dtype=int)
        for k, b in enumerate(blocks):
            label[b] = k
        coo = sparse.coo_matrix(m)
        big = np.abs(coo.data) > HERMITIAN_ATOL * max(1.0, np.abs(coo.data).max(initial=0.0))
        if np.any(label[coo.row[big]] != label[coo.col[big]]):
            raise SpectralError("matrix couples indices in different blocks")

    values, vectors = [], []
    for idx in blocks:
        sub = m[idx][:, idx].toarray() if is_sparse else m[np.ix_(idx, idx)]
        sub = _symmetrized_block(sub)
        try:
            w, v = scipy.linalg.eigh(sub, driver="evr")
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SpectralError(
                f"eigh failed on block of size {idx.size} (max|M| = {np.abs(sub).max():.3e}): {exc}"
            ) from exc
        values.append(w)
        vectors.append(v)
    return Spectrum(dim=dim, blocks=tuple(blocks), values=tuple(values), vectors=tuple(vectors))


def herm_expm(m: np.ndarray, scale: float, blocks: Sequence[np.ndarray] | None = None) -> np.ndarray:
    """``exp(-i * scale * m)`` for Hermitian ``m`` via its spectral decomposition."""
    return spectral_decomposition(m, blocks).expm(scale)


def rank2_expectation(psi1, psi2, lam: float, op: np.ndarray) -> complex:
    """``Tr[rho op]`` for ``rho = lam |psi1><psi1| + (1 - lam) |psi2><psi2|``.

    Two matrix-vector products; the density matrix is never formed.
    """
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"classical weight must lie in [0, 1], got {lam}")
    v1 = np.asarray(psi1)
    v2 = np.asarray(psi2)
    op = np.asarray(op)
    if v1.shape != v2.shape or op.shape != (v1.shape[0], v1.shape[0]):
        raise ValueError(f"dimension mismatch: psi1 {v1.shape}, psi2 {v2.shape}, op {op.shape}")
    return complex(lam * np.vdot(v1, op @ v1) + (1.0 - lam) * np.vdot(v2, op @ v2))
