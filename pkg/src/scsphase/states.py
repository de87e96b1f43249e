"""Squeezed-coherent states and the three two-mode mixed-state families.

All parameters are real: coherence amplitude ``alpha`` and squeezing ``r >= 0``
with squeezing angle fixed at zero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import gammaln

from .fock import FockVector, Truncation, TruncationError
from .special import hermite_scaled_seq, mehler_series

__all__ = [
    "ALPHA_CAP",
    "Family",
    "SCSParams",
    "MixedStateSpec",
    "OverlapValue",
    "StatePair",
    "eta",
    "scs_fock",
    "scs_tail",
    "adaptive_nmax",
    "overlap_closed",
    "overlap_series",
    "overlap_fock",
    "build_pair",
]

ALPHA_CAP = 4.0
NMAX_START = 24
NMAX_CAP = 512


class Family(str, enum.Enum):
    """Which pair of two-mode pure states is mixed."""

    ENT = "entangled"
    SEP_UNBAL = "sep-unbalanced"
    SEP_BAL = "sep-balanced"


@dataclass(frozen=True)
class SCSParams:
    alpha: float
    r: float = 0.0
    alpha_cap: float = ALPHA_CAP

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.r)):
            raise ValueError(f"non-finite SCS parameters: alpha={self.alpha}, r={self.r}")
        if self.r < 0:
            raise ValueError(f"squeezing must be non-negative, got r={self.r}")
        if abs(self.alpha) > self.alpha_cap:
            raise ValueError(f"|alpha| = {abs(self.alpha)} exceeds alpha_cap = {self.alpha_cap}")


@dataclass(frozen=True)
class MixedStateSpec:
    family: Family
    lam: float
    p0: SCSParams
    p1: SCSParams

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not (0.0 <= self.lam <= 1.0):
            raise ValueError(f"classical weight must lie in [0, 1], got {self.lam}")


@dataclass(frozen=True)
class OverlapValue:
    p01: float
    method: str

    def __float__(self):
        return float(self.p01)


@dataclass(frozen=True)
class StatePair:
    """Normalized pure components of a rank-2 mixture with weight ``lam`` on ``psi1``."""

    psi1: FockVector
    psi2: FockVector
    lam: float
    norms_sq: tuple[float, float] = (1.0, 1.0)

    def __iter__(self):
        return iter((self.psi1, self.psi2, self.lam))


def eta(p: SCSParams) -> float:
    """Eigenvalue of the Bogoliubov operator for real parameters, ``alpha * e^r``."""
    return p.alpha * math.exp(p.r)


def _scs_raw(p: SCSParams, n_max: int) -> np.ndarray:
    alpha, r = p.alpha, p.r
    if r == 0.0:
        n = np.arange(n_max + 1)
        if alpha == 0.0:
            out = np.zeros(n_max + 1)
            out[0] = 1.0
            return out
        logmag = -0.5 * alpha * alpha + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
        return np.exp(logmag) * np.sign(alpha) ** n
    t = 0.5 * math.tanh(r)
    x = alpha * math.exp(r) / math.sqrt(math.sinh(2.0 * r))
    pref = math.exp(-0.5 * alpha * alpha * (1.0 + math.tanh(r))) / math.sqrt(math.cosh(r))
    return pref * hermite_scaled_seq(n_max, x, t)


def scs_tail(p: SCSParams, n_max: int) -> float:
    """Probability mass of ``|alpha, r>`` above level ``n_max``."""
    c = _scs_raw(p, n_max)
    return max(0.0, 1.0 - float(c @ c))


def adaptive_nmax(params: Iterable[SCSParams], tail_tol: float = 1e-12,
                  start: int = NMAX_START, cap: int = NMAX_CAP) -> int:
    """Smallest ``start * 2**k`` cutoff holding every state to ``tail_tol``."""
    params = list(params)
    n = start
    while True:
        if all(scs_tail(p, n) <= tail_tol for p in params):
            return n
        if n >= cap:
            raise TruncationError(f"tail above {tail_tol:g} at the cutoff cap n_max={cap}", n_max_reached=n)
        n = min(2 * n, cap)


def scs_fock(p: SCSParams, trunc: Truncation | None = None) -> FockVector:
    """Normalized number-basis amplitudes of ``|alpha, r>``.

    With ``trunc=None`` the cutoff is chosen adaptively. Raises
    :class:`TruncationError` if the mass above ``n_max`` exceeds ``tail_tol``.
    """
    if trunc is None:
        trunc = Truncation(adaptive_nmax([p]))
    c = _scs_raw(p, trunc.n_max)
    tail = max(0.0, 1.0 - float(c @ c))
    if tail > trunc.tail_tol:
        raise TruncationError(
            f"SCS(alpha={p.alpha}, r={p.r}) loses {tail:.3e} above n_max={trunc.n_max} "
            f"(tail_tol {trunc.tail_tol:g})",
            n_max_reached=trunc.n_max,
        )
    return FockVector(c / np.linalg.norm(c), modes=1, tail=tail)


def overlap_closed(p0: SCSParams, p1: SCSParams) -> OverlapValue:
    """Closed-form overlap ``<alpha0, r0 | alpha1, r1>`` (Mehler sum collapsed)."""
    a0, a1, r0, r1 = p0.alpha, p1.alpha, p0.r, p1.r
    if not (0.0 <= math.tanh(r0) * math.tanh(r1) < 1.0):
        raise ValueError("overlap requires 0 <= tanh(r0) tanh(r1) < 1")
    c = math.cosh(r0 - r1)
    gauss = -0.5 * a0 * a0 * (1.0 + math.tanh(r0)) - 0.5 * a1 * a1 * (1.0 + math.tanh(r1))
    cross = (a0 * a1 * math.exp(r0 + r1) / c
             - a0 * a0 * math.exp(2.0 * r0) * math.sinh(r1) / (2.0 * math.cosh(r0) * c)
             - a1 * a1 * math.exp(2.0 * r1) * math.sinh(r0) / (2.0 * math.cosh(r1) * c))
    return OverlapValue(math.exp(gauss + cross) / math.sqrt(c), "closed")


def overlap_series(p0: SCSParams, p1: SCSParams, n_terms: int = 200) -> OverlapValue:
    """Overlap from the truncated Hermite-product series.

    The Hermite arguments contain ``1/sqrt(sinh 2r)``, so both squeezings must
    be strictly positive; use :func:`overlap_closed` at ``r = 0``.
    """
    a0, a1, r0, r1 = p0.alpha, p1.alpha, p0.r, p1.r
    if r0 <= 0.0 or r1 <= 0.0:
        raise ValueError("series overlap needs r0, r1 > 0; use overlap_closed for unsqueezed states")
    pref = math.exp(-0.5 * a0 * a0 * (1.0 + math.tanh(r0)) - 0.5 * a1 * a1 * (1.0 + math.tanh(r1)))
    pref /= math.sqrt(math.cosh(r0) * math.cosh(r1))
    x0 = a0 * math.exp(r0) / math.sqrt(math.sinh(2.0 * r0))
    x1 = a1 * math.exp(r1) / math.sqrt(math.sinh(2.0 * r1))
    s = math.sqrt(math.tanh(r0) * math.tanh(r1))
    return OverlapValue(pref * mehler_series(x0, x1, s, n_terms), "series")


def overlap_fock(p0: SCSParams, p1: SCSParams, trunc: Truncation | None = None) -> OverlapValue:
    """Overlap as a dot product of truncated Fock vectors."""
    if trunc is None:
        trunc = Truncation(adaptive_nmax([p0, p1]))
    v0 = scs_fock(p0, trunc).amplitudes
    v1 = scs_fock(p1, trunc).amplitudes
    return OverlapValue(float(v0 @ v1), "fock_dot")


def build_pair(spec: MixedStateSpec, trunc: Truncation) -> StatePair:
    """Two-mode pure components of the mixture described by ``spec``.

    Both components are normalized numerically; the squared norms before
    normalization are kept for checks against ``2 + 2 p01**2``.
    """
    f0 = scs_fock(spec.p0, trunc)
    f1 = scs_fock(spec.p1, trunc)
    v0, v1 = f0.amplitudes, f1.amplitudes
    tail = f0.tail + f1.tail
    if spec.family is Family.ENT:
        raw1 = np.kron(v0, v0) + np.kron(v1, v1)
        raw2 = np.kron(v0, v1) + np.kron(v1, v0)
    elif spec.family is Family.SEP_UNBAL:
        raw1 = np.kron(v0, v1)
        raw2 = np.kron(v1, v0)
    else:
        raw1 = np.kron(v0, v0)
        raw2 = np.kron(v1, v1)
    n1 = float(raw1 @ raw1)
    n2 = float(raw2 @ raw2)
    return StatePair(
        FockVector(raw1 / math.sqrt(n1), modes=2, tail=tail),
        FockVector(raw2 / math.sqrt(n2), modes=2, tail=tail),
        spec.lam,
        (n1, n2),
    )
