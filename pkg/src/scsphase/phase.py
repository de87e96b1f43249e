"""Total, dynamical and geometric phases.

Numeric side: for ``rho = lam |psi1><psi1| + (1 - lam) |psi2><psi2|``,

    total      = arg Tr[rho U(2 pi)]
    dynamical  = -i int_0^{2 pi} Tr[rho U^dagger dU/dphi] dphi = -2 pi Tr[rho G]
    geometric  = total - dynamical

with ``G = cos(theta) Jz - sin(theta) Jx`` independent of phi. The closed forms
for the three families are evaluated literally by ``gp_entangled``,
``gp_sep_unbalanced`` and ``gp_sep_balanced``.

Phases are compared modulo 2 pi after wrapping into (-pi, pi].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.integrate import trapezoid

from .evolution import EvolutionContext, EvolutionSpec, build_context
from .fock import Truncation, rank2_expectation
from .states import (
    Family,
    MixedStateSpec,
    SCSParams,
    StatePair,
    adaptive_nmax,
    build_pair,
    eta,
    overlap_closed,
)

__all__ = [
    "NormMode",
    "PhaseResult",
    "wrap_phase",
    "total_phase",
    "dynamical_phase_closed",
    "dynamical_phase_quadrature",
    "geometric_phase_numeric",
    "gp_entangled",
    "dynamical_phase_entangled",
    "gp_sep_unbalanced",
    "gp_sep_balanced",
    "gp_analytic",
    "choose_truncation",
]

TWO_PI = 2.0 * math.pi
UNDEFINED_TRACE = 1e-12
IMAG_TOL = 1e-10

NORM_MODES = ("corrected", "paper_literal")
NormMode = str


def wrap_phase(x):
    """Reduce to (-pi, pi]; an exact -pi maps to +pi."""
    wrapped = math.pi - np.mod(math.pi - np.asarray(x, dtype=float), TWO_PI)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


@dataclass
class PhaseResult:
    total: float
    dynamical: float
    geometric: float
    geometric_wrapped: float
    trace_final: complex
    diagnostics: dict = field(default_factory=dict)


def _vectors(pair):
    if isinstance(pair, StatePair):
        return pair.psi1.amplitudes, pair.psi2.amplitudes, pair.lam
    psi1, psi2, lam = pair
    return np.asarray(psi1), np.asarray(psi2), lam


def total_phase(pair, ctx: EvolutionContext) -> tuple[float, complex]:
    """``arg Tr[rho U_final]`` and the trace itself."""
    v1, v2, lam = _vectors(pair)
    two_pi = TWO_PI
    trace = complex(lam * np.vdot(v1, ctx.apply(two_pi, v1))
                    + (1.0 - lam) * np.vdot(v2, ctx.apply(two_pi, v2)))
    if abs(trace) < UNDEFINED_TRACE:
        warnings.warn(f"|Tr[rho U]| = {abs(trace):.2e}: total phase is undefined", RuntimeWarning, stacklevel=2)
    phase = math.atan2(trace.imag, trace.real)
    if phase == -math.pi:
        phase = math.pi
    return phase, trace


def _dynamical_with_residual(pair, ctx: EvolutionContext) -> tuple[float, float]:
    v1, v2, lam = _vectors(pair)
    expect = rank2_expectation(v1, v2, lam, ctx.g)
    if abs(expect.imag) > IMAG_TOL:
        raise ArithmeticError(f"<G> has imaginary part {expect.imag:.3e}; generator is not Hermitian")
    return -TWO_PI * expect.real, abs(expect.imag)


def dynamical_phase_closed(pair, ctx: EvolutionContext) -> float:
    """``-2 pi Tr[rho G]`` (exact because the generator does not depend on phi)."""
    return _dynamical_with_residual(pair, ctx)[0]


def dynamical_phase_quadrature(pair, ctx: EvolutionContext, n_steps: int = 64) -> float:
    """Trapezoid rule for ``-i int Tr[rho U^dagger dU/dphi] dphi`` on ``n_steps`` intervals.

    Uses the exponential factors and their spectral derivatives directly, so it
    does not rely on the closed-form generator.
    """
    v1, v2, lam = _vectors(pair)
    phis = np.linspace(0.0, TWO_PI, n_steps + 1)
    values = np.empty(phis.size, dtype=complex)
    for k, phi in enumerate(phis):
        acc = 0.0j
        for weight, v in ((lam, v1), (1.0 - lam, v2)):
            if weight == 0.0:
                continue
            acc += weight * np.vdot(ctx.apply(phi, v), ctx.apply_derivative(phi, v))
        values[k] = acc
    integral = trapezoid(values, phis)
    return float((-1j * integral).real)


def choose_truncation(specs: Iterable[MixedStateSpec], r_ref: float, buffer: int = 10,
                      tail_tol: float = 1e-12, n_max: int | None = None) -> Truncation:
    """Cutoff adequate for every state in ``specs`` and for their rotations.

    A rotation keeps ``eta_a**2 + eta_b**2`` fixed in the Bogoliubov frame, so
    an SCS with ``eta = sqrt(2) * max|eta|`` at squeeze ``r_ref`` bounds the
    amplitudes visited along the path.
    """
    if n_max is not None:
        return Truncation(n_max, buffer, tail_tol)
    params: list[SCSParams] = []
    for s in specs:
        params.extend((s.p0, s.p1))
    if not params:
        raise ValueError("no states given")
    eta_max = max(abs(eta(p)) for p in params)
    alpha_env = math.sqrt(2.0) * eta_max * math.exp(-r_ref)
    params.append(SCSParams(alpha_env, r_ref, alpha_cap=math.inf))
    return Truncation(adaptive_nmax(params, tail_tol), buffer, tail_tol)


def geometric_phase_numeric(spec: MixedStateSpec, evo: EvolutionSpec | None = None, *,
                            ctx: EvolutionContext | None = None, pair: StatePair | None = None,
                            theta: float | None = None, r_ref: float | None = None) -> PhaseResult:
    """Truncated-Fock-space geometric phase of ``spec``.

    Pass a prebuilt ``ctx`` to share operators across many states. Without
    ``evo`` or ``ctx``, ``theta`` is required and ``r_ref`` defaults to the
    common squeezing of the two modes.
    """
    if ctx is None:
        if evo is None:
            if theta is None:
                raise ValueError("need evo, ctx or theta")
            if r_ref is None:
                if spec.p0.r != spec.p1.r:
                    raise ValueError("r_ref is required when r0 != r1")
                r_ref = spec.p0.r
            evo = EvolutionSpec(theta, r_ref, choose_truncation([spec], r_ref))
        ctx = build_context(evo)
    trunc = ctx.spec.trunc
    if pair is None:
        pair = build_pair(spec, trunc)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        total, trace = total_phase(pair, ctx)
    dyn, imag_res = _dynamical_with_residual(pair, ctx)
    geometric = total - dyn
    diagnostics = {
        "n_max": trunc.n_max,
        "buffer": trunc.buffer,
        "mode_dim": ctx.mode_dim,
        "trace_abs": abs(trace),
        "undefined_phase": bool(caught) or abs(trace) < UNDEFINED_TRACE,
        "dynamical_imag": imag_res,
        "norms_sq": pair.norms_sq,
    }
    return PhaseResult(total, dyn, geometric, wrap_phase(geometric), trace, diagnostics)


def _norm(p01: float, norm_mode: NormMode) -> float:
    if norm_mode == "corrected":
        return 2.0 + 2.0 * p01 * p01
    if norm_mode == "paper_literal":
        return 2.0 + 2.0 * p01
    raise ValueError(f"norm_mode must be one of {NORM_MODES}, got {norm_mode!r}")


def _entangled_bracket(p0: SCSParams, p1: SCSParams, lam: float, norm_mode: NormMode) -> float:
    e0, e1 = eta(p0), eta(p1)
    p01 = overlap_closed(p0, p1).p01
    pp = p01 * p01
    bracket = (lam * (e0 * e0 + e1 * e1 + 2.0 * e0 * e1 * pp)
               + (1.0 - lam) * ((e0 * e0 + e1 * e1) * pp + 2.0 * e0 * e1))
    return bracket / _norm(p01, norm_mode)


def gp_entangled(p0: SCSParams, p1: SCSParams, lam: float, theta: float,
                 norm_mode: NormMode = "corrected") -> float:
    """Closed-form geometric phase of the entangled mixture.

    ``norm_mode="corrected"`` normalizes with ``N = 2 + 2 p01**2`` (the actual
    norm of the superpositions); ``"paper_literal"`` uses ``N = 2 + 2 p01``.
    """
    return -TWO_PI * math.sin(theta) * _entangled_bracket(p0, p1, lam, norm_mode)


def dynamical_phase_entangled(p0: SCSParams, p1: SCSParams, lam: float, theta: float,
                              norm_mode: NormMode = "corrected") -> float:
    return TWO_PI * math.sin(theta) * _entangled_bracket(p0, p1, lam, norm_mode)


def gp_sep_unbalanced(p0: SCSParams, p1: SCSParams, lam: float, theta: float) -> float:
    e0, e1 = eta(p0), eta(p1)
    return TWO_PI * (-e0 * e1 * math.sin(theta) + (e0 * e0 - e1 * e1) * (lam - 0.5) * math.cos(theta))


def gp_sep_balanced(p0: SCSParams, p1: SCSParams, lam: float, theta: float) -> float:
    e0, e1 = eta(p0), eta(p1)
    return -TWO_PI * math.sin(theta) * (lam * e0 * e0 + (1.0 - lam) * e1 * e1)


def gp_analytic(spec: MixedStateSpec, theta: float, norm_mode: NormMode = "corrected") -> float:
    """Dispatch to the closed form for ``spec.family`` (unwrapped)."""
    if spec.family is Family.ENT:
        return gp_entangled(spec.p0, spec.p1, spec.lam, theta, norm_mode)
    if spec.family is Family.SEP_UNBAL:
        return gp_sep_unbalanced(spec.p0, spec.p1, spec.lam, theta)
    return gp_sep_balanced(spec.p0, spec.p1, spec.lam, theta)
