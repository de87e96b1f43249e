"""Geometric phase of two-mode mixed squeezed-coherent states.

Closed-form phases for three mixed-state families under a cyclic SU(2)
rotation, together with a truncated Fock-space oracle that computes the same
phases from first principles.
"""

from .evolution import EvolutionContext, EvolutionSpec, build_context, commutator_residual, generator_check, unitary_at
from .fock import FockVector, SpectralError, Truncation, TruncationError, herm_expm, rank2_expectation
from .phase import (
    PhaseResult,
    choose_truncation,
    dynamical_phase_closed,
    dynamical_phase_quadrature,
    geometric_phase_numeric,
    gp_analytic,
    gp_entangled,
    gp_sep_balanced,
    gp_sep_unbalanced,
    total_phase,
    wrap_phase,
)
from .special import hermite, hermite_scaled_seq, mehler_closed, mehler_series
from .states import (
    Family,
    MixedStateSpec,
    SCSParams,
    build_pair,
    eta,
    overlap_closed,
    overlap_fock,
    overlap_series,
    scs_fock,
)

__version__ = "0.1.0"
