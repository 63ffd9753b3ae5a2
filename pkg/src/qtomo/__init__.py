"""Tomographic-probability toolkit for multimode quadratic quantum dynamics.

The package follows the mode-invariant route: time-dependent quadratic
Hamiltonians are reduced to linear flows of complex mode coefficients
(Lambda_p, Lambda_x, delta), from which coherent and number-state
wavefunctions, symplectic quadrature tomograms, and transition amplitudes
all follow in closed form built on multivariate Hermite polynomials.
"""

from .errors import (
    DegenerateFrame,
    DomainError,
    FrameRequiresNu,
    NegativeSpectrum,
    NonCommutingBlocks,
    NonPositiveDispersion,
    NotSymplectic,
    OrderOverflow,
    ParseError,
    QtomoError,
    SingularBlock,
    SingularD,
    SingularLambdaP,
    StepTooLarge,
    ValidationError,
)
from .hamiltonian_dynamics import (
    LadderFrame,
    ModeInvariants,
    ModeSeries,
    QuadraticHamiltonian,
    RealSeries,
    RealSymplectic,
    SymplecticReport,
    check_symplectic_properties,
    closed_form_propagator,
    default_ladder_frame,
    propagate_modes,
    propagate_real,
    symplectic_form,
)
from .hermite import (
    DEFAULT_MAX_ORDER,
    HermiteSpec,
    hermite2d_legendre,
    hermite_eval,
    hermite_series_oracle,
    legendre_assoc,
)
from .quantum_states import (
    CoherentLabel,
    FockLabel,
    StateContext,
    coherent_expansion_check,
    coherent_psi,
    fock_psi,
)
from .tomography import (
    GaussianTomogram,
    TomogramFrame,
    coherent_tomogram,
    fock_tomogram,
    tomogram_density,
    tomogram_quadrature,
    xi_matrix,
)
from .transitions import (
    BogoliubovS,
    OverlapKernel,
    SumRuleResult,
    amplitude_cnm,
    apply_bogoliubov,
    make_bogoliubov,
    overlap_kernel,
    overlap_nm,
    squeeze_transform,
    sum_rule_check,
    transition_probability,
)
from .model_library import (
    ChargedParticle,
    ParametricOscillator,
    TomogramParts,
    oscillator_epsilon,
    oscillator_invariants,
    oscillator_state_context,
    oscillator_tomogram_parts,
    particle_delta,
    particle_invariants,
    particle_state_context,
    particle_tomogram_parts,
)
from .cli import ResultTable, RunConfig, RunResult, main, parse_config, run, serialize

__version__ = "0.1.0"

__all__ = [
    "QtomoError",
    "NonCommutingBlocks",
    "SingularBlock",
    "NegativeSpectrum",
    "StepTooLarge",
    "OrderOverflow",
    "DomainError",
    "SingularLambdaP",
    "DegenerateFrame",
    "NonPositiveDispersion",
    "FrameRequiresNu",
    "NotSymplectic",
    "SingularD",
    "ParseError",
    "ValidationError",
    "symplectic_form",
    "QuadraticHamiltonian",
    "LadderFrame",
    "ModeInvariants",
    "RealSymplectic",
    "RealSeries",
    "ModeSeries",
    "propagate_real",
    "propagate_modes",
    "closed_form_propagator",
    "default_ladder_frame",
    "SymplecticReport",
    "check_symplectic_properties",
    "DEFAULT_MAX_ORDER",
    "HermiteSpec",
    "hermite_eval",
    "hermite_series_oracle",
    "legendre_assoc",
    "hermite2d_legendre",
    "CoherentLabel",
    "FockLabel",
    "StateContext",
    "coherent_psi",
    "fock_psi",
    "coherent_expansion_check",
    "TomogramFrame",
    "GaussianTomogram",
    "xi_matrix",
    "coherent_tomogram",
    "tomogram_density",
    "fock_tomogram",
    "tomogram_quadrature",
    "BogoliubovS",
    "make_bogoliubov",
    "squeeze_transform",
    "amplitude_cnm",
    "SumRuleResult",
    "sum_rule_check",
    "apply_bogoliubov",
    "OverlapKernel",
    "overlap_kernel",
    "overlap_nm",
    "transition_probability",
    "TomogramParts",
    "ParametricOscillator",
    "ChargedParticle",
    "oscillator_epsilon",
    "oscillator_invariants",
    "oscillator_state_context",
    "oscillator_tomogram_parts",
    "particle_delta",
    "particle_invariants",
    "particle_state_context",
    "particle_tomogram_parts",
    "RunConfig",
    "parse_config",
    "serialize",
    "ResultTable",
    "RunResult",
    "run",
    "main",
]
