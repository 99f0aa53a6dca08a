"""Quantum Fisher information, Cramer-Rao bounds and detection sensitivities of a Mach-Zehnder
interferometer fed with separable Gaussian states, plus a truncated Fock-space cross-check."""
from .closed_forms import (
    CohPlusSqzVac,
    DualCoherent,
    SingleCoherent,
    SqzCohPlusSqzVac,
    StationaryInterval,
    TOptCoefficients,
    balanced_optimality_predicates,
    balanced_sym_qfi,
    best_asym_t,
    coh_sqz_existence,
    coh_sqz_pmc,
    dual_coherent_t_opt,
    existence_limits,
    family_moments,
    family_qfi,
    generic_t_opt,
    high_alpha_t_opt,
    max_asym_qfi,
    sqzcoh_pmc,
    t_opt_coefficients,
)
from .detection import (
    Asym,
    DetectorConfig,
    DetectorKind,
    InterferometerConfig,
    SensitivityPoint,
    Sym,
    TwoPhase,
    best_sensitivity,
    bs2_t_opt,
    difference_intensity,
    family_point,
    homodyne,
    optimal_working_point,
    sensitivity_point,
)
from .errors import (
    DomainError,
    MziFisherError,
    SingularFormulaError,
    StateParseError,
    UnderTruncationError,
    VanishingInformationError,
)
from .fisher import BeamSplitter, FisherMatrix, QfiMode, fisher_matrix, make_beam_splitter, qcrb, qfi
from .moments import (
    ComplexAmplitude,
    ModeMoments,
    SqueezeParam,
    coherent,
    moments_of,
    squeezed_coherent,
    squeezed_vacuum,
    upsilon,
    vacuum,
)

__version__ = "0.1.0"
