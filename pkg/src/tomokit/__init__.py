"""Symplectic tomograms of quantum states: evaluation, validation,
reconstruction, and sampling experiments.

The package is organized around two objects. A *state model* (harmonic
or pseudoharmonic oscillator level, coherent state, crystallized cat)
paired with a *frame* (mu, nu) yields the measured pdf of mu q + nu p
through :func:`tomogram`. A *characteristic-function provider* wraps
such a family (analytically, through quadrature of the tomogram, from
tabulated or sampled data, or from a classical exponential family) and
feeds the validation gates, the density-matrix inversion, and the
overlap functionals.
"""

from .charfun import (
    AnalyticCharFn,
    CharFnProvider,
    ExpFamilyCharFn,
    ExpFamilySpec,
    MixtureCharFn,
    TabulatedPdf,
    TabulatedPdfCharFn,
    TomogramCharFn,
    charfn_analytic,
    charfn_expfamily,
    charfn_numeric,
    chisq_family,
    exponential_family,
    gamma_family,
    gaussian_eta_family,
    parse_provider,
    provider_label,
)
from .errors import (
    DegenerateFrameError,
    DescriptorError,
    DivergentNormalizerError,
    EstimationError,
    FrameMismatchError,
    NonConvergenceError,
    PoleError,
    QuadratureError,
    TomokitError,
    TruncationWarning,
    UnsupportedFrameError,
    UnsupportedModelError,
)
from .estimation import (
    EmpiricalCharFn,
    EmpiricalFamilyCharFn,
    EstimatorConfig,
    SampleSet,
    StepPdf,
    distance,
    empirical_charfn,
    histogram_estimate,
    kde_estimate,
    ks_statistic,
    sample_tomogram,
)
from .reconstruction import (
    DensityMatrixGrid,
    ReconstructionConfig,
    density_matrix_element,
    density_matrix_grid,
    overlap_fidelity,
    pure_state_oracle,
    purity,
)
from .special_functions import (
    SeriesControl,
    gamma_real,
    gauss_power_integral,
    kummer_1f1,
    pcf_D,
)
from .states import (
    CoherentState,
    CrystallizedCat,
    HarmonicOscillator,
    PseudoharmonicOscillator,
    StateModel,
    normalization_constant,
    parse_state,
    position_support,
    state_descriptor,
    wavefunction,
)
from .tomograms import (
    DEFAULT_QUADRATURE,
    FrameParams,
    QuadratureConfig,
    frame_from_squeeze,
    optical_frame,
    optical_tomogram,
    tomogram,
    tomogram_analytic,
    tomogram_domain,
    tomogram_numeric,
)
from .validator import (
    ANALYTIC_TOLERANCES,
    EMPIRICAL_TOLERANCES,
    CheckResult,
    DiagCheck,
    ToleranceSet,
    ValidationReport,
    ValidatorConfig,
    check_diag_positivity,
    check_hermiticity,
    check_overlap,
    check_trace,
    expfamily_gate,
    power_exponential_charfn,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # states
    "HarmonicOscillator",
    "PseudoharmonicOscillator",
    "CoherentState",
    "CrystallizedCat",
    "StateModel",
    "wavefunction",
    "normalization_constant",
    "position_support",
    "parse_state",
    "state_descriptor",
    # tomograms
    "FrameParams",
    "QuadratureConfig",
    "DEFAULT_QUADRATURE",
    "frame_from_squeeze",
    "optical_frame",
    "tomogram",
    "tomogram_analytic",
    "tomogram_numeric",
    "optical_tomogram",
    "tomogram_domain",
    # characteristic functions
    "CharFnProvider",
    "AnalyticCharFn",
    "TomogramCharFn",
    "TabulatedPdf",
    "TabulatedPdfCharFn",
    "ExpFamilySpec",
    "ExpFamilyCharFn",
    "MixtureCharFn",
    "charfn_analytic",
    "charfn_numeric",
    "charfn_expfamily",
    "exponential_family",
    "gamma_family",
    "chisq_family",
    "gaussian_eta_family",
    "parse_provider",
    "provider_label",
    # validation
    "ToleranceSet",
    "ANALYTIC_TOLERANCES",
    "EMPIRICAL_TOLERANCES",
    "ValidatorConfig",
    "CheckResult",
    "DiagCheck",
    "ValidationReport",
    "check_trace",
    "check_hermiticity",
    "check_overlap",
    "check_diag_positivity",
    "validate",
    "expfamily_gate",
    "power_exponential_charfn",
    # reconstruction
    "ReconstructionConfig",
    "DensityMatrixGrid",
    "density_matrix_element",
    "density_matrix_grid",
    "purity",
    "overlap_fidelity",
    "pure_state_oracle",
    # estimation
    "SampleSet",
    "EstimatorConfig",
    "StepPdf",
    "sample_tomogram",
    "histogram_estimate",
    "kde_estimate",
    "empirical_charfn",
    "EmpiricalCharFn",
    "EmpiricalFamilyCharFn",
    "distance",
    "ks_statistic",
    # special functions
    "SeriesControl",
    "gamma_real",
    "kummer_1f1",
    "pcf_D",
    "gauss_power_integral",
    # errors
    "TomokitError",
    "PoleError",
    "NonConvergenceError",
    "QuadratureError",
    "DegenerateFrameError",
    "UnsupportedFrameError",
    "UnsupportedModelError",
    "DivergentNormalizerError",
    "FrameMismatchError",
    "DescriptorError",
    "EstimationError",
    "TruncationWarning",
]
