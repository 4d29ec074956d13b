"""Weak-star recovery of measures on the torus from band-limited data.

The library reconstructs an arbitrary finite-mass measure from finitely
many, possibly noisy, Fourier coefficients by smooth band limiting,
measures the reconstruction error in kernel-induced norms that metrize
weak-star convergence, and ships a study harness that verifies the
predicted decay rates, their converse characterization, and the
minimal-separation barrier numerically.
"""

from .errors import (
    BandCoverageError,
    BasisLookupError,
    ConfigError,
    DimensionError,
    ParameterError,
    ResolutionError,
    SlowDecayError,
    WeakstarError,
)
from .filters import Filter, bandpass, bandpass_g, lowpass, lowpass_h, mask, mask_beta, product
from .grids import Grid, GridFunction
from .measures import (
    Measure,
    bandlimited_density,
    bump_density,
    fourier_coefficients,
    lacunary_density,
    measure_from_atoms,
    minimal_separation,
    synthesize,
    torus_distance,
    total_variation,
    uniform_density,
)
from .metrics import (
    NormRequest,
    erdos_turan,
    erdos_turan_spectral,
    fejer_seminorm,
    g_norm,
    highpass_g_norm,
    near_best_degree_error,
    truncation_bar,
)
from .recover import NoiseModel, RecoveredMeasure, noise_field_l1, recuperate
from .spectral import (
    KernelSpec,
    SpectralVector,
    apply_inverse_kernel,
    apply_multiplier,
    eval_kernel_section,
    kernel_spec,
    kernel_spec_empirical,
    localized_kernel,
    spectral_tail_bound,
    truncation_for_tolerance,
)
from .system import BasisIndex, SystemDescriptor, build_torus_system, eval_basis
from .experiments import (
    ExperimentConfig,
    RateReport,
    config_from_dict,
    run_converse_study,
    run_dipole_study,
    run_highpass_study,
    run_noise_study,
    run_rate_study,
    run_study,
    run_width_constant_study,
    write_csv,
)

__version__ = "0.1.0"
