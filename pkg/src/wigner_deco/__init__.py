"""Wigner functions of 1-D states and their evolution under position
decoherence, including the finite-time positivity scan."""

from .evolution import (
    DecoherenceScales,
    PropagatorCovariance,
    ScanResult,
    decoherence_scan,
    evolve_density_trotter,
    evolve_exact,
    evolve_fd,
    evolve_montecarlo,
    montecarlo_trajectories,
    propagator_covariance,
    scales,
)
from .smoothing import (
    CovarianceMatrix2,
    GaussianKernel,
    check_lemma,
    coarse_grain,
    husimi,
    positivity_threshold,
)
from .states import (
    DensityMatrix,
    PhysicalParams,
    PositionGrid,
    WaveFunction,
    cat_state,
    density_from_pure,
    gaussian_packet,
    mix,
    oscillator_eigenstate,
)
from .wigner import (
    PositivityReport,
    WignerField,
    apply_squeeze,
    marginals,
    min_value,
    purity,
    wigner_transform,
)

__version__ = "0.1.0"

__all__ = [
    "CovarianceMatrix2",
    "DecoherenceScales",
    "DensityMatrix",
    "GaussianKernel",
    "PhysicalParams",
    "PositionGrid",
    "PositivityReport",
    "PropagatorCovariance",
    "ScanResult",
    "WaveFunction",
    "WignerField",
    "apply_squeeze",
    "cat_state",
    "check_lemma",
    "coarse_grain",
    "decoherence_scan",
    "density_from_pure",
    "evolve_density_trotter",
    "evolve_exact",
    "evolve_fd",
    "evolve_montecarlo",
    "gaussian_packet",
    "husimi",
    "marginals",
    "min_value",
    "mix",
    "montecarlo_trajectories",
    "oscillator_eigenstate",
    "positivity_threshold",
    "propagator_covariance",
    "purity",
    "scales",
    "wigner_transform",
]
