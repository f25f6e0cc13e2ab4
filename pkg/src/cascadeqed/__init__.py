"""Two-photon spontaneous emission of a ladder emitter in a chiral 1D waveguide.

Closed-form wavefunction amplitudes, detection probabilities and two-photon
spectra for a three-level ladder system coupled to a unidirectional photon
continuum, with an independent mode-discretized integrator for verification.
"""

from .analytic import (
    AmplitudeField,
    GeneralSolution,
    alpha_spontaneous,
    beta_spontaneous,
    gamma_spontaneous,
    general_solution,
    heaviside_reg,
)
from .observables import (
    PeakList,
    SpectrumGrid,
    beta_k,
    find_peaks,
    gamma_k,
    identical_spectrum,
    spectral_density,
    spectrum_grid,
    spectrum_norm,
    state_probabilities,
)
from .oracle import (
    ComparisonReport,
    ComparisonTolerances,
    OracleConfig,
    OracleError,
    OracleTrajectory,
    PulseInit,
    compare_with_analytic,
    oracle_probabilities,
    run_oracle,
)
from .params import RegimeWarning, SystemParams, alpha_r_from_circuit, make_params
from .pulses import PulseSpec
from .quadrature import QuadratureError, QuadResult, quad_complex

__version__ = "0.1.0"

__all__ = [
    "AmplitudeField", "GeneralSolution", "alpha_spontaneous", "beta_spontaneous",
    "gamma_spontaneous", "general_solution", "heaviside_reg",
    "PeakList", "SpectrumGrid", "beta_k", "find_peaks", "gamma_k",
    "identical_spectrum", "spectral_density", "spectrum_grid", "spectrum_norm",
    "state_probabilities",
    "ComparisonReport", "ComparisonTolerances", "OracleConfig", "OracleError",
    "OracleTrajectory", "PulseInit", "compare_with_analytic",
    "oracle_probabilities", "run_oracle",
    "RegimeWarning", "SystemParams", "alpha_r_from_circuit", "make_params",
    "PulseSpec", "QuadratureError", "QuadResult", "quad_complex",
    "__version__",
]
