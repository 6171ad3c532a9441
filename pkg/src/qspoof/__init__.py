"""Quantum limits of spoofing detection with coherent and squeezed states of light."""

__version__ = "0.1.0"

from .coherent import (
    CoherentPairParams,
    coherent_success,
    coherent_success_at,
    critical_photon_number,
    overlap_coherent,
    phi_opt,
)
from .errors import ConsistencyError, DomainError, TruncationError
from .gaussian import GaussianStateParams, conjugate_pair, db_to_r, overlap_squeezed, squeezing_db
from .helstrom import (
    Regime,
    TwoStateDetectionReport,
    chi,
    classical_limit,
    gamma_opt,
    helstrom_gamma,
    optimal_overlap,
    quantum_gain,
    success_probability,
)
from .optimize import (
    OptimizationConfig,
    OptimumReport,
    SweepTable,
    maximize_joint,
    maximize_restricted,
    sweep_photons,
    sweep_prior,
    sweep_squeezing,
)
from .restricted import (
    CubicCoefficients,
    RestrictedScenario,
    cubic_coefficients,
    restricted_scenario,
    restricted_success,
    solve_cubic_real,
)
