"""Simulator for QPC measurement back-action on a double-dot singlet qubit.

Converts detector physics (transmission, bias, geometry) into hopping and
dephasing rates, integrates the reduced and count-resolved master
equations, and packages the standard experiments behind a CLI that writes
deterministic CSV files.
"""

from .counting import (
    CountDistribution,
    CountingTrajectory,
    NResolvedState,
    counting_max_step,
    counting_rhs,
    detector_signal,
    evolve_counting,
    suggest_n_max,
)
from .dynamics import (
    DensityMatrix2,
    PropagationDiagnostics,
    SystemParams,
    Trajectory,
    bloch_analytic,
    combine_decoherence,
    decoherence_rate,
    evolve_expm,
    evolve_grid,
    evolve_rk4,
    liouvillian,
    max_step,
)
from .errors import (
    ConfigError,
    InvariantError,
    NoDecayError,
    PerturbationError,
    QpcDephError,
    StepSizeError,
    TruncationError,
    UnknownUnitError,
)
from .kernels import BACKEND
from .qpc import (
    ExpandedGammaD,
    QpcConfig,
    TunnelingRates,
    coulomb_shift,
    delta_barrier_transmission,
    gamma_d_expanded,
    rates,
    shifted_transmission,
    transmission_change,
    transmission_shift,
)
from .units import (
    CONST,
    COULOMB_NM,
    H_PLANCK,
    HBAR,
    Constants,
    rate_from_si,
    rate_to_si,
    to_internal_energy,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CONST",
    "COULOMB_NM",
    "ConfigError",
    "Constants",
    "CountDistribution",
    "CountingTrajectory",
    "DensityMatrix2",
    "ExpandedGammaD",
    "H_PLANCK",
    "HBAR",
    "InvariantError",
    "NResolvedState",
    "NoDecayError",
    "PerturbationError",
    "PropagationDiagnostics",
    "QpcConfig",
    "QpcDephError",
    "StepSizeError",
    "SystemParams",
    "Trajectory",
    "TruncationError",
    "TunnelingRates",
    "UnknownUnitError",
    "bloch_analytic",
    "combine_decoherence",
    "coulomb_shift",
    "counting_max_step",
    "counting_rhs",
    "decoherence_rate",
    "delta_barrier_transmission",
    "detector_signal",
    "evolve_counting",
    "evolve_expm",
    "evolve_grid",
    "evolve_rk4",
    "gamma_d_expanded",
    "liouvillian",
    "max_step",
    "rate_from_si",
    "rate_to_si",
    "rates",
    "shifted_transmission",
    "suggest_n_max",
    "to_internal_energy",
    "transmission_change",
    "transmission_shift",
    "__version__",
]
