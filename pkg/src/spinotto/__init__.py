"""Quantum Otto engine with a long-range transverse-field spin chain working substance."""

from .analytic import (
    QuadraticModel,
    clausen,
    fluctuation_factor,
    high_t_expansion,
    mean_field_free_energy,
    p1_work_scaling,
    quadratic_free_energy,
    tfim_cycle,
    tfim_free_energy,
    two_level_performance,
)
from .counterdiabatic import (
    CDCoefficients,
    action,
    cd_hamiltonian,
    stationarity_residual,
    variational_coefficients,
)
from .cycle import (
    CycleParams,
    CyclePerformance,
    compression_sweep,
    noninteracting_eta,
    noninteracting_work,
    power,
    r_ni_max,
    run_cycle,
)
from .dynamics import EvolutionConfig, adiabatic_map, evolve, evolve_fixed
from .entanglement import (
    Partition,
    entanglement_entropy,
    partial_transpose,
    partial_transpose_min_eig,
    polarized_ground_state,
    ppt_witness,
    two_level_thermal_state,
    w_state,
)
from .errors import ChainTooLargeError, GridError, NumericalError, SpinottoError
from .model import (
    ChainParams,
    DriveProtocol,
    build_hamiltonian,
    coupling_matrix,
    drive_derivative,
    drive_value,
)
from .spectral import (
    GapCurve,
    Spectrum,
    critical_coupling,
    critical_coupling_cached,
    diagonalize,
    eigenvalues,
    energy_gap,
    gap_curve,
    level_occupations,
    occupation_bands,
)
from .thermal import (
    energy_expectation,
    gibbs_populations,
    gibbs_state,
    ln_partition,
    purity,
    trace_distance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
