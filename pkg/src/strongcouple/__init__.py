"""First-law energy decomposition and information measures for a qubit
strongly coupled to a single-qubit thermal environment.

The package splits the internal energy change of each subsystem into
work, heat, and a coherent contribution driven by eigenbasis rotation,
and relates the resulting heat imbalance to the entanglement negativity
of the joint state. See :mod:`strongcouple.channels` for the evolution
model and :mod:`strongcouple.firstlaw` for the decomposition itself.
"""

from .channels import (GadcParams, KrausChannel, apply_channel,
                       environment_hamiltonian, environment_initial_state,
                       environment_kraus, environment_state,
                       gadc_coupling_matrix, gadc_unitary,
                       iterate_map_check, joint_initial_state, joint_state,
                       joint_state_closed_form, p_of_t, system_hamiltonian,
                       system_initial_state, system_kraus, system_state,
                       system_state_from_dilation)
from .errors import (ConvergenceError, InputError, NumericalError,
                     StrongcoupleError, TrackingError)
from .experiment import (ExperimentConfig, ExperimentResult,
                         IntegratorSettings, OutputSelection, SweepSummary,
                         markov_convergence, run, sweep)
from .firstlaw import (ThermoTrajectory, TrajectorySample,
                       coherent_energy_integral, eigen_track,
                       first_law_closure, heat_integral,
                       internal_energy_change, sample_trajectory,
                       thermo_trajectory, work_integral)
from .infomeasures import (InfoSeries, ProportionalityReport, heat_asymmetry,
                           l1_coherence, mutual_information, negativity,
                           proportionality_report, von_neumann_entropy)
from .spectra import (DensityOperator, HermitianOperator,
                      SpectralDecomposition, eig_hermitian, partial_trace,
                      partial_transpose, tensor_product, trace_norm)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DensityOperator",
    "ExperimentConfig",
    "ExperimentResult",
    "GadcParams",
    "HermitianOperator",
    "InfoSeries",
    "InputError",
    "IntegratorSettings",
    "KrausChannel",
    "NumericalError",
    "OutputSelection",
    "ProportionalityReport",
    "SpectralDecomposition",
    "StrongcoupleError",
    "SweepSummary",
    "ThermoTrajectory",
    "TrackingError",
    "TrajectorySample",
    "apply_channel",
    "coherent_energy_integral",
    "eig_hermitian",
    "eigen_track",
    "environment_hamiltonian",
    "environment_initial_state",
    "environment_kraus",
    "environment_state",
    "first_law_closure",
    "gadc_coupling_matrix",
    "gadc_unitary",
    "heat_asymmetry",
    "heat_integral",
    "internal_energy_change",
    "iterate_map_check",
    "joint_initial_state",
    "joint_state",
    "joint_state_closed_form",
    "l1_coherence",
    "markov_convergence",
    "mutual_information",
    "negativity",
    "p_of_t",
    "partial_trace",
    "partial_transpose",
    "proportionality_report",
    "run",
    "sample_trajectory",
    "sweep",
    "system_hamiltonian",
    "system_initial_state",
    "system_kraus",
    "system_state",
    "system_state_from_dilation",
    "tensor_product",
    "thermo_trajectory",
    "trace_norm",
    "von_neumann_entropy",
    "work_integral",
]
