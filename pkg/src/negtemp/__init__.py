"""Steady states and Boltzmann effective temperatures of driven
qubit-boson models with thermal dissipation."""

__version__ = "0.1.0"

from .dynamics import (
    DensityMatrix,
    SolverOptions,
    SteadyStateResult,
    Superoperator,
    evolve,
    liouvillian,
    residual,
    steady_state,
    trace_distance,
)
from .hilbert import Operator, SpaceDescriptor, annihilation, embed, kron, op_power, qubit_operator
from .models import (
    LindbladTerm,
    ModelInstance,
    ModelSpec,
    build_ajcm_hamiltonian,
    build_dissipators,
    build_exchange_hamiltonian,
    build_model,
    coupling_from_cooperativity,
)
from .sweeps import (
    ExtremumResult,
    FixedParams,
    ScenarioConfig,
    SweepRow,
    TruncationPolicy,
    canonical_config,
    converge_truncation,
    detect_extremum,
    detect_sign_change,
    run_scenario,
    select_rows,
)
from .thermo import QubitThermo, effective_temperature, partial_trace, qubit_thermo, von_neumann_entropy

__all__ = [
    "DensityMatrix",
    "ExtremumResult",
    "FixedParams",
    "LindbladTerm",
    "ModelInstance",
    "ModelSpec",
    "Operator",
    "QubitThermo",
    "ScenarioConfig",
    "SolverOptions",
    "SpaceDescriptor",
    "SteadyStateResult",
    "Superoperator",
    "SweepRow",
    "TruncationPolicy",
    "annihilation",
    "build_ajcm_hamiltonian",
    "build_dissipators",
    "build_exchange_hamiltonian",
    "build_model",
    "canonical_config",
    "converge_truncation",
    "coupling_from_cooperativity",
    "detect_extremum",
    "detect_sign_change",
    "effective_temperature",
    "embed",
    "evolve",
    "kron",
    "liouvillian",
    "op_power",
    "partial_trace",
    "qubit_operator",
    "qubit_thermo",
    "residual",
    "run_scenario",
    "select_rows",
    "steady_state",
    "trace_distance",
    "von_neumann_entropy",
]
