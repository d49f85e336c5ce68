"""phasekit: staged semiclassical phase estimation, simulated and costed.

The package answers two kinds of question about recovering an n-bit
eigenphase with only k workspace qubits: what a noiseless run actually
measures (exact dyadic simulation, two backends, Kitaev baseline, order
finding/factoring), and what it costs (rotation-count closed forms and
live gate tallies that must agree).
"""

from __future__ import annotations

__version__ = "0.1.0"

from .backends import MAX_DENSE_QUBITS, ProductPhaseState, StateVectorState, make_state
from .errors import (
    ConfigurationError,
    ContractViolation,
    DegenerateEstimateError,
    PhasekitError,
    PrecisionError,
    ReconstructionError,
    ResourceLimitError,
)
from .kitaev import (
    KitaevReport,
    analytic_phi_l,
    estimate_phi_l,
    hadamard_test,
    kitaev_trials,
    reconstruct_bits,
    run_kitaev,
)
from .phases import (
    BinaryPhase,
    BitString,
    ClassicalAccumulator,
    accumulate,
    fraction_from_bits,
    parse_phase,
    phase_to_bits,
)
from .qft import (
    apply_feedback_rotations,
    closed_form_T,
    conventional_counts,
    rf_dagger,
    rotation_count,
)
from .rng import ForcedOutcomes, Rng
from .shor import (
    CaseCostComparison,
    FactorInstance,
    FactorOutcome,
    ShorAttempt,
    compare_case_costs,
    continued_fraction_recover,
    diophantine_recover,
    factor_from_order,
    multiplicative_order,
    multiplier_powers,
    run_order_finding,
    shor_attempt,
)
from .staged import (
    EstimateReport,
    StagedConfig,
    StagedCost,
    block_size,
    reset_angles,
    run_staged,
    stage_count,
    stage_exponents,
    staged_cost,
)
from .tally import GateTally

__all__ = [
    "__version__",
    "MAX_DENSE_QUBITS",
    "ProductPhaseState",
    "StateVectorState",
    "make_state",
    "PhasekitError",
    "ContractViolation",
    "PrecisionError",
    "ConfigurationError",
    "ResourceLimitError",
    "DegenerateEstimateError",
    "ReconstructionError",
    "BinaryPhase",
    "BitString",
    "ClassicalAccumulator",
    "accumulate",
    "fraction_from_bits",
    "parse_phase",
    "phase_to_bits",
    "GateTally",
    "Rng",
    "ForcedOutcomes",
    "rf_dagger",
    "apply_feedback_rotations",
    "rotation_count",
    "closed_form_T",
    "conventional_counts",
    "StagedConfig",
    "StagedCost",
    "EstimateReport",
    "run_staged",
    "staged_cost",
    "stage_count",
    "stage_exponents",
    "block_size",
    "reset_angles",
    "KitaevReport",
    "kitaev_trials",
    "hadamard_test",
    "estimate_phi_l",
    "analytic_phi_l",
    "reconstruct_bits",
    "run_kitaev",
    "FactorInstance",
    "FactorOutcome",
    "ShorAttempt",
    "CaseCostComparison",
    "multiplier_powers",
    "multiplicative_order",
    "run_order_finding",
    "continued_fraction_recover",
    "diophantine_recover",
    "factor_from_order",
    "shor_attempt",
    "compare_case_costs",
]
