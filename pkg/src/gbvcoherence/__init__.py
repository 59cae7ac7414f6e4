"""Statevector simulation of the generalized Bernstein-Vazirani algorithm with
state and operator coherence-fraction analytics."""

from .coherence import (
    CoherenceReport,
    coherence_fraction,
    coherence_fraction_ensemble,
    fidelity_pure,
    l1_coherence,
    operator_coherence_fraction,
)
from .gbv import (
    GbvRun,
    MeasurementHistogram,
    classical_baseline,
    oracle_cross_term,
    projected_final_cf,
    run_gbv,
    sample_measurement,
    success_probability_direct,
    verify_theorem,
)
from .oracle import LinearOracle, apply_phase_oracle, ell
from .statevector import (
    HADAMARD,
    IDENTITY,
    PureStateEnsemble,
    SingleQubitGate,
    SizeError,
    StateVector,
    ValidationError,
    apply_single_qubit_gate,
    inner_product,
    product_state,
    random_state,
    uniform_state,
    walsh_hadamard,
    zero_state,
)
from .sweep import (
    LocalUnitaryParams,
    SweepRow,
    closed_form_cf,
    dynamics_trace,
    example_initial_state,
    local_unitary,
    parity_oracle,
    sweep,
)

__version__ = "0.1.0"
