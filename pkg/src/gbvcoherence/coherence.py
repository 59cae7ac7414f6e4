"""Fidelity, coherence fraction and the l1 coherence cross-check.

All quantities are overlaps with the fixed reference |eta> whose amplitudes
are all ``1/sqrt(N)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .oracle import LinearOracle, apply_phase_oracle
from .statevector import (
    PureStateEnsemble,
    SingleQubitGate,
    SizeError,
    StateVector,
    ValidationError,
    apply_tensor_power,
    inner_product,
    walsh_hadamard,
)

L1_MAX_QUBITS = 12


@dataclass(frozen=True)
class CoherenceReport:
    value: float
    subject: str

    def __post_init__(self):
        if not -1e-12 <= self.value <= 1.0 + 1e-12:
            raise ValidationError(f"coherence fraction {self.value} outside [0, 1]")


def eta_overlap_sq(buf: np.ndarray) -> float:
    """|<eta|v>|^2 = |sum_x v_x|^2 / N for a raw amplitude buffer."""
    s = buf.sum()
    return float(s.real * s.real + s.imag * s.imag) / buf.shape[0]


def fidelity_pure(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2."""
    a.require_normalized()
    b.require_normalized()
    return abs(inner_product(a, b)) ** 2


def coherence_fraction(state: StateVector) -> float:
    """<eta|psi><psi|eta> for a normalized pure state."""
    state.require_normalized()
    return eta_overlap_sq(state.amplitudes)


def coherence_report(state: StateVector, subject: str) -> CoherenceReport:
    return CoherenceReport(coherence_fraction(state), subject)


def coherence_fraction_ensemble(rho: PureStateEnsemble) -> float:
    return sum(p * coherence_fraction(s) for p, s in rho.members)


def operator_coherence_fraction(gate_action, reference: StateVector) -> float:
    """Coherence fraction of ``U |ref>``.

    ``gate_action`` is a :class:`SingleQubitGate` (applied to every qubit) or
    a :class:`LinearOracle`. ``"hadamard"`` selects H on every qubit through
    the fast transform.
    """
    reference.require_normalized()
    if isinstance(gate_action, str) and gate_action.lower() == "hadamard":
        out = walsh_hadamard(reference)
    elif isinstance(gate_action, SingleQubitGate):
        out = apply_tensor_power(reference, gate_action)
    elif isinstance(gate_action, LinearOracle):
        out = apply_phase_oracle(reference, gate_action)
    else:
        raise ValidationError(f"unsupported transform {gate_action!r}")
    return coherence_fraction(out)


def density_matrix_rows(rho: PureStateEnsemble, start: int, stop: int) -> np.ndarray:
    """Rows ``start:stop`` of sum_mu p_mu |psi_mu><psi_mu|."""
    dim = 1 << rho.n
    block = np.zeros((stop - start, dim), dtype=np.complex128)
    for p, s in rho.members:
        a = s.amplitudes
        block += p * np.outer(a[start:stop], a.conj())
    return block


def l1_coherence(rho: PureStateEnsemble, block_rows: int = 256) -> float:
    """sum_{i != j} |rho_ij|, accumulated a block of rows at a time."""
    if isinstance(rho, StateVector):
        rho = PureStateEnsemble.pure(rho)
    if rho.n > L1_MAX_QUBITS:
        raise SizeError(f"l1_coherence is dense; n={rho.n} exceeds {L1_MAX_QUBITS}")
    dim = 1 << rho.n
    total = 0.0
    for start in range(0, dim, block_rows):
        stop = min(start + block_rows, dim)
        block = np.abs(density_matrix_rows(rho, start, stop))
        rows = np.arange(stop - start)
        block[rows, rows + start] = 0.0
        total += float(block.sum())
    return total
