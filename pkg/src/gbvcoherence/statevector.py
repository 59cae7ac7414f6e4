"""Dense statevectors and the local gate kernels used by the GBV pipeline.

Bit convention: basis index ``x`` encodes the string ``x1 x2 ... xn`` with
``x1`` the most significant bit, and qubit ``k`` (1-based) is bit ``x_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MAX_QUBITS = 26
NORM_TOL = 1e-10
UNITARY_TOL = 1e-12


class SizeError(ValueError):
    """Qubit count or dimension outside the supported range."""


class ValidationError(ValueError):
    """Input violates a mathematical precondition (unitarity, normalization, ...)."""


def check_qubits(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise SizeError(f"qubit count must be an integer, got {n!r}")
    if not 1 <= n <= MAX_QUBITS:
        raise SizeError(f"qubit count must lie in [1, {MAX_QUBITS}], got {n}")
    return int(n)


def amplitude_scale(n: int) -> float:
    """1/sqrt(2**n), shared so |eta> and H^n|0^n> agree bit for bit."""
    return 2.0 ** (-0.5 * n)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Immutable vector of ``2**n`` complex amplitudes.

    ``subnormalized`` marks a projected branch whose norm may be below one;
    only :func:`gbvcoherence.gbv.project_onto_basis` produces such vectors.
    """

    n: int
    amplitudes: np.ndarray
    subnormalized: bool = False

    def __post_init__(self):
        n = check_qubits(self.n)
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amps.shape != (1 << n,):
            raise SizeError(f"expected {1 << n} amplitudes for n={n}, got shape {amps.shape}")
        amps.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "amplitudes", amps)
        norm2 = np.vdot(amps, amps).real
        if self.subnormalized:
            if norm2 > 1.0 + NORM_TOL:
                raise ValidationError(f"projected branch has norm^2 {norm2} > 1")
        elif abs(norm2 - 1.0) > NORM_TOL:
            raise ValidationError(f"state is not normalized: norm^2 = {norm2!r}")

    @classmethod
    def _adopt(cls, n: int, buf: np.ndarray, subnormalized: bool = False) -> "StateVector":
        # Takes ownership of ``buf`` without copying; callers must not touch it afterwards.
        obj = object.__new__(cls)
        buf.flags.writeable = False
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "amplitudes", buf)
        object.__setattr__(obj, "subnormalized", subnormalized)
        return obj

    @property
    def dim(self) -> int:
        return 1 << self.n

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return self.amplitudes.real ** 2 + self.amplitudes.imag ** 2

    def copy_buffer(self) -> np.ndarray:
        """Writable copy of the amplitudes, for in-place kernels."""
        return self.amplitudes.copy()

    def require_normalized(self) -> None:
        if self.subnormalized:
            raise ValidationError("operation requires a normalized state, got a projected branch")

    def __repr__(self) -> str:
        tag = ", subnormalized" if self.subnormalized else ""
        return f"StateVector(n={self.n}{tag})"


@dataclass(frozen=True, eq=False)
class SingleQubitGate:
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        if m.shape != (2, 2):
            raise ValidationError(f"single-qubit gate must be 2x2, got {m.shape}")
        if np.max(np.abs(m.conj().T @ m - np.eye(2))) > UNITARY_TOL:
            raise ValidationError(f"gate {self.name or m.tolist()} is not unitary")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def first_column(self) -> tuple[complex, complex]:
        """Image of |0>."""
        return complex(self.matrix[0, 0]), complex(self.matrix[1, 0])


_S = 2.0 ** -0.5
HADAMARD = SingleQubitGate([[_S, _S], [_S, -_S]], name="H")
IDENTITY = SingleQubitGate(np.eye(2), name="I")


@dataclass(frozen=True)
class PureStateEnsemble:
    """Mixed state ``sum_mu p_mu |psi_mu><psi_mu|`` as weighted pure states."""

    members: tuple[tuple[float, StateVector], ...] = field(default_factory=tuple)

    def __post_init__(self):
        members = tuple((float(p), s) for p, s in self.members)
        if not members:
            raise ValidationError("ensemble needs at least one member")
        n = members[0][1].n
        for p, s in members:
            if s.n != n:
                raise SizeError("ensemble members must share one qubit count")
            s.require_normalized()
            if p < 0:
                raise ValidationError(f"negative ensemble weight {p}")
        total = sum(p for p, _ in members)
        if abs(total - 1.0) > NORM_TOL:
            raise ValidationError(f"ensemble weights sum to {total}, not 1")
        object.__setattr__(self, "members", members)

    @classmethod
    def pure(cls, state: StateVector) -> "PureStateEnsemble":
        return cls(((1.0, state),))

    @property
    def n(self) -> int:
        return self.members[0][1].n


# -- in-place kernels -------------------------------------------------------
# These operate on writable complex128 buffers of length 2**n and allocate
# nothing of size O(N); the public functions wrap them with value semantics.


def _qubit_view(buf: np.ndarray, n: int, qubit: int) -> np.ndarray:
    """View with axis 1 indexing bit ``x_qubit`` (1-based, MSB first)."""
    return buf.reshape(1 << (qubit - 1), 2, 1 << (n - qubit))


def fwht_inplace(buf: np.ndarray, n: int) -> None:
    """Normalized Walsh-Hadamard transform, one butterfly pass per qubit."""
    for q in range(1, n + 1):
        v = _qubit_view(buf, n, q)
        lo = v[:, 0, :]
        hi = v[:, 1, :]
        # (a, b) -> (a + b, a - b) without a scratch array
        lo += hi
        hi *= -2.0
        hi += lo
    buf *= amplitude_scale(n)


def fill_product_inplace(buf: np.ndarray, columns: Sequence[tuple[complex, complex]]) -> None:
    """Write the product state ``(c0|0> + c1|1>)_1 x ... x (...)_n`` into ``buf``.

    ``columns[k]`` holds the single-qubit amplitudes for qubit ``k + 1``.
    Built by doubling, adding qubits from least to most significant.
    """
    buf[0] = 1.0
    m = 1
    for c0, c1 in reversed(columns):
        np.multiply(buf[:m], c1, out=buf[m:2 * m])
        buf[:m] *= c0
        m *= 2


def apply_gate_inplace(buf: np.ndarray, n: int, matrix: np.ndarray, qubit: int) -> None:
    v = _qubit_view(buf, n, qubit)
    v[...] = np.matmul(matrix, v)


# -- constructors -----------------------------------------------------------


def zero_state(n: int) -> StateVector:
    n = check_qubits(n)
    buf = np.zeros(1 << n, dtype=np.complex128)
    buf[0] = 1.0
    return StateVector._adopt(n, buf)


def uniform_state(n: int) -> StateVector:
    """The maximally coherent state |eta> = (1/sqrt N) sum_x |x>."""
    n = check_qubits(n)
    return StateVector._adopt(n, np.full(1 << n, amplitude_scale(n), dtype=np.complex128))


def basis_state(n: int, x: int) -> StateVector:
    n = check_qubits(n)
    if not 0 <= x < (1 << n):
        raise IndexError(f"basis index {x} out of range for n={n}")
    buf = np.zeros(1 << n, dtype=np.complex128)
    buf[x] = 1.0
    return StateVector._adopt(n, buf)


def random_state(n: int, seed=None) -> StateVector:
    """Haar-random pure state: normalized vector of iid standard complex Gaussians.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts, including a
    ``Generator`` (which is then advanced).
    """
    n = check_qubits(n)
    rng = np.random.default_rng(seed)
    buf = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    buf /= np.sqrt(np.vdot(buf, buf).real)
    return StateVector._adopt(n, buf)


def product_state(single: StateVector, copies: int) -> StateVector:
    """``single`` tensored with itself ``copies`` times."""
    if single.n != 1:
        raise SizeError(f"product_state needs a one-qubit state, got n={single.n}")
    single.require_normalized()
    n = check_qubits(copies)
    c0, c1 = single.amplitudes
    buf = np.zeros(1 << n, dtype=np.complex128)
    fill_product_inplace(buf, [(c0, c1)] * n)
    return StateVector._adopt(n, buf)


# -- operations -------------------------------------------------------------


def apply_single_qubit_gate(state: StateVector, gate: SingleQubitGate, qubit: int) -> StateVector:
    state.require_normalized()
    if not isinstance(gate, SingleQubitGate):
        gate = SingleQubitGate(gate)
    if not 1 <= qubit <= state.n:
        raise IndexError(f"qubit {qubit} out of range 1..{state.n}")
    buf = state.copy_buffer()
    apply_gate_inplace(buf, state.n, gate.matrix, qubit)
    return StateVector._adopt(state.n, buf)


def apply_tensor_power(state: StateVector, gate: SingleQubitGate) -> StateVector:
    """Apply ``gate`` to every qubit."""
    state.require_normalized()
    buf = state.copy_buffer()
    for q in range(1, state.n + 1):
        apply_gate_inplace(buf, state.n, gate.matrix, q)
    return StateVector._adopt(state.n, buf)


def walsh_hadamard(state: StateVector) -> StateVector:
    """H^{(x)n} |psi> in O(N log N)."""
    state.require_normalized()
    buf = state.copy_buffer()
    fwht_inplace(buf, state.n)
    return StateVector._adopt(state.n, buf)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugating the first argument."""
    if a.n != b.n:
        raise SizeError(f"dimension mismatch: n={a.n} vs n={b.n}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))
