"""Linear Boolean oracles l(x) = z.x mod 2 and their phase action."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevector import SizeError, StateVector, ValidationError, check_qubits


@dataclass(frozen=True)
class LinearOracle:
    n: int
    z: int

    def __post_init__(self):
        n = check_qubits(self.n)
        if isinstance(self.z, bool) or not isinstance(self.z, (int, np.integer)):
            raise ValidationError(f"secret must be an integer index, got {self.z!r}")
        if not 0 <= self.z < (1 << n):
            raise ValidationError(f"secret {self.z} does not fit in {n} bits")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "z", int(self.z))

    @classmethod
    def from_bits(cls, bits: str) -> "LinearOracle":
        """Parse a secret written most-significant bit first, e.g. ``"101"``."""
        if not bits or set(bits) - {"0", "1"}:
            raise ValidationError(f"secret must be a nonempty 0/1 string, got {bits!r}")
        return cls(len(bits), int(bits, 2))

    @property
    def bits(self) -> str:
        return format(self.z, f"0{self.n}b")

    def __str__(self) -> str:
        return self.bits


def ell(oracle: LinearOracle, x: int) -> int:
    """l(x) = parity of popcount(z AND x)."""
    if not 0 <= x < (1 << oracle.n):
        raise IndexError(f"input {x} out of range for n={oracle.n}")
    return (oracle.z & x).bit_count() & 1


def ell_table(oracle: LinearOracle) -> np.ndarray:
    """l(x) for every x as a uint8 array of length 2**n."""
    x = np.arange(1 << oracle.n, dtype=np.uint64)
    return (np.bitwise_count(x & np.uint64(oracle.z)) & 1).astype(np.uint8)


def phase_flip_inplace(buf: np.ndarray, n: int, z: int) -> None:
    """Multiply a_x by (-1)^{z.x} in place.

    (-1)^{z.x} factorizes over the set bits of z, so each set bit negates the
    half of the vector where that qubit is 1. Negation is exact, which makes
    the oracle bit-exactly self-inverse.
    """
    for q in range(1, n + 1):
        if (z >> (n - q)) & 1:
            buf.reshape(1 << (q - 1), 2, 1 << (n - q))[:, 1, :] *= -1.0


def apply_phase_oracle(state: StateVector, oracle: LinearOracle) -> StateVector:
    state.require_normalized()
    if state.n != oracle.n:
        raise SizeError(f"oracle acts on n={oracle.n}, state has n={state.n}")
    buf = state.copy_buffer()
    phase_flip_inplace(buf, state.n, oracle.z)
    return StateVector._adopt(state.n, buf)
