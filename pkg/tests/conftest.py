import functools

import numpy as np
import pytest

H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

_acceptance_lines: list[str] = []


def record_acceptance(label: str, passed: bool, detail: str = "") -> None:
    _acceptance_lines.append(f"[{'PASS' if passed else 'FAIL'}] {label}" + (f"  ({detail})" if detail else ""))


@pytest.fixture
def acceptance():
    return record_acceptance


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@functools.lru_cache(maxsize=None)
def dense_hadamard(n: int) -> np.ndarray:
    """H^{(x)n} by iterated Kronecker products, as an independent reference."""
    m = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        m = np.kron(m, H2)
    return m


def kron_all(vectors) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for v in vectors:
        out = np.kron(out, np.asarray(v, dtype=complex))
    return out


def gate_on_qubit_dense(gate: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """I x ... x G x ... x I with G at 1-based position ``qubit`` (MSB first)."""
    mats = [np.eye(2)] * n
    mats[qubit - 1] = gate
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out
