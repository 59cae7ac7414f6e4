"""Local-unitary family U(alpha, beta, theta) and coherence-fraction sweeps.

For the product preparation U(alpha, beta, theta)^n and the parity oracle
(z = 1...1) every stage has a closed form in c = sin(2 theta) cos(alpha - beta):

    input          1 / 2^n
    post_unitary   ((1 + c) / 2)^n
    post_oracle    ((1 - c) / 2)^n
    post_hadamard  ((1 + c) / 2)^n / 2^n
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gbv import STAGES, run_gbv
from .oracle import LinearOracle
from .statevector import SingleQubitGate, StateVector, ValidationError, check_qubits

CLOSED_FORM_TOL = 1e-10


class ClosedFormMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class LocalUnitaryParams:
    alpha: float
    beta: float
    theta: float

    def mixing(self) -> float:
        """sin(2 theta) cos(alpha - beta)."""
        return math.sin(2.0 * self.theta) * math.cos(self.alpha - self.beta)


def local_unitary(params: LocalUnitaryParams) -> SingleQubitGate:
    """[[e^{ia} cos t, e^{-ib} sin t], [e^{ib} sin t, -e^{-ia} cos t]]."""
    a, b, t = params.alpha, params.beta, params.theta
    if not 0.0 <= t <= math.pi / 2:
        warnings.warn(f"theta={t} outside [0, pi/2]", stacklevel=2)
    c, s = math.cos(t), math.sin(t)
    m = np.array(
        [
            [np.exp(1j * a) * c, np.exp(-1j * b) * s],
            [np.exp(1j * b) * s, -np.exp(-1j * a) * c],
        ]
    )
    return SingleQubitGate(m, name=f"U({a!r},{b!r},{t!r})")


def example_initial_state(params: LocalUnitaryParams, n: int) -> StateVector:
    """|phi>^n via a_x = (e^{ia} cos t)^{n-H(x)} (e^{ib} sin t)^{H(x)}."""
    n = check_qubits(n)
    c0 = np.exp(1j * params.alpha) * math.cos(params.theta)
    c1 = np.exp(1j * params.beta) * math.sin(params.theta)
    weight = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)
    amps = np.power(c0, n - weight) * np.power(c1, weight)
    return StateVector(n, amps)


def closed_form_cf(stage: str, params: LocalUnitaryParams, n: int) -> float:
    """Closed-form coherence fraction at ``stage`` under the parity oracle."""
    n = check_qubits(n)
    c = params.mixing()
    if stage == "input":
        return 0.5**n
    if stage == "post_unitary":
        return ((1.0 + c) / 2.0) ** n
    if stage == "post_oracle":
        return ((1.0 - c) / 2.0) ** n
    if stage == "post_hadamard":
        return ((1.0 + c) / 2.0) ** n * 0.5**n
    raise ValidationError(f"unknown stage {stage!r}; expected one of {STAGES}")


def parity_oracle(n: int) -> LinearOracle:
    """z = 1^n, so l(x) is the parity of the Hamming weight of x."""
    n = check_qubits(n)
    return LinearOracle(n, (1 << n) - 1)


@dataclass(frozen=True)
class SweepRow:
    """One grid point. Each stage is a ``(closed_form, simulated)`` pair.

    ``closed_form`` is ``None`` for the post-oracle stage when the oracle is
    not the parity oracle.
    """

    params: LocalUnitaryParams
    n: int
    cf_input: tuple[float | None, float]
    cf_post_unitary: tuple[float | None, float]
    cf_post_oracle: tuple[float | None, float]
    cf_post_hadamard: tuple[float | None, float]
    p_succ: float
    z: str

    def stage(self, label: str) -> tuple[float | None, float]:
        return getattr(self, "cf_" + label)

    def max_deviation(self) -> float:
        return max(
            (abs(c - s) for c, s in (self.stage(k) for k in STAGES) if c is not None),
            default=0.0,
        )


def dynamics_trace(params: LocalUnitaryParams, n: int, oracle: LinearOracle | None = None) -> SweepRow:
    """Simulate the pipeline for U(params)^n and pair every stage with its closed form."""
    n = check_qubits(n)
    parity = parity_oracle(n)
    oracle = parity if oracle is None else oracle
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        gate = local_unitary(params)
    run = run_gbv(n, oracle, prep=gate, keep_states=False)
    pairs = {}
    for label in STAGES:
        closed = closed_form_cf(label, params, n)
        if label == "post_oracle" and oracle != parity:
            closed = None
        pairs[label] = (closed, run.cf_trace[label])
    row = SweepRow(
        params=params,
        n=n,
        cf_input=pairs["input"],
        cf_post_unitary=pairs["post_unitary"],
        cf_post_oracle=pairs["post_oracle"],
        cf_post_hadamard=pairs["post_hadamard"],
        p_succ=run.success_probability,
        z=oracle.bits,
    )
    dev = row.max_deviation()
    if dev > CLOSED_FORM_TOL:
        raise ClosedFormMismatch(f"closed form and simulation differ by {dev:.3e} at {params}, n={n}")
    return row


def sweep(
    alphas: Sequence[float],
    betas: Sequence[float],
    thetas: Sequence[float],
    ns: Iterable[int],
) -> list[SweepRow]:
    """Evaluate every grid point; rows come out in (n, alpha, beta, theta) order."""
    ns = list(ns)
    if not (alphas and betas and thetas and ns):
        raise ValidationError("sweep grid must be nonempty on every axis")
    return [
        dynamics_trace(LocalUnitaryParams(a, b, t), n)
        for n, a, b, t in itertools.product(ns, alphas, betas, thetas)
    ]
