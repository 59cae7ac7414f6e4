"""Generalized Bernstein-Vazirani pipeline and coherence-fraction dynamics.

The ancilla of the textbook circuit is not simulated: with the ancilla in
|-> the oracle acts as a pure phase on the first register.

Stages of a run::

    input          |0^n>
    post_unitary   U |0^n>
    post_oracle    O_l U |0^n>
    post_hadamard  H^n O_l U |0^n>

``cf_trace["post_hadamard"]`` is the coherence fraction of the z-projected
branch of the final state, ``|a_z|^2 / N``; the full final state's value is
kept separately as ``cf_full_final``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .coherence import coherence_fraction, eta_overlap_sq, fidelity_pure
from .oracle import LinearOracle, apply_phase_oracle, ell, ell_table, phase_flip_inplace
from .statevector import (
    SingleQubitGate,
    SizeError,
    StateVector,
    ValidationError,
    check_qubits,
    fill_product_inplace,
    fwht_inplace,
    random_state,
    uniform_state,
)

STAGES = ("input", "post_unitary", "post_oracle", "post_hadamard")

THEOREM_TOLERANCE = {1: 1e-10, 2: 1e-10, 3: 1e-10, 4: 1e-12}


@dataclass
class GbvRun:
    oracle: LinearOracle
    cf_trace: dict[str, float]
    success_probability: float
    cf_full_final: float
    prep: str
    stages: dict[str, StateVector] | None = None

    @property
    def n(self) -> int:
        return self.oracle.n

    def stage(self, label: str) -> StateVector:
        if self.stages is None:
            raise ValueError("run was executed with keep_states=False")
        return self.stages[label]


def _as_oracle(n: int, z) -> LinearOracle:
    if isinstance(z, LinearOracle):
        oracle = z
    elif isinstance(z, str):
        oracle = LinearOracle.from_bits(z)
    else:
        oracle = LinearOracle(n, z)
    if oracle.n != n:
        raise SizeError(f"secret has {oracle.n} bits but n={n}")
    return oracle


def _prepare_inplace(buf: np.ndarray, n: int, prep) -> str:
    """Overwrite ``buf`` (holding |0^n>) with U|0^n>; returns a prep label."""
    if isinstance(prep, str):
        key = prep.lower()
        if key == "hadamard":
            fwht_inplace(buf, n)
            return "hadamard"
        if key == "identity":
            return "identity"
        raise ValidationError(f"unknown preparation {prep!r}")
    if isinstance(prep, StateVector):
        prep.require_normalized()
        if prep.n != n:
            raise SizeError(f"injected state has n={prep.n}, expected {n}")
        buf[:] = prep.amplitudes
        return "state"
    if isinstance(prep, SingleQubitGate):
        fill_product_inplace(buf, [prep.first_column] * n)
        return f"tensor-power:{prep.name or 'U'}"
    if isinstance(prep, Sequence) and prep and all(isinstance(g, SingleQubitGate) for g in prep):
        if len(prep) != n:
            raise ValidationError(f"gate list has {len(prep)} gates for {n} qubits")
        # U is a product of local gates and the input is |0^n>, so U|0^n> is
        # the product of each gate's first column.
        fill_product_inplace(buf, [g.first_column for g in prep])
        return "gate-list"
    raise ValidationError(f"invalid preparation descriptor {prep!r}")


def run_gbv(n: int, z, prep="hadamard", keep_states: bool = True) -> GbvRun:
    """Execute the four GBV stages for secret ``z`` and preparation ``prep``.

    ``prep`` is ``"hadamard"``, ``"identity"``, a :class:`SingleQubitGate`
    applied to every qubit, a list of ``n`` gates (qubit 1 first), or a
    normalized :class:`StateVector` injected as U|0^n>.

    With ``keep_states=False`` the whole run uses one buffer of ``2**n``
    amplitudes and ``stages`` is left as ``None``.
    """
    n = check_qubits(n)
    oracle = _as_oracle(n, z)
    stages: dict[str, StateVector] | None = {} if keep_states else None
    cf: dict[str, float] = {}

    buf = np.zeros(1 << n, dtype=np.complex128)
    buf[0] = 1.0
    cf["input"] = eta_overlap_sq(buf)
    if stages is not None:
        stages["input"] = StateVector._adopt(n, buf.copy())

    label = _prepare_inplace(buf, n, prep)
    cf["post_unitary"] = eta_overlap_sq(buf)
    if stages is not None:
        stages["post_unitary"] = StateVector._adopt(n, buf.copy())

    phase_flip_inplace(buf, n, oracle.z)
    cf["post_oracle"] = eta_overlap_sq(buf)
    if stages is not None:
        stages["post_oracle"] = StateVector._adopt(n, buf.copy())

    fwht_inplace(buf, n)
    amp = buf[oracle.z]
    p_succ = float(amp.real * amp.real + amp.imag * amp.imag)
    # <eta| Pi_z rho Pi_z |eta> = |<eta|z>|^2 |a_z|^2
    cf["post_hadamard"] = p_succ / (1 << n)
    cf_full = eta_overlap_sq(buf)
    if stages is not None:
        stages["post_hadamard"] = StateVector._adopt(n, buf)

    return GbvRun(
        oracle=oracle,
        cf_trace=cf,
        success_probability=p_succ,
        cf_full_final=cf_full,
        prep=label,
        stages=stages,
    )


def success_probability_direct(run: GbvRun) -> float:
    """|<z|final>|^2 read from the stored final state."""
    a = run.stage("post_hadamard").amplitudes[run.oracle.z]
    return float(abs(a) ** 2)


def oracle_cross_term(state: StateVector, oracle: LinearOracle) -> float:
    """(4/N) Re(A conj(B)) with A, B the amplitude sums over l(x)=0 and l(x)=1.

    This is the amount by which the oracle lowers the coherence fraction.
    """
    if state.n != oracle.n:
        raise SizeError(f"oracle acts on n={oracle.n}, state has n={state.n}")
    a = state.amplitudes
    odd = ell_table(oracle).astype(bool)
    total_b = a[odd].sum()
    total_a = a[~odd].sum()
    return 4.0 / state.dim * float((total_a * np.conj(total_b)).real)


def project_onto_basis(state: StateVector, x: int) -> StateVector:
    """Pi_x |psi>: keeps only the amplitude at ``x``; the result is subnormalized."""
    buf = np.zeros(state.dim, dtype=np.complex128)
    buf[x] = state.amplitudes[x]
    return StateVector(state.n, buf, subnormalized=True)


def projected_final_cf(run: GbvRun) -> float:
    """<eta| Pi_z rho_final Pi_z |eta>, evaluated on the explicit projected branch."""
    branch = project_onto_basis(run.stage("post_hadamard"), run.oracle.z)
    eta = uniform_state(run.n)
    return abs(np.vdot(eta.amplitudes, branch.amplitudes)) ** 2


@dataclass(frozen=True)
class MeasurementHistogram:
    n: int
    shots: int
    counts: dict[str, int]
    seed: object

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValidationError("histogram counts do not add up to shots")

    def frequency(self, outcome) -> float:
        key = outcome if isinstance(outcome, str) else format(outcome, f"0{self.n}b")
        return self.counts.get(key, 0) / self.shots


def sample_measurement(state: StateVector, shots: int, seed=0) -> MeasurementHistogram:
    """Draw ``shots`` independent computational-basis outcomes with probability |a_x|^2."""
    state.require_normalized()
    if shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots}")
    p = state.probabilities()
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(state.dim, size=shots, p=p)
    values, counts = np.unique(draws, return_counts=True)
    hist = {format(int(v), f"0{state.n}b"): int(c) for v, c in zip(values, counts)}
    return MeasurementHistogram(state.n, shots, hist, seed)


def classical_baseline(oracle: LinearOracle) -> tuple[int, int]:
    """Recover z with one classical query per bit; returns ``(z, queries)``."""
    queries = 0

    def query(x: int) -> int:
        nonlocal queries
        queries += 1
        return ell(oracle, x)

    return _recover_secret(query, oracle.n), queries


def _recover_secret(query: Callable[[int], int], n: int) -> int:
    z = 0
    for k in range(n):
        # probe with only bit x_{k+1} set
        z = (z << 1) | query(1 << (n - 1 - k))
    return z


# -- theorem verification ---------------------------------------------------


@dataclass
class VerificationReport:
    theorem: int
    n_values: list[int]
    trials: int
    evaluations: int
    max_deviation: float
    tolerance: float
    ordering_violations: int = 0
    worst_case: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance and self.ordering_violations == 0

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "n_values": self.n_values,
            "trials": self.trials,
            "evaluations": self.evaluations,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "ordering_violations": self.ordering_violations,
            "passed": self.passed,
        }


def trial_rng(seed: int, n: int, trial: int) -> np.random.Generator:
    """Independent stream per (seed, n, trial) so results do not depend on loop order."""
    return np.random.default_rng([seed, n, trial])


def _theorem_deviations(which: int, psi: StateVector, z: int) -> tuple[float, bool]:
    """|lhs - rhs| for one (state, secret) pair and whether the orderings hold."""
    n = psi.n
    run = run_gbv(n, z, prep=psi)
    if which == 1:
        # pipeline amplitude vs direct overlap with |eta>
        return abs(run.success_probability - fidelity_pure(uniform_state(n), psi)), True
    if which == 2:
        return abs(run.cf_trace["post_unitary"] - success_probability_direct(run)), True
    if which == 3:
        lhs = coherence_fraction(run.stage("post_oracle")) + oracle_cross_term(
            run.stage("post_unitary"), run.oracle
        )
        return abs(lhs - coherence_fraction(run.stage("post_unitary"))), True
    if which == 4:
        proj = projected_final_cf(run)
        tol = THEOREM_TOLERANCE[4]
        ordered = proj <= 1.0 / psi.dim + tol and proj <= run.cf_trace["post_unitary"] + tol
        return abs(proj - run.success_probability / psi.dim), ordered
    raise ValidationError(f"unknown theorem {which!r}; expected 1, 2, 3 or 4")


def verify_theorem(
    which: int,
    n_range: Sequence[int],
    trials: int,
    seed: int = 0,
    z: int | None = None,
    tolerance: float | None = None,
) -> VerificationReport:
    """Check one theorem on Haar-random initial states.

    Each trial draws a state and a uniform secret in ``[0, 2**n)`` (or uses
    the fixed ``z``). Theorem 3 is additionally evaluated at ``z = 0`` for
    every state, which exercises the empty ``l(x)=1`` branch.
    """
    if which not in THEOREM_TOLERANCE:
        raise ValidationError(f"unknown theorem {which!r}; expected 1, 2, 3 or 4")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    tol = THEOREM_TOLERANCE[which] if tolerance is None else tolerance
    report = VerificationReport(which, list(n_range), trials, 0, 0.0, tol)
    for n in n_range:
        n = check_qubits(n)
        for t in range(trials):
            rng = trial_rng(seed, n, t)
            psi = random_state(n, rng)
            secret = int(rng.integers(0, 1 << n)) if z is None else z
            secrets = [secret, 0] if which == 3 and secret != 0 else [secret]
            for s in secrets:
                dev, ordered = _theorem_deviations(which, psi, s)
                report.evaluations += 1
                if not ordered:
                    report.ordering_violations += 1
                if dev > report.max_deviation or not report.worst_case:
                    report.max_deviation = max(dev, report.max_deviation)
                    report.worst_case = {"n": n, "trial": t, "z": s, "deviation": dev}
    return report

