import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbvcoherence.coherence import (
    CoherenceReport,
    coherence_fraction,
    coherence_fraction_ensemble,
    coherence_report,
    fidelity_pure,
    l1_coherence,
    operator_coherence_fraction,
)
from gbvcoherence.oracle import LinearOracle
from gbvcoherence.statevector import (
    HADAMARD,
    IDENTITY,
    PureStateEnsemble,
    SizeError,
    StateVector,
    ValidationError,
    basis_state,
    product_state,
    random_state,
    uniform_state,
    zero_state,
)
from gbvcoherence.sweep import LocalUnitaryParams, local_unitary


def brute_l1(ensemble: PureStateEnsemble) -> float:
    """Off-diagonal absolute sum over an explicitly built density matrix."""
    dim = 1 << ensemble.n
    rho = np.zeros((dim, dim), dtype=complex)
    for p, s in ensemble.members:
        rho += p * np.outer(s.amplitudes, s.amplitudes.conj())
    return sum(abs(rho[i, j]) for i in range(dim) for j in range(dim) if i != j)


def nonnegative_state(n, rng):
    a = rng.random(1 << n)
    return StateVector(n, a / np.linalg.norm(a))


class TestFidelity:
    def test_examples(self):
        s = random_state(3, 5)
        assert fidelity_pure(s, s) == pytest.approx(1.0, abs=1e-14)
        assert fidelity_pure(zero_state(2), basis_state(2, 3)) == 0
        assert fidelity_pure(uniform_state(2), zero_state(2)) == pytest.approx(abs(1 / math.sqrt(4)) ** 2, abs=1e-15)

    def test_symmetric(self):
        a, b = random_state(4, 1), random_state(4, 2)
        assert fidelity_pure(a, b) == pytest.approx(fidelity_pure(b, a), abs=1e-15)

    def test_mismatch(self):
        with pytest.raises(SizeError):
            fidelity_pure(zero_state(1), zero_state(2))


class TestCoherenceFraction:
    @pytest.mark.parametrize("n", [1, 2, 5, 9])
    def test_reference_states(self, n):
        assert coherence_fraction(uniform_state(n)) == pytest.approx(1.0, abs=1e-12)
        assert coherence_fraction(zero_state(n)) == pytest.approx(1 / 2**n, abs=1e-15)

    def test_product_example(self):
        c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
        psi = product_state(StateVector(1, [c, s]), 2)
        direct = abs(np.vdot(np.full(4, 0.5), psi.amplitudes)) ** 2
        closed = (1 + math.sin(math.pi / 4)) ** 2 / 4
        assert direct == pytest.approx(closed, abs=1e-14)
        assert coherence_fraction(psi) == pytest.approx(0.7285533906, abs=1e-10)
        assert coherence_fraction(psi) == pytest.approx(closed, abs=1e-14)

    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_basis_floor_exact(self, n):
        for x in range(1 << n):
            assert coherence_fraction(basis_state(n, x)) == 1 / 2**n

    @settings(max_examples=50, deadline=None)
    @given(n=st.integers(1, 10), seed=st.integers(0, 2**32 - 1))
    def test_range(self, n, seed):
        assert 0.0 <= coherence_fraction(random_state(n, seed)) <= 1.0 + 1e-12

    def test_report(self):
        rep = coherence_report(uniform_state(3), "eta")
        assert rep.subject == "eta" and rep.value == pytest.approx(1.0)
        with pytest.raises(ValidationError):
            CoherenceReport(1.5, "bad")


class TestEnsemble:
    def test_single_member(self):
        psi = random_state(4, 9)
        assert coherence_fraction_ensemble(PureStateEnsemble.pure(psi)) == coherence_fraction(psi)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_uniform_basis_mixture(self, n):
        dim = 1 << n
        ens = PureStateEnsemble(tuple((1 / dim, basis_state(n, x)) for x in range(dim)))
        assert coherence_fraction_ensemble(ens) == pytest.approx(sum(1 / dim * 1 / dim for _ in range(dim)), abs=1e-15)
        assert coherence_fraction_ensemble(ens) == pytest.approx(1 / dim, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_eta_zero_mixture(self, n):
        ens = PureStateEnsemble(((0.5, uniform_state(n)), (0.5, zero_state(n))))
        assert coherence_fraction_ensemble(ens) == pytest.approx(0.5 + 0.5 / 2**n, abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(p=st.floats(0, 1), seed=st.integers(0, 2**32 - 1))
    def test_linearity(self, p, seed):
        a, b = random_state(4, [seed, 0]), random_state(4, [seed, 1])
        ens = PureStateEnsemble(((p, a), (1 - p, b)))
        expected = p * coherence_fraction(a) + (1 - p) * coherence_fraction(b)
        assert coherence_fraction_ensemble(ens) == pytest.approx(expected, abs=1e-12)


class TestOperatorCoherence:
    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_hadamard_and_identity(self, n):
        assert operator_coherence_fraction("hadamard", zero_state(n)) == pytest.approx(1.0, abs=1e-12)
        assert operator_coherence_fraction(HADAMARD, zero_state(n)) == pytest.approx(1.0, abs=1e-12)
        assert operator_coherence_fraction(IDENTITY, uniform_state(n)) == pytest.approx(1.0, abs=1e-12)

    def test_hadamard_like_local_unitary(self):
        g = local_unitary(LocalUnitaryParams(math.pi / 4, math.pi / 4, math.pi / 4))
        assert operator_coherence_fraction(g, zero_state(2)) == pytest.approx(1.0, abs=1e-12)

    def test_oracle(self):
        # l(x) = x_1 for z = 10: half the amplitudes flip, so |eta> loses all overlap
        assert operator_coherence_fraction(LinearOracle(2, 0b10), uniform_state(2)) == pytest.approx(0.0, abs=1e-15)

    def test_unsupported(self):
        with pytest.raises(ValidationError):
            operator_coherence_fraction(np.eye(2), zero_state(1))
        with pytest.raises(ValidationError):
            operator_coherence_fraction("fourier", zero_state(1))


class TestL1:
    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_reference_states(self, n):
        assert l1_coherence(PureStateEnsemble.pure(zero_state(n))) == 0
        dim = 1 << n
        # every entry is 1/N; N^2 - N of them off the diagonal
        assert l1_coherence(PureStateEnsemble.pure(uniform_state(n))) == pytest.approx((dim * dim - dim) / dim, abs=1e-10)
        assert l1_coherence(PureStateEnsemble.pure(uniform_state(n))) == pytest.approx(dim - 1, abs=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 4, 6])
    def test_matches_brute_force(self, n):
        ens = PureStateEnsemble(((0.3, random_state(n, 1)), (0.7, random_state(n, 2))))
        assert l1_coherence(ens, block_rows=3) == pytest.approx(brute_l1(ens), abs=1e-10)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_nonnegative_relation(self, n):
        rng = np.random.default_rng(n)
        for _ in range(5):
            psi = nonnegative_state(n, rng)
            ens = PureStateEnsemble.pure(psi)
            assert (1 << n) * coherence_fraction(psi) - 1 == pytest.approx(l1_coherence(ens), abs=1e-10)

    def test_nonnegative_mixture(self):
        rng = np.random.default_rng(0)
        ens = PureStateEnsemble(((0.25, nonnegative_state(3, rng)), (0.75, nonnegative_state(3, rng))))
        assert 8 * coherence_fraction_ensemble(ens) - 1 == pytest.approx(brute_l1(ens), abs=1e-10)

    def test_too_large(self):
        with pytest.raises(SizeError):
            l1_coherence(PureStateEnsemble.pure(zero_state(13)))
