"""
Unit tests for the sampling estimators.
"""
from unittest.mock import patch

import numpy as np
import pytest

from latcirc.core.config import settings
from latcirc.core.exceptions import BadConfig, NonUnitaryCircuit
from latcirc.models.circuit import BasisState, Circuit, Gate, ProductState, StateVector
from latcirc.services import qcirc
from latcirc.services.estimate import (
    EstimatorConfig,
    auto_shots,
    dqc1_trace_estimate,
    hadamard_test,
    hadamard_test_probabilities,
    outcome_probabilities,
    preparation_unitary,
)
from latcirc.services.verification import (
    CALIBRATION_RUNS,
    bias_in_standard_errors,
    estimator_suite,
    failure_rate,
)


def haar_unitary(rng, dimension):
    z = rng.normal(size=(dimension, dimension)) + 1j * rng.normal(size=(dimension, dimension))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestEstimatorConfig:
    """Test cases for the sampling budget."""

    def test_auto_shots(self):
        """Test the Hoeffding count ceil(2 ln(4 / delta) / epsilon^2)."""
        assert auto_shots(0.05, 0.01) == 4794
        assert EstimatorConfig(epsilon=0.05, delta=0.01).shot_count == 4794

    def test_explicit_shots(self):
        """Test that an explicit shot count wins."""
        assert EstimatorConfig(shots=10).shot_count == 10

    def test_defaults(self):
        """Test that unset fields come from settings."""
        cfg = EstimatorConfig()
        assert cfg.epsilon == settings.DEFAULT_ESTIMATOR_EPSILON
        assert cfg.delta == settings.DEFAULT_ESTIMATOR_DELTA
        assert cfg.seed == settings.DEFAULT_SEED

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"epsilon": 0.0},
            {"epsilon": 2.5},
            {"delta": 0.0},
            {"delta": 1.0},
            {"shots": 0},
            {"seed": -1},
        ],
    )
    def test_invalid(self, kwargs):
        """Test that out-of-range budgets raise BadConfig."""
        with pytest.raises(BadConfig):
            EstimatorConfig(**kwargs)


class TestHadamardTest:
    """Test cases for Hadamard-test sampling."""

    def test_within_epsilon(self, bell_circuit):
        """Test <00| CZ H |00> = 1 / sqrt(2) to within epsilon."""
        cfg = EstimatorConfig(epsilon=0.05, delta=1e-3, seed=3)
        zero = BasisState((0, 0))
        estimate = hadamard_test(bell_circuit, zero, zero, cfg)
        assert abs(estimate.value.real - 1 / np.sqrt(2)) <= cfg.epsilon
        assert abs(estimate.value.imag) <= cfg.epsilon
        assert estimate.shots_used == cfg.shot_count

    def test_seed_is_reproducible(self, bell_circuit):
        """Test that equal seeds give equal estimates."""
        plus = ProductState.plus(2, 2)
        cfg = EstimatorConfig(shots=2000, seed=11)
        first = hadamard_test(bell_circuit, plus, plus, cfg)
        second = hadamard_test(bell_circuit, plus, plus, cfg)
        assert first.value == second.value

    def test_thread_count_does_not_change_result(self, bell_circuit):
        """Test that per-block streams make results independent of the pool size."""
        plus = ProductState.plus(2, 2)
        cfg = EstimatorConfig(shots=5000, seed=5)
        with patch.object(settings, "SHOT_BLOCK", 1000):
            with patch.object(settings, "LATCIRC_THREADS", 1):
                serial = hadamard_test(bell_circuit, plus, plus, cfg)
            with patch.object(settings, "LATCIRC_THREADS", 4):
                threaded = hadamard_test(bell_circuit, plus, plus, cfg)
        assert serial.p0_re == threaded.p0_re
        assert serial.p0_im == threaded.p0_im

    def test_single_shot(self, bell_circuit):
        """Test that one shot gives +-1 in each quadrature."""
        zero = BasisState((0, 0))
        estimate = hadamard_test(bell_circuit, zero, zero, EstimatorConfig(shots=1))
        assert abs(estimate.value.real) == 1.0
        assert abs(estimate.value.imag) == 1.0

    def test_non_unitary(self):
        """Test that non-unitary gates are refused."""
        circuit = Circuit(1, 2, (Gate(2 * np.eye(2), (0,)),))
        with pytest.raises(NonUnitaryCircuit):
            hadamard_test(circuit, BasisState((0,)), BasisState((0,)))

    def test_unnormalized_state(self, bell_circuit):
        """Test that states must be normalized."""
        state = StateVector(np.array([1, 1, 0, 0]), 2, 2)
        with pytest.raises(BadConfig):
            hadamard_test(bell_circuit, state, BasisState((0, 0)))

    def test_to_dict(self, bell_circuit):
        """Test the reported fields."""
        zero = BasisState((0, 0))
        report = hadamard_test(bell_circuit, zero, zero, EstimatorConfig(shots=100)).to_dict()
        assert set(report) == {
            "value", "epsilon", "delta", "shots_used", "p0_re", "p0_im", "seed", "rng"
        }
        assert report["rng"] == "numpy.random.Philox"


class TestControlledCircuit:
    """Test cases for the explicit ancilla-controlled construction."""

    def test_probabilities_match(self, rng):
        """Test explicit and closed-form outcome probabilities."""
        circuit = Circuit(2, 2, (Gate(haar_unitary(rng, 4), (0, 1), "U"),))
        plus, zero = ProductState.plus(2, 2), BasisState((1, 0))
        c = qcirc.matrix_element(circuit, plus, zero)
        explicit = hadamard_test_probabilities(circuit, plus, zero)
        assert np.allclose(explicit, outcome_probabilities(c), atol=1e-12)

    def test_preparation_unitary(self, rng):
        """Test that the first column is the prepared state."""
        vector = rng.normal(size=8) + 1j * rng.normal(size=8)
        vector /= np.linalg.norm(vector)
        unitary = preparation_unitary(vector)
        assert np.allclose(unitary[:, 0], vector)
        assert np.allclose(unitary.conj().T @ unitary, np.eye(8))


class TestTraceEstimate:
    """Test cases for the one-clean-qubit trace estimator."""

    def test_normalized_trace(self, bell_circuit):
        """Test Tr(CZ (H x I)) / 4 to within epsilon."""
        cfg = EstimatorConfig(epsilon=0.05, delta=1e-3, seed=2)
        estimate = dqc1_trace_estimate(bell_circuit, cfg)
        expected = np.sqrt(2) / 4
        assert abs(estimate.value.real - expected) <= cfg.epsilon
        assert abs(estimate.value.imag) <= cfg.epsilon

    def test_non_unitary(self):
        """Test that a non-unit prefactor is refused."""
        circuit = Circuit(1, 2, prefactor=2.0)
        with pytest.raises(NonUnitaryCircuit):
            dqc1_trace_estimate(circuit)


class TestCalibration:
    """Failure rates and bias over many seeds."""

    RUNS = 200
    EPSILON = 0.1
    DELTA = 0.05

    def _configs(self):
        return [
            EstimatorConfig(epsilon=self.EPSILON, delta=self.DELTA, seed=seed)
            for seed in range(self.RUNS)
        ]

    def test_hadamard_test_over_seeds(self, bell_circuit):
        """Test the miss rate and the mean of 200 Hadamard-test runs."""
        zero = BasisState((0, 0))
        exact = complex(1 / np.sqrt(2))
        estimates = [hadamard_test(bell_circuit, zero, zero, cfg) for cfg in self._configs()]
        assert failure_rate(estimates, exact) <= 2 * self.DELTA
        values = [e.value for e in estimates]
        assert bias_in_standard_errors(values, exact) < 4.0
        assert abs(np.mean(values) - exact) < self.EPSILON / 4

    def test_dqc1_over_seeds(self, bell_circuit):
        """Test the miss rate and the mean of 200 trace estimates."""
        exact = complex(np.sqrt(2) / 4)
        estimates = [dqc1_trace_estimate(bell_circuit, cfg) for cfg in self._configs()]
        assert failure_rate(estimates, exact) <= 2 * self.DELTA
        assert bias_in_standard_errors([e.value for e in estimates], exact) < 4.0

    def test_suite_calibration(self):
        """Test the calibration checks of the estimator self-check suite."""
        report = estimator_suite(seed=1, runs=CALIBRATION_RUNS)
        assert report.passed, [c.to_dict() for c in report.checks if not c.passed]
