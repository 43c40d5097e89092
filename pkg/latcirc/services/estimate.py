"""
Sampling simulation of the Hadamard test and the one-clean-qubit trace estimator.

Shots are drawn from exactly computed outcome probabilities. Each block of
SHOT_BLOCK shots has its own Philox stream spawned from the master seed, so
results do not depend on the number of worker threads.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from latcirc.core.config import settings
from latcirc.core.exceptions import BadConfig, NonUnitaryCircuit
from latcirc.models.circuit import Circuit, StateSpec, as_state
from latcirc.services import qcirc

logger = logging.getLogger(__name__)

RNG_NAME = "numpy.random.Philox"
NORM_TOLERANCE = 1e-10
PHASE_GATE = np.diag([1.0, 1j])
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def auto_shots(epsilon: float, delta: float) -> int:
    """Hoeffding shot count per quadrature: ceil(2 ln(4 / delta) / epsilon^2)."""
    return math.ceil(2 * math.log(4 / delta) / epsilon ** 2)


@dataclass(frozen=True)
class EstimatorConfig:
    """Sampling budget. `shots` defaults to the Hoeffding count for (epsilon, delta)."""

    shots: Optional[int] = None
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        epsilon = settings.DEFAULT_ESTIMATOR_EPSILON if self.epsilon is None else self.epsilon
        delta = settings.DEFAULT_ESTIMATOR_DELTA if self.delta is None else self.delta
        seed = settings.DEFAULT_SEED if self.seed is None else self.seed
        if not 0 < epsilon <= 2:
            raise BadConfig(f"epsilon must lie in (0, 2], got {epsilon}")
        if not 0 < delta < 1:
            raise BadConfig(f"delta must lie in (0, 1), got {delta}")
        if self.shots is not None and self.shots < 1:
            raise BadConfig(f"shots must be positive, got {self.shots}")
        if seed < 0:
            raise BadConfig(f"seed must be non-negative, got {seed}")
        object.__setattr__(self, "epsilon", float(epsilon))
        object.__setattr__(self, "delta", float(delta))
        object.__setattr__(self, "seed", int(seed))

    @property
    def shot_count(self) -> int:
        return self.shots if self.shots is not None else auto_shots(self.epsilon, self.delta)


@dataclass(frozen=True)
class Estimate:
    """Sampled value (2 p0_re - 1) + i (1 - 2 p0_im)."""

    value: complex
    epsilon: float
    delta: float
    shots_used: int
    p0_re: float
    p0_im: float
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": [self.value.real, self.value.imag],
            "epsilon": self.epsilon,
            "delta": self.delta,
            "shots_used": self.shots_used,
            "p0_re": self.p0_re,
            "p0_im": self.p0_im,
            "seed": self.seed,
            "rng": RNG_NAME,
        }


def _check_unitary(circuit: Circuit) -> None:
    if not circuit.is_unitary(settings.UNITARY_TOLERANCE):
        raise NonUnitaryCircuit(
            f"Estimators need a unitary circuit; {len(circuit)} gates failed the "
            f"{settings.UNITARY_TOLERANCE} check"
        )


def _normalized(state: StateSpec, circuit: Circuit, name: str) -> np.ndarray:
    vector = as_state(state, circuit.width, circuit.q).amplitudes
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise BadConfig(f"The {name} state must be normalized, got norm {norm}")
    return vector


def _blocks(shots: int) -> List[int]:
    size = max(1, settings.SHOT_BLOCK)
    return [min(size, shots - start) for start in range(0, shots, size)]


def _count_zeros(
    sampler: Callable[[np.random.Generator, int], int], shots: int, seed: np.random.SeedSequence
) -> int:
    """Total count of outcome 0 over independently seeded shot blocks."""
    sizes = _blocks(shots)
    streams = seed.spawn(len(sizes))
    work = list(zip(streams, sizes))

    def run(item) -> int:
        stream, size = item
        return sampler(np.random.Generator(np.random.Philox(stream)), size)

    pool_size = settings.worker_count(len(work))
    if pool_size == 1:
        counts = [run(item) for item in work]
    else:
        with ThreadPoolExecutor(max_workers=pool_size) as executor:
            counts = list(executor.map(run, work))
    return int(sum(counts))


def _bernoulli(p0: float) -> Callable[[np.random.Generator, int], int]:
    probability = float(np.clip(p0, 0.0, 1.0))
    return lambda rng, size: int(rng.binomial(size, probability))


def _estimate(samplers: Tuple[Callable, Callable], cfg: EstimatorConfig) -> Estimate:
    shots = cfg.shot_count
    re_seed, im_seed = np.random.SeedSequence(cfg.seed).spawn(2)
    p0_re = _count_zeros(samplers[0], shots, re_seed) / shots
    p0_im = _count_zeros(samplers[1], shots, im_seed) / shots
    value = complex(2 * p0_re - 1, 1 - 2 * p0_im)
    return Estimate(value, cfg.epsilon, cfg.delta, shots, p0_re, p0_im, cfg.seed)


def outcome_probabilities(c: complex) -> Tuple[float, float]:
    """p0 of the real and imaginary Hadamard-test variants for matrix element c."""
    return (1 + c.real) / 2, (1 - c.imag) / 2


def hadamard_test(
    circuit: Circuit,
    left: StateSpec,
    right: StateSpec,
    cfg: Optional[EstimatorConfig] = None,
) -> Estimate:
    """Estimate <left| U |right> by simulated Hadamard-test sampling.

    Args:
        circuit: unitary circuit U
        left: normalized output state
        right: normalized input state
        cfg: sampling budget

    Returns:
        Estimate with |value.real - Re c| and |value.imag - Im c| at most
        epsilon with probability at least 1 - delta

    Raises:
        NonUnitaryCircuit: if a gate is not unitary
        BadConfig: if the configuration or the states are invalid
    """
    cfg = cfg or EstimatorConfig()
    _check_unitary(circuit)
    _normalized(left, circuit, "left")
    _normalized(right, circuit, "right")
    c = qcirc.matrix_element(circuit, left, right)
    p0_re, p0_im = outcome_probabilities(c)
    estimate = _estimate((_bernoulli(p0_re), _bernoulli(p0_im)), cfg)
    logger.info(
        f"Hadamard test: {estimate.value:.6f} from {estimate.shots_used} shots per quadrature"
    )
    return estimate


def _trace_sampler(p0: np.ndarray) -> Callable[[np.random.Generator, int], int]:
    def sample(rng: np.random.Generator, size: int) -> int:
        states = rng.integers(0, p0.size, size=size)
        return int(np.count_nonzero(rng.random(size) < p0[states]))

    return sample


def dqc1_trace_estimate(circuit: Circuit, cfg: Optional[EstimatorConfig] = None) -> Estimate:
    """Estimate Tr(U) / q^n: every shot draws a uniform basis state s and Hadamard-tests <s|U|s>.

    Raises:
        NonUnitaryCircuit: if a gate is not unitary
        BadConfig: if the configuration is invalid
    """
    cfg = cfg or EstimatorConfig()
    _check_unitary(circuit)
    diagonal = np.diag(qcirc.circuit_matrix(circuit))
    p0_re = np.clip((1 + diagonal.real) / 2, 0.0, 1.0)
    p0_im = np.clip((1 - diagonal.imag) / 2, 0.0, 1.0)
    estimate = _estimate((_trace_sampler(p0_re), _trace_sampler(p0_im)), cfg)
    logger.info(
        f"DQC1 trace: {estimate.value:.6f} from {estimate.shots_used} shots per quadrature"
    )
    return estimate


def preparation_unitary(vector: np.ndarray) -> np.ndarray:
    """A unitary whose first column is the normalized `vector`."""
    vector = np.asarray(vector, dtype=complex)
    dimension = vector.size
    q, r = np.linalg.qr(np.column_stack([vector, np.eye(dimension, dtype=complex)]))
    q[:, 0] *= r[0, 0]
    return q


def hadamard_test_probabilities(
    circuit: Circuit, left: StateSpec, right: StateSpec
) -> Tuple[float, float]:
    """Exact p0 of both variants from the explicit ancilla-controlled circuit.

    The target unitary is W = V_left^dag U V_right with V preparing each state
    from |0...0>, so <0|W|0> = <left|U|right>.
    """
    _check_unitary(circuit)
    unitary = qcirc.circuit_matrix(circuit)
    prepare_left = preparation_unitary(_normalized(left, circuit, "left"))
    prepare_right = preparation_unitary(_normalized(right, circuit, "right"))
    target = prepare_left.conj().T @ unitary @ prepare_right
    dimension = target.shape[0]
    identity = np.eye(dimension, dtype=complex)
    controlled = np.block([
        [identity, np.zeros_like(identity)],
        [np.zeros_like(identity), target],
    ])
    hadamard = np.kron(HADAMARD, identity)
    start = np.zeros(2 * dimension, dtype=complex)
    start[0] = 1.0
    probabilities = []
    for phase in (np.eye(2), PHASE_GATE):
        state = hadamard @ controlled @ np.kron(phase, identity) @ hadamard @ start
        probabilities.append(float(np.linalg.norm(state[:dimension]) ** 2))
    return probabilities[0], probabilities[1]
