"""
Ising gate set: the generator gates, their composites and exact-inverse search.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import schur

from latcirc.core.config import settings
from latcirc.core.exceptions import BadParameter, SearchExhausted
from latcirc.encodings.base import (
    EncodingName,
    GateRecipe,
    LogicalEncoding,
    RecipeExecutor,
    RecipeStep,
    StepKind,
)
from latcirc.models.circuit import Gate
from latcirc.services.qcirc import distance_up_to_phase

logger = logging.getLogger(__name__)

TWO_PI = 2 * np.pi

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PHASE = np.diag([1, 1j])
PAULI_Z = np.diag([1, -1]).astype(complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
ZZ = np.diag([1, -1, -1, 1]).astype(complex)

_SEARCH_CHUNK = 4096


def rz(theta: float) -> np.ndarray:
    """diag(1, e^{i theta})."""
    return np.diag([1.0, np.exp(1j * theta)])


@dataclass(frozen=True, eq=False)
class IsingGateSet:
    """Ising generator gates and the composites built from them.

    w_h is the horizontal-edge gate with coupling i, w_h_bar its unitary
    rescaling, w_v the vertical-edge gate with coupling i and v the node
    field with e^{i pi/4}.
    """

    w_h: np.ndarray
    w_h_bar: np.ndarray
    w_v: np.ndarray
    v: np.ndarray
    v_half: np.ndarray
    k: np.ndarray
    t: np.ndarray

    @property
    def k_dag(self) -> np.ndarray:
        return self.k.conj().T

    def hadamard(self) -> np.ndarray:
        """Z K Z K Z K^dag K^dag Z, proportional to H."""
        z, k, kd = PAULI_Z, self.k, self.k_dag
        return z @ k @ z @ k @ z @ kd @ kd @ z

    def phase(self) -> np.ndarray:
        """K Z K^dag Z K^dag Z K, proportional to P."""
        z, k, kd = PAULI_Z, self.k, self.k_dag
        return k @ z @ kd @ z @ kd @ z @ k

    def w_v_squared(self) -> np.ndarray:
        """Proportional to Z tensor Z."""
        return self.w_v @ self.w_v

    def controlled_z(self) -> np.ndarray:
        """(P tensor P) W_v, proportional to CZ."""
        return np.kron(PHASE, PHASE) @ self.w_v

    def two_qubit_block(self) -> np.ndarray:
        """T tensor T, W_v, T tensor T: the entangling block of a compiled circuit."""
        tt = np.kron(self.t, self.t)
        return tt @ self.w_v @ tt


def ising_gate_set() -> IsingGateSet:
    w_h = np.array([[1j, 1], [1, 1j]], dtype=complex)
    w_h_bar = w_h / np.sqrt(2)
    v = np.diag([np.exp(1j * np.pi / 4), 1.0])
    v_half = np.diag([np.exp(1j * np.pi / 8), 1.0])
    return IsingGateSet(
        w_h=w_h,
        w_h_bar=w_h_bar,
        w_v=np.diag([1j, 1, 1, 1j]).astype(complex),
        v=v,
        v_half=v_half,
        k=w_h_bar @ v,
        t=v_half @ w_h_bar @ v_half,
    )


def _check_unitary(gate: np.ndarray) -> None:
    if gate.ndim != 2 or gate.shape[0] != gate.shape[1]:
        raise BadParameter(f"Expected a square matrix, got shape {gate.shape}")
    deviation = np.max(np.abs(gate @ gate.conj().T - np.eye(gate.shape[0])))
    if deviation > settings.UNITARY_TOLERANCE:
        raise BadParameter(f"Gate is not unitary (deviation {deviation:.3e})")


def _arc_distances(angles: np.ndarray) -> np.ndarray:
    """Best distance to a common phase for each row of eigenphases.

    For phases spread over an arc of width w <= pi, min over phi of
    max |e^{i theta} - e^{i phi}| is 2 sin(w / 4).
    """
    ordered = np.sort(angles, axis=1)
    wrap = TWO_PI - (ordered[:, -1] - ordered[:, 0])
    if ordered.shape[1] > 1:
        widest = np.maximum(np.diff(ordered, axis=1).max(axis=1), wrap)
    else:
        widest = np.full(ordered.shape[0], TWO_PI)
    width = TWO_PI - widest
    return np.where(width <= np.pi, 2 * np.sin(width / 4), 2.0)


def find_inverse_power(gate: np.ndarray, delta: float, cap: Optional[int] = None) -> int:
    """Smallest m >= 1 with gate^m within delta of gate^dagger up to a global phase.

    Args:
        gate: unitary matrix
        delta: operator-norm tolerance, > 0
        cap: largest m tried (defaults to INVERSE_SEARCH_CAP)

    Returns:
        The exponent m

    Raises:
        BadParameter: if the gate is not unitary or delta <= 0
        SearchExhausted: if no m up to the cap qualifies
    """
    gate = np.asarray(gate, dtype=complex)
    _check_unitary(gate)
    if not delta > 0:
        raise BadParameter(f"delta must be positive, got {delta}")
    limit = settings.INVERSE_SEARCH_CAP if cap is None else cap
    diagonal, _ = schur(gate, output="complex")
    theta = np.angle(np.diag(diagonal))
    inverse = gate.conj().T

    for start in range(1, limit + 1, _SEARCH_CHUNK):
        exponents = np.arange(start, min(start + _SEARCH_CHUNK, limit + 1))
        # gate^m - e^{i phi} gate^dag has singular values |lambda^{m+1} - e^{i phi}|
        angles = np.mod(np.outer(exponents + 1, theta), TWO_PI)
        distances = _arc_distances(angles)
        for index in np.flatnonzero(distances < delta):
            m = int(exponents[index])
            power = np.linalg.matrix_power(gate, m)
            if distance_up_to_phase(power, inverse) < delta:
                logger.debug(f"Inverse power {m} found for delta={delta}")
                return m
    raise SearchExhausted(f"No power up to {limit} approximates the inverse within {delta}")


def compose_euler(gamma: float, beta: float, alpha: float, phase: float = 0.0) -> np.ndarray:
    """e^{i phase} R_z(gamma) H R_z(beta) H R_z(alpha)."""
    return np.exp(1j * phase) * rz(gamma) @ HADAMARD @ rz(beta) @ HADAMARD @ rz(alpha)


def euler_angles(unitary: np.ndarray, tol: float = 1e-12) -> Tuple[float, float, float, float]:
    """Angles (gamma, beta, alpha, phase) with unitary = compose_euler(...).

    Raises:
        BadParameter: if the input is not a 2x2 unitary
    """
    u = np.asarray(unitary, dtype=complex)
    if u.shape != (2, 2):
        raise BadParameter(f"Euler decomposition needs a 2x2 matrix, got {u.shape}")
    _check_unitary(u)
    c, s = abs(u[0, 0]), abs(u[1, 0])
    beta = 2 * np.arctan2(s, c)
    if s <= tol:
        phase = np.angle(u[0, 0])
        gamma, alpha = np.angle(u[1, 1]) - phase, 0.0
    elif c <= tol:
        phase = np.angle(u[0, 1])
        gamma, alpha = np.angle(u[1, 0]) - phase, 0.0
    else:
        phase = np.angle(u[0, 0]) - beta / 2
        gamma = np.angle(u[1, 0]) - np.angle(u[0, 0]) + np.pi / 2
        alpha = np.angle(u[0, 1]) - np.angle(u[0, 0]) + np.pi / 2
    return _wrap(gamma), float(beta), _wrap(alpha), _wrap(phase)


def _wrap(angle: float) -> float:
    return float(np.mod(angle, TWO_PI))


class IsingExecutor(RecipeExecutor):
    """Executes MATRIX steps directly."""

    def step_gate(self, step: RecipeStep) -> Gate:
        if step.kind != StepKind.MATRIX or step.matrix is None:
            raise BadParameter(f"Ising recipes only carry matrix steps, got {step.kind}")
        return Gate(step.matrix, step.targets, step.label)


def ising_encoding() -> LogicalEncoding:
    return LogicalEncoding(EncodingName.ISING_QUBIT, 2, 1, (np.array([1, 0]), np.array([0, 1])))


def _matrix_steps(
    sequence: Sequence[Tuple[str, np.ndarray, Tuple[int, ...]]]
) -> Tuple[RecipeStep, ...]:
    return tuple(
        RecipeStep(StepKind.MATRIX, targets, matrix=matrix, label=label)
        for label, matrix, targets in sequence
    )


def ising_recipes() -> Dict[str, GateRecipe]:
    """Composite identities as recipes; normalizations are the fitted global phases."""
    gates = ising_gate_set()
    encoding = ising_encoding()
    k, kd, z = gates.k, gates.k_dag, PAULI_Z
    # application order is the reverse of the operator product
    hadamard_steps = _matrix_steps([
        ("Z", z, (0,)), ("K^dag", kd, (0,)), ("K^dag", kd, (0,)), ("Z", z, (0,)),
        ("K", k, (0,)), ("Z", z, (0,)), ("K", k, (0,)), ("Z", z, (0,)),
    ])
    phase_steps = _matrix_steps([
        ("K", k, (0,)), ("Z", z, (0,)), ("K^dag", kd, (0,)), ("Z", z, (0,)),
        ("K^dag", kd, (0,)), ("Z", z, (0,)), ("K", k, (0,)),
    ])
    cz_steps = _matrix_steps([
        ("W_v", gates.w_v, (0, 1)), ("P", PHASE, (0,)), ("P", PHASE, (1,)),
    ])
    one, two = ((0,),), ((0,), (1,))
    recipes = {
        "ising.H": GateRecipe("ising.H", encoding, 1, one, one, hadamard_steps, HADAMARD),
        "ising.P": GateRecipe("ising.P", encoding, 1, one, one, phase_steps, PHASE),
        "ising.CZ": GateRecipe("ising.CZ", encoding, 2, two, two, cz_steps, CZ),
    }
    executor = IsingExecutor()
    return {
        name: recipe.with_normalization(executor.fitted_normalization(recipe))
        for name, recipe in recipes.items()
    }
