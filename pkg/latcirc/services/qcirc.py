"""
Dense qudit circuit simulation.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import svdvals
from scipy.optimize import minimize_scalar

from latcirc.core.config import settings
from latcirc.core.exceptions import DimensionMismatch, EnumerationTooLarge, WidthExceeded
from latcirc.models.circuit import Circuit, Gate, StateSpec, StateVector, as_state

logger = logging.getLogger(__name__)

_BATCH_AMPLITUDES = 1 << 21


def qubit_equivalents(width: int, q: int) -> float:
    return width * math.log2(q)


def _check_simulable(width: int, q: int) -> None:
    if qubit_equivalents(width, q) > settings.SIMULATION_CAP + 1e-9:
        raise WidthExceeded(
            f"{width} qudits of dimension {q} exceed the simulation cap of "
            f"{settings.SIMULATION_CAP} qubits"
        )


def _apply_to_tensor(tensor: np.ndarray, gate: Gate, q: int) -> np.ndarray:
    """Contract `gate` into the leading qudit axes of `tensor`.

    Axes beyond the circuit width are batch axes and pass through untouched.
    """
    k = gate.arity
    targets = list(gate.targets)
    if gate.is_diagonal:
        diagonal = np.diag(gate.matrix).reshape((q,) * k)
        diagonal = np.transpose(diagonal, np.argsort(targets))
        shape = [1] * tensor.ndim
        for t in targets:
            shape[t] = q
        return tensor * diagonal.reshape(shape)
    matrix = gate.matrix.reshape((q,) * (2 * k))
    moved = np.tensordot(matrix, tensor, axes=(list(range(k, 2 * k)), targets))
    return np.moveaxis(moved, list(range(k)), targets)


def _check_gate(state: StateVector, gate: Gate) -> None:
    if gate.matrix.shape[0] != state.q ** gate.arity:
        raise DimensionMismatch(
            f"Gate {gate.label!r} of size {gate.matrix.shape[0]} does not act on "
            f"{gate.arity} qudits of dimension {state.q}"
        )
    if max(gate.targets) >= state.width:
        raise DimensionMismatch(
            f"Gate {gate.label!r} targets {gate.targets} outside width {state.width}"
        )


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Return the state with `gate` applied on its targets.

    Raises:
        DimensionMismatch: if the gate does not fit the state
    """
    _check_gate(state, gate)
    tensor = _apply_to_tensor(state.tensor(), gate, state.q)
    return StateVector(tensor.reshape(-1), state.q, state.width)


def evolve(circuit: Circuit, state: StateSpec) -> StateVector:
    """Apply every gate of `circuit` in order, then the scalar prefactor."""
    _check_simulable(circuit.width, circuit.q)
    vector = as_state(state, circuit.width, circuit.q)
    tensor = vector.tensor()
    for gate in circuit.gates:
        tensor = _apply_to_tensor(tensor, gate, circuit.q)
    return StateVector(circuit.prefactor * tensor.reshape(-1), circuit.q, circuit.width)


def matrix_element(circuit: Circuit, left: StateSpec, right: StateSpec) -> complex:
    """prefactor * <left| gates |right>, for any gates, unitary or not.

    Raises:
        DimensionMismatch: if a state descriptor does not match the circuit
    """
    bra = as_state(left, circuit.width, circuit.q)
    ket = evolve(circuit, right)
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def _column_block(circuit: Circuit, start: int, stop: int) -> np.ndarray:
    dimension = circuit.q ** circuit.width
    block = np.zeros((dimension, stop - start), dtype=complex)
    block[np.arange(start, stop), np.arange(stop - start)] = 1.0
    tensor = block.reshape((circuit.q,) * circuit.width + (stop - start,))
    for gate in circuit.gates:
        tensor = _apply_to_tensor(tensor, gate, circuit.q)
    return tensor.reshape(dimension, stop - start)


def _column_blocks(circuit: Circuit) -> List[tuple]:
    dimension = circuit.q ** circuit.width
    batch = max(1, _BATCH_AMPLITUDES // dimension)
    return [(start, min(start + batch, dimension)) for start in range(0, dimension, batch)]


def trace(circuit: Circuit, cap: Optional[int] = None) -> complex:
    """Sum of the diagonal matrix elements, prefactor included.

    Raises:
        EnumerationTooLarge: if the width exceeds the trace cap
    """
    limit = settings.TRACE_CAP if cap is None else cap
    if qubit_equivalents(circuit.width, circuit.q) > limit + 1e-9:
        raise EnumerationTooLarge(
            f"Trace over {circuit.width} qudits of dimension {circuit.q} exceeds the cap "
            f"of {limit} qubits"
        )
    blocks = _column_blocks(circuit)

    def block_trace(bounds) -> complex:
        start, stop = bounds
        columns = _column_block(circuit, start, stop)
        return complex(columns[np.arange(start, stop), np.arange(stop - start)].sum())

    pool_size = settings.worker_count(len(blocks))
    if pool_size == 1:
        partials = [block_trace(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=pool_size) as executor:
            partials = list(executor.map(block_trace, blocks))
    value = 0j
    for partial in partials:
        value += partial
    return circuit.prefactor * value


def circuit_matrix(circuit: Circuit) -> np.ndarray:
    """Dense q^n x q^n operator of the circuit, prefactor included."""
    _check_simulable(2 * circuit.width, circuit.q)
    columns = [_column_block(circuit, a, b) for a, b in _column_blocks(circuit)]
    return circuit.prefactor * np.concatenate(columns, axis=1)


def compose(first: Circuit, second: Circuit) -> Circuit:
    """Circuit applying `first` then `second` (operator second @ first).

    Raises:
        DimensionMismatch: if width or q differ
    """
    if first.width != second.width or first.q != second.q:
        raise DimensionMismatch(
            f"Cannot compose width {first.width}/q {first.q} with "
            f"width {second.width}/q {second.q}"
        )
    return Circuit(
        first.width,
        first.q,
        first.gates + second.gates,
        first.prefactor * second.prefactor,
    )


def adjoint(circuit: Circuit) -> Circuit:
    """Reverse the gate order and conjugate-transpose every gate."""
    return Circuit(
        circuit.width,
        circuit.q,
        tuple(gate.adjoint() for gate in reversed(circuit.gates)),
        circuit.prefactor.conjugate(),
    )


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value."""
    return float(svdvals(matrix)[0])


def distance_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """min over phi of the operator norm of a - e^{i phi} b.

    Raises:
        DimensionMismatch: if the shapes differ
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"Cannot compare shapes {a.shape} and {b.shape}")

    def cost(phi: float) -> float:
        return operator_norm(a - np.exp(1j * phi) * b)

    overlap = np.vdot(b, a)
    phi0 = float(np.angle(overlap)) if abs(overlap) > 0 else 0.0
    grid = phi0 + np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    best = min(grid, key=cost)
    step = np.pi / 32
    refined = minimize_scalar(
        cost, bounds=(best - step, best + step), method="bounded", options={"xatol": 1e-12}
    )
    return float(min(cost(phi0), cost(best), refined.fun))


def kron_all(matrices: Sequence[np.ndarray]) -> np.ndarray:
    result = np.ones((1, 1), dtype=complex)
    for matrix in matrices:
        result = np.kron(result, matrix)
    return result
