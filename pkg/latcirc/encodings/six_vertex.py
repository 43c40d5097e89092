"""
Six-vertex gate set and the four-qubit singlet encoding.
"""
import logging
from typing import Dict

import numpy as np
from scipy.linalg import expm

from latcirc.encodings.base import EncodingName, LogicalEncoding

logger = logging.getLogger(__name__)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.diag([1, -1]).astype(complex)

# Nonzero six-vertex configurations (i, j, k, l): i + j == k + l.
SIX_VERTEX_SUPPORT = (
    (0, 0, 0, 0),
    (1, 1, 1, 1),
    (0, 1, 0, 1),
    (1, 0, 1, 0),
    (0, 1, 1, 0),
    (1, 0, 0, 1),
)


def weights_to_matrix(weights: Dict[tuple, complex]) -> np.ndarray:
    """Gate matrix with entry [(i,j),(k,l)] = w(i,j,k,l)."""
    matrix = np.zeros((4, 4), dtype=complex)
    for (i, j, k, l), value in weights.items():
        matrix[2 * i + j, 2 * k + l] = value
    return matrix


def exchange_weights(t: float) -> Dict[tuple, complex]:
    """Weights of the exchange gate at time t."""
    phase = np.exp(2j * t)
    return {
        (0, 0, 0, 0): phase,
        (1, 1, 1, 1): phase,
        (0, 1, 0, 1): np.cos(2 * t),
        (1, 0, 1, 0): np.cos(2 * t),
        (0, 1, 1, 0): 1j * np.sin(2 * t),
        (1, 0, 0, 1): 1j * np.sin(2 * t),
    }


def singlet_weights() -> Dict[tuple, complex]:
    """Weights of the gate taking |01> to the singlet (|01> - |10>)/sqrt(2)."""
    root = 1 / np.sqrt(2)
    return {
        (0, 0, 0, 0): 1.0,
        (1, 1, 1, 1): 1.0,
        (0, 1, 0, 1): root,
        (1, 0, 1, 0): root,
        (0, 1, 1, 0): root,
        (1, 0, 0, 1): -root,
    }


def exchange_hamiltonian() -> np.ndarray:
    """XX + YY + ZZ on two qubits."""
    return sum(np.kron(p, p) for p in (PAULI_X, PAULI_Y, PAULI_Z))


def six_vertex_gates(t: float) -> Dict[str, np.ndarray]:
    """The exchange gate U(t) and the singlet preparation gate V.

    U(t) equals e^{it} exp(it(XX+YY+ZZ)); both gates obey the six-vertex
    sparsity pattern.
    """
    return {
        "U": weights_to_matrix(exchange_weights(t)),
        "V": weights_to_matrix(singlet_weights()),
    }


def exchange_unitary(t: float) -> np.ndarray:
    """Reference exchange unitary exp(it(XX+YY+ZZ)) with the e^{it} phase."""
    return np.exp(1j * t) * expm(1j * t * exchange_hamiltonian())


def logical_zero() -> np.ndarray:
    """V on (0,1) and (2,3) applied to |0101>: a product of two singlets."""
    v = six_vertex_gates(0.0)["V"]
    start = np.zeros(16, dtype=complex)
    start[0b0101] = 1.0
    return np.kron(v, v) @ start


def logical_one() -> np.ndarray:
    """The second total-spin-zero state of four qubits, orthogonal to logical_zero."""
    word = np.zeros(16, dtype=complex)
    word[0b0011] = 2.0
    word[0b1100] = 2.0
    for index in (0b0101, 0b0110, 0b1001, 0b1010):
        word[index] = -1.0
    return word / np.sqrt(12)


def six_vertex_encoding() -> LogicalEncoding:
    return LogicalEncoding(
        EncodingName.SIX_VERTEX_HEISENBERG, 2, 4, (logical_zero(), logical_one())
    )
