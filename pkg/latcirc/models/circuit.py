"""
Circuit, state and partition-value types.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from latcirc.core.exceptions import DimensionMismatch, InvalidConfig

MAX_GATE_ARITY = 4


def _frozen_array(values, dtype=complex) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


def qudit_count(dimension: int, q: int) -> int:
    """Return k with q**k == dimension, or raise DimensionMismatch."""
    k = 0
    size = 1
    while size < dimension:
        size *= q
        k += 1
    if size != dimension:
        raise DimensionMismatch(f"Dimension {dimension} is not a power of q={q}")
    return k


@dataclass(frozen=True, eq=False)
class Gate:
    """A complex matrix acting on an ordered tuple of qudits.

    The matrix is stored in full even when diagonal. Row and column indices
    enumerate the target qudits with the first target most significant.
    """

    matrix: np.ndarray
    targets: Tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        matrix = _frozen_array(self.matrix)
        targets = tuple(int(t) for t in self.targets)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"Gate {self.label!r} matrix must be square")
        if not 1 <= len(targets) <= MAX_GATE_ARITY:
            raise DimensionMismatch(
                f"Gate {self.label!r} acts on {len(targets)} qudits; "
                f"supported arity is 1..{MAX_GATE_ARITY}"
            )
        if len(set(targets)) != len(targets):
            raise DimensionMismatch(f"Gate {self.label!r} has repeated targets {targets}")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "targets", targets)

    @property
    def arity(self) -> int:
        return len(self.targets)

    @property
    def is_diagonal(self) -> bool:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return not np.any(off)

    def is_unitary(self, tol: float = 1e-10) -> bool:
        """Check U U^dagger = I within `tol` (max abs entry)."""
        product = self.matrix @ self.matrix.conj().T
        return bool(np.max(np.abs(product - np.eye(len(product)))) <= tol)

    def adjoint(self) -> "Gate":
        return Gate(self.matrix.conj().T, self.targets, f"{self.label}^dag")


@dataclass(frozen=True, eq=False)
class Circuit:
    """An ordered gate list over `width` qudits of dimension `q`.

    Gates are applied first-to-last; the operator is gates[-1] ... gates[0]
    times `prefactor`.
    """

    width: int
    q: int
    gates: Tuple[Gate, ...] = ()
    prefactor: complex = 1.0

    def __post_init__(self):
        if self.q < 2:
            raise DimensionMismatch(f"Qudit dimension must be >= 2, got {self.q}")
        if self.width < 0:
            raise DimensionMismatch(f"Circuit width must be >= 0, got {self.width}")
        gates = tuple(self.gates)
        for gate in gates:
            if max(gate.targets) >= self.width or min(gate.targets) < 0:
                raise DimensionMismatch(
                    f"Gate {gate.label!r} targets {gate.targets} outside width {self.width}"
                )
            if gate.matrix.shape[0] != self.q ** gate.arity:
                raise DimensionMismatch(
                    f"Gate {gate.label!r} has size {gate.matrix.shape[0]}, "
                    f"expected {self.q ** gate.arity}"
                )
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "prefactor", complex(self.prefactor))

    def __len__(self) -> int:
        return len(self.gates)

    def with_gates(self, gates: Sequence[Gate], prefactor: Optional[complex] = None) -> "Circuit":
        return Circuit(
            self.width,
            self.q,
            tuple(gates),
            self.prefactor if prefactor is None else prefactor,
        )

    def is_unitary(self, tol: float = 1e-10) -> bool:
        return abs(abs(self.prefactor) - 1.0) <= tol and all(
            gate.is_unitary(tol) for gate in self.gates
        )


@dataclass(frozen=True, eq=False)
class StateVector:
    """Dense amplitudes over q**width basis states, first qudit most significant."""

    amplitudes: np.ndarray
    q: int
    width: int

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size != self.q ** self.width:
            raise DimensionMismatch(
                f"State has {amplitudes.size} amplitudes, expected {self.q ** self.width}"
            )
        if not np.all(np.isfinite(amplitudes)):
            raise DimensionMismatch("State amplitudes must be finite")
        amplitudes = amplitudes.copy()
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def basis(cls, digits: Sequence[int], q: int) -> "StateVector":
        return BasisState(tuple(digits)).to_state(len(digits), q)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.q,) * self.width)


@dataclass(frozen=True)
class BasisState:
    """Computational basis state |d_0 d_1 ...>."""

    digits: Tuple[int, ...]

    def to_state(self, width: int, q: int) -> StateVector:
        if len(self.digits) != width:
            raise DimensionMismatch(
                f"Basis state has {len(self.digits)} digits, expected {width}"
            )
        if any(d < 0 or d >= q for d in self.digits):
            raise InvalidConfig(f"Basis digits {self.digits} must lie in 0..{q - 1}")
        amplitudes = np.zeros(q ** width, dtype=complex)
        index = 0
        for d in self.digits:
            index = index * q + d
        amplitudes[index] = 1.0
        return StateVector(amplitudes, q, width)


@dataclass(frozen=True, eq=False)
class ProductState:
    """Tensor product of per-qudit amplitude vectors."""

    factors: Tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(_frozen_array(f) for f in self.factors))

    @classmethod
    def plus(cls, width: int, q: int) -> "ProductState":
        """Uniform superposition over the q levels on every qudit."""
        vector = np.full(q, 1.0 / math.sqrt(q), dtype=complex)
        return cls(tuple(vector for _ in range(width)))

    def to_state(self, width: int, q: int) -> StateVector:
        if len(self.factors) != width:
            raise DimensionMismatch(
                f"Product state has {len(self.factors)} factors, expected {width}"
            )
        amplitudes = np.ones(1, dtype=complex)
        for factor in self.factors:
            if factor.shape != (q,):
                raise DimensionMismatch(f"Product factor has shape {factor.shape}, expected ({q},)")
            amplitudes = np.kron(amplitudes, factor)
        return StateVector(amplitudes, q, width)


StateSpec = Union[BasisState, ProductState, StateVector]


def as_state(state: StateSpec, width: int, q: int) -> StateVector:
    """Materialize a state descriptor as a dense StateVector."""
    if isinstance(state, StateVector):
        if state.width != width or state.q != q:
            raise DimensionMismatch(
                f"State is {state.width} qudits of dimension {state.q}, "
                f"expected {width} of dimension {q}"
            )
        return state
    return state.to_state(width, q)


@dataclass(frozen=True)
class Kappa:
    """Normalization 2**pow2 * q**powq * residual, with exact exponents."""

    pow2: Fraction = Fraction(0)
    powq: int = 0
    q: int = 2
    residual: complex = 1.0

    @classmethod
    def one(cls, q: int = 2) -> "Kappa":
        return cls(Fraction(0), 0, q, 1.0)

    @property
    def value(self) -> complex:
        return complex(2.0 ** float(self.pow2) * float(self.q) ** self.powq * self.residual)

    def __mul__(self, other: "Kappa") -> "Kappa":
        if self.powq and other.powq and self.q != other.q:
            raise DimensionMismatch("Cannot multiply kappas over different q")
        q = self.q if self.powq else other.q
        return Kappa(
            Fraction(self.pow2) + Fraction(other.pow2),
            self.powq + other.powq,
            q,
            complex(self.residual) * complex(other.residual),
        )

    def times_pow2(self, exponent) -> "Kappa":
        return Kappa(Fraction(self.pow2) + Fraction(exponent), self.powq, self.q, self.residual)

    def times(self, scalar: complex) -> "Kappa":
        return Kappa(self.pow2, self.powq, self.q, complex(self.residual) * complex(scalar))

    def describe(self) -> str:
        return f"2^({self.pow2}) * {self.q}^{self.powq} * {self.residual}"


class Provenance(str, Enum):
    """Where a partition value came from."""
    ORACLE = "oracle"
    CIRCUIT = "circuit"
    ESTIMATOR = "estimator"


@dataclass(frozen=True)
class PartitionValue:
    """A partition function value Z together with its normalization."""

    value: complex
    kappa: Kappa = field(default_factory=Kappa.one)
    provenance: Provenance = Provenance.ORACLE

    @property
    def normalized(self) -> complex:
        return complex(self.value) / self.kappa.value
