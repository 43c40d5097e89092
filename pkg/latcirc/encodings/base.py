"""
Logical encodings, gate recipes and the recipe executor.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from latcirc.core.exceptions import AuxiliaryReuse, DimensionMismatch
from latcirc.models.circuit import Circuit, Gate, StateVector
from latcirc.services import qcirc

logger = logging.getLogger(__name__)


class EncodingName(str, Enum):
    """Supported logical encodings."""
    SIX_VERTEX_HEISENBERG = "SixVertexHeisenberg"
    POTTS_QUTRIT = "PottsQutrit"
    LGT_FOUR_QUBIT = "LgtFourQubit"
    ISING_QUBIT = "IsingQubit"


@dataclass(frozen=True, eq=False)
class LogicalEncoding:
    """Codewords of one logical qubit in `physical_per_logical` qudits."""

    name: EncodingName
    q: int
    physical_per_logical: int
    codewords: Tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        size = self.q ** self.physical_per_logical
        words = tuple(np.asarray(w, dtype=complex) for w in self.codewords)
        for word in words:
            if word.shape != (size,):
                raise DimensionMismatch(f"Codeword has shape {word.shape}, expected ({size},)")
        object.__setattr__(self, "codewords", words)

    def embedding(self, logical_width: int) -> np.ndarray:
        """Isometry from 2^k logical amplitudes to the physical register."""
        columns = []
        for index in range(2 ** logical_width):
            bits = [(index >> (logical_width - 1 - i)) & 1 for i in range(logical_width)]
            column = np.ones(1, dtype=complex)
            for bit in bits:
                column = np.kron(column, self.codewords[bit])
            columns.append(column)
        return np.stack(columns, axis=1)

    def embed(self, logical_state: np.ndarray) -> np.ndarray:
        logical_state = np.asarray(logical_state, dtype=complex)
        width = int(round(np.log2(logical_state.size)))
        return self.embedding(width) @ logical_state

    def readout(self, physical_state: np.ndarray, logical_width: int) -> np.ndarray:
        """Project a physical state onto the code basis."""
        return self.embedding(logical_width).conj().T @ np.asarray(physical_state, dtype=complex)


class StepKind(str, Enum):
    """Physical operations a recipe step can request."""
    MATRIX = "matrix"
    VERTICAL = "vertical"
    HORIZONTAL = "horizontal"
    PENDANT = "pendant"
    FACE = "face"
    SPREAD = "spread"
    TRANSFER = "transfer"


@dataclass(frozen=True)
class AuxSpec:
    """A fresh auxiliary qudit prepared in `state`."""

    name: str
    state: int


@dataclass(frozen=True, eq=False)
class RecipeStep:
    """One physical operation.

    `params` holds (mu, nu) for Potts steps and (coupling,) for gauge faces
    and transfers; MATRIX steps carry an explicit `matrix`.
    """

    kind: StepKind
    targets: Tuple[int, ...]
    params: Tuple[complex, ...] = ()
    aux: Optional[AuxSpec] = None
    matrix: Optional[np.ndarray] = None
    label: str = ""


@dataclass(frozen=True, eq=False)
class GateRecipe:
    """A physical step sequence realizing a logical gate.

    Input logical qubits are embedded on `input_slots`; all other register
    qudits start in |0>. After the steps, qudits in `discarded` are summed
    out and `output_slots` hold normalization * ideal |psi>.
    """

    name: str
    encoding: LogicalEncoding
    register_width: int
    input_slots: Tuple[Tuple[int, ...], ...]
    output_slots: Tuple[Tuple[int, ...], ...]
    steps: Tuple[RecipeStep, ...]
    ideal: np.ndarray
    normalization: complex = 1.0
    discarded: Tuple[int, ...] = ()
    parameter: Optional[float] = None
    error_order: Optional[int] = None
    error_budget: Optional[Callable[[float], float]] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def logical_width(self) -> int:
        return len(self.input_slots)

    def with_normalization(self, normalization: complex) -> "GateRecipe":
        return GateRecipe(
            self.name, self.encoding, self.register_width, self.input_slots,
            self.output_slots, self.steps, self.ideal, normalization, self.discarded,
            self.parameter, self.error_order, self.error_budget, dict(self.metadata),
        )

    def allowed_distance(self) -> float:
        if self.error_budget is not None and self.parameter is not None:
            return self.error_budget(self.parameter)
        return 1e-12 * max(1.0, abs(self.normalization))


@dataclass
class RecipeReport:
    """Outcome of running a recipe on random logical inputs."""

    name: str
    trials: int
    max_distance: float
    passed: bool
    fitted_slope: Optional[float] = None
    distances: Dict[str, float] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        report = {
            "name": self.name,
            "trials": self.trials,
            "max_distance": self.max_distance,
            "pass": self.passed,
            "failures": list(self.failures),
        }
        if self.fitted_slope is not None:
            report["fitted_slope"] = self.fitted_slope
            report["distances"] = dict(self.distances)
        return report


class RecipeExecutor(ABC):
    """Turns recipe steps into gates and simulates them."""

    @abstractmethod
    def step_gate(self, step: RecipeStep) -> Gate:
        """Return the gate realizing one step."""

    def _initial_state(self, recipe: GateRecipe, logical_state: np.ndarray) -> np.ndarray:
        q = recipe.encoding.q
        inputs = [slot for group in recipe.input_slots for slot in group]
        others = [i for i in range(recipe.register_width) if i not in inputs]
        tensor = recipe.encoding.embed(logical_state).reshape((q,) * len(inputs))
        zero = np.zeros(q, dtype=complex)
        zero[0] = 1.0
        for _ in others:
            tensor = np.multiply.outer(tensor, zero)
        order = inputs + others
        return np.transpose(tensor, np.argsort(order)).reshape(-1)

    def evolve(self, recipe: GateRecipe, logical_state: np.ndarray,
               steps: Optional[Sequence[RecipeStep]] = None) -> np.ndarray:
        """Full register state after `steps` (all recipe steps by default).

        Raises:
            AuxiliaryReuse: if a step names an auxiliary that was already used
        """
        used = set()
        gates = []
        for step in recipe.steps if steps is None else steps:
            if step.aux is not None:
                if step.aux.name in used:
                    raise AuxiliaryReuse(
                        f"Recipe {recipe.name} reuses auxiliary {step.aux.name!r} before reset"
                    )
                used.add(step.aux.name)
            gates.append(self.step_gate(step))
        q = recipe.encoding.q
        circuit = Circuit(recipe.register_width, q, tuple(gates))
        start = StateVector(self._initial_state(recipe, logical_state), q, recipe.register_width)
        return qcirc.evolve(circuit, start).amplitudes

    def run(self, recipe: GateRecipe, logical_state: np.ndarray) -> np.ndarray:
        """Output-register state after the steps and the final sum-out."""
        q = recipe.encoding.q
        tensor = self.evolve(recipe, logical_state).reshape((q,) * recipe.register_width)
        if recipe.discarded:
            tensor = tensor.sum(axis=tuple(recipe.discarded))
        remaining = [i for i in range(recipe.register_width) if i not in recipe.discarded]
        outputs = [slot for group in recipe.output_slots for slot in group]
        if sorted(outputs) != remaining:
            raise DimensionMismatch(
                f"Recipe {recipe.name} output slots {outputs} do not cover qudits {remaining}"
            )
        tensor = np.transpose(tensor, [remaining.index(s) for s in outputs])
        return tensor.reshape(-1)

    def expected(self, recipe: GateRecipe, logical_state: np.ndarray) -> np.ndarray:
        ideal_state = recipe.ideal @ np.asarray(logical_state, dtype=complex)
        return recipe.normalization * recipe.encoding.embed(ideal_state)

    def distance(self, recipe: GateRecipe, logical_state: np.ndarray) -> float:
        """Euclidean distance between the executed and the ideal physical output."""
        output = self.run(recipe, logical_state)
        return float(np.linalg.norm(output - self.expected(recipe, logical_state)))

    def logical_matrix(self, recipe: GateRecipe) -> np.ndarray:
        """Code-space action of the recipe on logical basis inputs."""
        k = recipe.logical_width
        columns = []
        for index in range(2 ** k):
            basis = np.zeros(2 ** k, dtype=complex)
            basis[index] = 1.0
            columns.append(recipe.encoding.readout(self.run(recipe, basis), k))
        return np.stack(columns, axis=1)

    def fitted_normalization(self, recipe: GateRecipe) -> complex:
        """Least-squares scalar c with logical action close to c * ideal."""
        action = self.logical_matrix(recipe)
        return complex(np.vdot(recipe.ideal, action) / np.vdot(recipe.ideal, recipe.ideal))


def diagonal_pair_table(q: int, mu: complex, nu: complex) -> np.ndarray:
    """Diagonal of a two-qudit Potts gate: mu on equal values, nu otherwise."""
    values = np.full((q, q), nu, dtype=complex)
    np.fill_diagonal(values, mu)
    return values.reshape(-1)
