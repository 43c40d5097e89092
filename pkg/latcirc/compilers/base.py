"""
Shared types for the circuit-to-lattice compilers.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from latcirc.core.exceptions import DimensionMismatch, UnsupportedGate
from latcirc.models.circuit import Circuit, Gate, Kappa, StateSpec
from latcirc.models.lattice import (
    BoundaryCondition,
    EdgeKind,
    EdgeModel,
    GridEdge,
    LatticeModel,
    Pendant,
    PlanarCircuitGraph,
)
from latcirc.services import qcirc

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LogicalOp:
    """One gate of a logical circuit, named by its alphabet symbol."""

    gate: str
    targets: Tuple[int, ...]
    params: Mapping[str, float] = field(default_factory=dict)

    def param(self, name: str, default: float = 0.0) -> float:
        return float(self.params.get(name, default))


@dataclass(frozen=True)
class LogicalCircuit:
    """A circuit over a compiler's logical gate alphabet."""

    width: int
    ops: Tuple[LogicalOp, ...] = ()

    def __post_init__(self):
        ops = tuple(self.ops)
        for op in ops:
            if not op.targets or min(op.targets) < 0 or max(op.targets) >= self.width:
                raise DimensionMismatch(
                    f"Logical op {op.gate} targets {op.targets} outside width {self.width}"
                )
        object.__setattr__(self, "ops", ops)


class TargetKind(str, Enum):
    """What Z / kappa of a compiled instance equals."""
    MATRIX_ELEMENT = "matrix_element"
    TRACE = "normalized_trace"


@dataclass(frozen=True)
class ProvenanceEntry:
    """The lattice interactions emitted for one source gate."""

    op_index: int
    gate: str
    interactions: Tuple[str, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"op": self.op_index, "gate": self.gate, "interactions": list(self.interactions)}


@dataclass(frozen=True, eq=False)
class CompiledInstance:
    """A lattice model whose Z / kappa equals a quantity of `reference`.

    For MATRIX_ELEMENT the quantity is <left| reference |right>; for TRACE it
    is Tr(reference) / q^width.
    """

    model: LatticeModel
    kappa: Kappa
    target: TargetKind
    reference: Circuit
    left: Optional[StateSpec] = None
    right: Optional[StateSpec] = None
    provenance: Tuple[ProvenanceEntry, ...] = ()
    metadata: Dict[str, Any] = field(default_factory=dict)

    def target_value(self) -> complex:
        """The source-circuit quantity, computed by dense simulation."""
        if self.target == TargetKind.TRACE:
            dimension = self.reference.q ** self.reference.width
            return qcirc.trace(self.reference) / dimension
        return qcirc.matrix_element(self.reference, self.left, self.right)

    def describe_target(self) -> str:
        if self.target == TargetKind.TRACE:
            return f"Tr(C) / {self.reference.q}^{self.reference.width}"
        return "<left| C |right>"


def logical_reference(
    circuit: LogicalCircuit, matrices: Mapping[str, Callable[[LogicalOp], np.ndarray]]
) -> Circuit:
    """The ideal qubit circuit of a logical circuit.

    Raises:
        UnsupportedGate: if an op has no ideal matrix
    """
    gates = []
    for op in circuit.ops:
        if op.gate not in matrices:
            raise UnsupportedGate(f"Unsupported logical gate: {op.gate}")
        gates.append(Gate(matrices[op.gate](op), op.targets, op.gate))
    return Circuit(circuit.width, 2, tuple(gates))


def check_whitelist(
    values: Iterable[Any], allowed: Callable[[Any], bool], family: str
) -> None:
    """Raise UnsupportedGate for the first emitted value outside the allowed set."""
    for value in values:
        if not allowed(value):
            raise UnsupportedGate(f"{family} coupling {value} is outside the allowed set")


@dataclass
class GridStep:
    """Interactions of one time step of a planar circuit graph.

    Vertical tables are keyed by the upper row; pendants are
    (row, value, table, label).
    """

    op_index: int
    gate: str
    vertical: Dict[int, np.ndarray] = field(default_factory=dict)
    horizontal: Dict[int, np.ndarray] = field(default_factory=dict)
    pendants: List[Tuple[int, int, np.ndarray, str]] = field(default_factory=list)


class GridTimeline:
    """Builds a planar circuit graph from time steps in application order.

    Step t occupies grid column c = T - t: its vertical edges and pendants
    sit in column c and its horizontal edges join column c - 1 to c. Rows
    without a horizontal edge in a step are contracted and unused vertical
    positions are deleted, unless a padding table is given.
    """

    def __init__(self, rows: int, q: int):
        self.rows = rows
        self.q = q
        self.steps: List[GridStep] = []

    def add_step(self, op_index: int, gate: str) -> GridStep:
        step = GridStep(op_index, gate)
        self.steps.append(step)
        return step

    def build(
        self,
        boundary: BoundaryCondition,
        node_field: Optional[np.ndarray] = None,
        vertical_padding: Optional[np.ndarray] = None,
    ) -> Tuple[EdgeModel, Tuple[ProvenanceEntry, ...]]:
        total = len(self.steps)
        m = total + 1
        contracted = {(r, c) for r in range(self.rows) for c in range(m - 1)}
        deleted = {(r, c) for r in range(self.rows - 1) for c in range(m)}
        edge_weights: Dict[GridEdge, np.ndarray] = {}
        pendants: List[Pendant] = []
        interactions: Dict[Tuple[int, str], List[str]] = {}

        for t, step in enumerate(self.steps):
            c = total - t
            log = interactions.setdefault((step.op_index, step.gate), [])
            for r, table in step.vertical.items():
                deleted.discard((r, c))
                edge_weights[GridEdge(EdgeKind.VERTICAL, r, c)] = table
                log.append(f"v({r},{c})")
            for r, value, table, label in step.pendants:
                pendants.append(Pendant((r, c), value, table, label))
                log.append(f"aux({r},{c})={value}")
            for r, table in step.horizontal.items():
                contracted.discard((r, c - 1))
                edge_weights[GridEdge(EdgeKind.HORIZONTAL, r, c - 1)] = table
                log.append(f"h({r},{c - 1})")

        if vertical_padding is not None:
            for r, c in deleted:
                edge_weights[GridEdge(EdgeKind.VERTICAL, r, c)] = vertical_padding
            deleted = set()
        graph = PlanarCircuitGraph(self.rows, m, frozenset(deleted), frozenset(contracted))
        fields = {}
        if node_field is not None:
            fields = {(node.row, node.start): node_field for node in graph.nodes()}
        model = EdgeModel(graph, self.q, edge_weights, fields, boundary, tuple(pendants))
        provenance = tuple(
            ProvenanceEntry(index, gate, tuple(log))
            for (index, gate), log in sorted(interactions.items(), key=lambda item: item[0][0])
        )
        return model, provenance


def tables_of(model: EdgeModel) -> Sequence[np.ndarray]:
    """Every edge and pendant table of an edge model."""
    return list(model.edge_weights.values()) + [p.table for p in model.pendants]
