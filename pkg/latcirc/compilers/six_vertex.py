"""
Compile six-vertex-form circuits into vertex models on a tilted lattice.
"""
import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from latcirc.compilers.base import CompiledInstance, ProvenanceEntry, TargetKind
from latcirc.core.exceptions import NotSixVertexForm, UnsupportedGate
from latcirc.encodings.six_vertex import SIX_VERTEX_SUPPORT
from latcirc.models.circuit import BasisState, Circuit, Gate, Kappa
from latcirc.models.lattice import BoundaryCondition, Vertex, VertexModel

logger = logging.getLogger(__name__)

SUPPORT_TOLERANCE = 1e-12


def staggered(width: int) -> List[int]:
    """0101... over `width` wires."""
    return [i % 2 for i in range(width)]


def vertex_weights(index: int, gate: Gate) -> np.ndarray:
    """The gate as a (2, 2, 2, 2) tensor on (wire, wire + 1).

    Raises:
        UnsupportedGate: if the gate is not a nearest-neighbour two-qubit gate
        NotSixVertexForm: if it has weight outside the six allowed configurations
    """
    if gate.arity != 2 or abs(gate.targets[0] - gate.targets[1]) != 1:
        raise UnsupportedGate(
            f"Gate {index} ({gate.label or 'unlabelled'}) on {gate.targets} is not a "
            f"nearest-neighbour two-qubit gate"
        )
    tensor = gate.matrix.reshape(2, 2, 2, 2)
    if gate.targets[0] > gate.targets[1]:
        tensor = tensor.transpose(1, 0, 3, 2)
    mask = np.ones((2, 2, 2, 2), dtype=bool)
    for config in SIX_VERTEX_SUPPORT:
        mask[config] = False
    worst = float(np.max(np.abs(tensor[mask])))
    if worst > SUPPORT_TOLERANCE:
        raise NotSixVertexForm(
            f"Gate {index} ({gate.label or 'unlabelled'}) has weight {worst:.3e} outside the "
            f"six-vertex configurations"
        )
    return tensor


def compile_to_six_vertex(
    circuit: Circuit,
    left: Optional[Sequence[int]] = None,
    right: Optional[Sequence[int]] = None,
) -> CompiledInstance:
    """Vertex model with Z = <left| C |right>, kappa = 1 / prefactor.

    Gates are packed greedily into columns; the first gate applied sits in
    the rightmost column. Both boundaries default to the staggered 0101...
    configuration.

    Raises:
        UnsupportedGate: if a gate is not a nearest-neighbour two-qubit gate
        NotSixVertexForm: if a gate violates the six-vertex sparsity pattern
    """
    if circuit.q != 2:
        raise UnsupportedGate(f"Six-vertex compilation needs qubits, got q={circuit.q}")
    width = circuit.width
    layer_of_wire: Dict[int, int] = {}
    placed = []
    for index, gate in enumerate(circuit.gates):
        tensor = vertex_weights(index, gate)
        wire = min(gate.targets)
        layer = 1 + max(layer_of_wire.get(wire, -1), layer_of_wire.get(wire + 1, -1))
        layer_of_wire[wire] = layer_of_wire[wire + 1] = layer
        placed.append((index, gate, layer, wire, tensor))

    depth = 1 + max((item[2] for item in placed), default=-1)
    vertices = []
    provenance = []
    for index, gate, layer, wire, tensor in placed:
        column = depth - 1 - layer
        vertices.append(Vertex(column, wire, tensor))
        label = gate.label or "gate"
        provenance.append(ProvenanceEntry(index, label, (f"vertex({column},{wire})",)))

    left_digits = staggered(width) if left is None else list(left)
    right_digits = staggered(width) if right is None else list(right)
    boundary = BoundaryCondition.fixed(left_digits, right_digits)
    model = VertexModel(width, 2, tuple(vertices), boundary)
    kappa = Kappa.one(2)
    if circuit.prefactor != 1.0:
        kappa = kappa.times(1 / circuit.prefactor)
    logger.info(f"Compiled {len(placed)} gates on {width} wires into {depth} vertex columns")
    return CompiledInstance(
        model,
        kappa,
        TargetKind.MATRIX_ELEMENT,
        circuit,
        BasisState(tuple(left_digits)),
        BasisState(tuple(right_digits)),
        tuple(provenance),
        {"columns": depth},
    )
