"""
Forward mappings from lattice models to qudit circuits.

Time runs left to right across the lattice but circuits are built in
application order: the right boundary is the input state, gates of the
rightmost column come first, and the left boundary is the output bra.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from latcirc.core.exceptions import GaugeLoop, MalformedGeometry, UnsupportedFace
from latcirc.models.circuit import (
    BasisState,
    Circuit,
    Gate,
    Kappa,
    PartitionValue,
    ProductState,
    Provenance,
    StateSpec,
)
from latcirc.models.lattice import (
    BoundaryCondition,
    BoundaryKind,
    EdgeKind,
    EdgeModel,
    LatticeModel,
    LgtEdge,
    LgtFace,
    LgtModel,
    VertexModel,
    face_edges,
    parity_weight,
)
from latcirc.services import qcirc
from latcirc.services.spinlat import validate_gauge_fixing

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MappedCircuit:
    """A circuit with the normalization and boundary states that recover Z.

    FIXED and OPEN evaluate as kappa * <left|C|right>; PERIODIC evaluates as
    kappa * Tr C and carries no states.
    """

    circuit: Circuit
    kappa: Kappa
    mode: BoundaryKind
    left: Optional[StateSpec] = None
    right: Optional[StateSpec] = None

    def raw(self) -> complex:
        """The bare circuit quantity before multiplying by kappa."""
        if self.mode == BoundaryKind.PERIODIC:
            return qcirc.trace(self.circuit)
        return qcirc.matrix_element(self.circuit, self.left, self.right)


def evaluate(mapped: MappedCircuit) -> PartitionValue:
    """Partition function from circuit contraction."""
    value = mapped.kappa.value * mapped.raw()
    return PartitionValue(value, mapped.kappa, Provenance.CIRCUIT)


def _boundary_states(
    boundary: BoundaryCondition,
    width: int,
    q: int,
    left: Optional[List[int]] = None,
    right: Optional[List[int]] = None,
) -> Tuple[Optional[StateSpec], Optional[StateSpec], Kappa]:
    if boundary.kind == BoundaryKind.FIXED:
        left_digits = list(boundary.left) if left is None else left
        right_digits = list(boundary.right) if right is None else right
        return BasisState(tuple(left_digits)), BasisState(tuple(right_digits)), Kappa.one(q)
    if boundary.kind == BoundaryKind.OPEN:
        plus = ProductState.plus(width, q)
        return plus, plus, Kappa(powq=width, q=q)
    return None, None, Kappa.one(q)


def vertex_to_circuit(model: VertexModel) -> MappedCircuit:
    """Map a vertex model to a circuit of two-qudit gates W^a.

    Each vertex tensor becomes the matrix W^a[(i,j),(k,l)] = w(i,j,k,l) with
    the right legs (k,l) as input; the rightmost column acts first.
    """
    q = model.q
    gates = []
    for vertex in sorted(model.vertices, key=lambda v: (-v.column, v.wire)):
        gates.append(Gate(
            vertex.weights.reshape(q * q, q * q),
            (vertex.wire, vertex.wire + 1),
            f"W^a@({vertex.column},{vertex.wire})",
        ))
    circuit = Circuit(model.width, q, tuple(gates))
    left, right, kappa = _boundary_states(model.boundary, model.width, q)
    logger.info(f"Mapped vertex model to {len(gates)} gates on {model.width} qudits")
    return MappedCircuit(circuit, kappa, model.boundary.kind, left, right)


def edge_to_circuit(model: EdgeModel) -> MappedCircuit:
    """Map an edge model on a planar circuit graph to a circuit.

    Per grid column, right to left: diagonal gates for the vertical edges,
    merged-vertex fields and pendant auxiliaries of that column, then one
    single-qudit gate W_e^h per surviving horizontal edge into the column on
    the left. Diagonal gates within a column commute.
    """
    graph = model.graph
    q = model.q
    nodes_ending: Dict[int, list] = {c: [] for c in range(graph.m)}
    for node in graph.nodes():
        nodes_ending[node.end].append(node)
    pendants_at: Dict[int, list] = {c: [] for c in range(graph.m)}
    for p, pendant in enumerate(model.pendants):
        pendants_at[pendant.vertex[1]].append((p, pendant))

    gates: List[Gate] = []
    for c in range(graph.m - 1, -1, -1):
        for r in range(graph.n - 1):
            if (r, c) in graph.deleted_vertical:
                continue
            table = model.edge_weights[(EdgeKind.VERTICAL, r, c)]
            gates.append(Gate(np.diag(table.reshape(-1)), (r, r + 1), f"W_e^v@({r},{c})"))
        for node in nodes_ending[c]:
            field = model.node_field(node)
            if not np.all(field == 1.0):
                gates.append(Gate(np.diag(field), (node.row,), f"W_i@({node.row},{node.start})"))
        for p, pendant in pendants_at[c]:
            gates.append(Gate(
                np.diag(pendant.field()),
                (pendant.vertex[0],),
                pendant.label or f"aux{p}@{pendant.vertex}",
            ))
        if c == 0:
            continue
        for r in range(graph.n):
            if (r, c - 1) in graph.contracted_horizontal:
                continue
            table = model.edge_weights[(EdgeKind.HORIZONTAL, r, c - 1)]
            gates.append(Gate(table, (r,), f"W_e^h@({r},{c - 1})"))

    circuit = Circuit(graph.n, q, tuple(gates))
    left, right, kappa = _boundary_states(model.boundary, graph.n, q)
    logger.info(
        f"Mapped edge model on {graph.n}x{graph.m} grid (tau={graph.tau}) to {len(gates)} gates"
    )
    return MappedCircuit(circuit, kappa, model.boundary.kind, left, right)


def periodic_ising_trace(model: EdgeModel, kappa: Optional[Kappa] = None) -> PartitionValue:
    """Z' for a planar circuit graph whose boundary rows are identified.

    The returned normalization is q^n * kappa, so `normalized` equals
    Z' / (2^n kappa) for q = 2, the normalized trace of the circuit.

    Raises:
        MalformedGeometry: if the model is not periodic
    """
    if model.boundary.kind != BoundaryKind.PERIODIC:
        raise MalformedGeometry("periodic_ising_trace needs a periodic boundary")
    mapped = edge_to_circuit(model)
    value = mapped.kappa.value * mapped.raw()
    normalization = Kappa(powq=model.graph.n, q=model.q) * (kappa or Kappa.one(model.q))
    return PartitionValue(value, normalization, Provenance.CIRCUIT)


def _temporal_face(model: LgtModel, position: LgtEdge, tau: int) -> LgtFace:
    site = model.at_slice(position, tau)[:3]
    a, b = sorted((position[3], model.time_axis))
    return (*site, a, b)


def lgt_to_circuit(model: LgtModel) -> MappedCircuit:
    """Map a Z2 gauge model to a qubit circuit along its time axis.

    The register holds the spatial edges of one time slice. Slice 0 is the
    input side. Temporal faces with both temporal edges gauge-fixed become
    single-qubit transfers W_f^t; spatial faces become diagonal gates on their
    unfixed edges (a face with three fixed edges gives a single-qubit gate).
    Faces with coupling 1 act as all-ones transfers or are skipped. Positions
    whose transfers are all identities and whose value is pinned by the
    boundary or by gauge fixing are substituted as constants.

    Raises:
        GaugeLoop: if the gauge-fixed edges close a loop
        UnsupportedFace: if a face with J != 0 contains an unfixed temporal edge
    """
    loop = validate_gauge_fixing(model)
    if loop is not None:
        raise GaugeLoop(loop.cycle)
    t = model.time_axis
    slices = model.slices
    positions = model.slice_positions()
    fixed = model.gauge_fixed
    kappa = Kappa.one(2)

    weighted: Dict[LgtEdge, List[LgtFace]] = {}
    for face in model.faces():
        if model.coupling(face) != 1.0:
            for edge in face_edges(face):
                weighted.setdefault(edge, []).append(face)
    for edge in model.edges():
        if edge[3] == t and edge not in fixed:
            if edge in weighted:
                raise UnsupportedFace(
                    f"Face {weighted[edge][0]} has J != 0 and contains the unfixed temporal "
                    f"edge {edge}"
                )
            kappa = kappa.times_pow2(1)

    def transfer(position: LgtEdge, tau: int) -> Tuple[LgtFace, np.ndarray]:
        face = _temporal_face(model, position, tau)
        coupling = model.coupling(face)
        if coupling == 1.0:
            return face, np.ones((2, 2), dtype=complex)
        offset = sum(fixed[e] for e in face_edges(face) if e[3] == t)
        matrix = np.array(
            [[parity_weight(coupling, s + s_in + offset, model.parity) for s_in in range(2)]
             for s in range(2)],
            dtype=complex,
        )
        return face, matrix

    transfers = {
        (p, tau): transfer(p, tau) for p in positions for tau in range(slices - 1)
    }
    identity = np.eye(2)

    constants: Dict[LgtEdge, int] = {}
    boundary = model.boundary
    for index, p in enumerate(positions):
        if any(not np.array_equal(transfers[(p, tau)][1], identity) for tau in range(slices - 1)):
            continue
        pins = [fixed[model.at_slice(p, tau)] for tau in range(slices)
                if model.at_slice(p, tau) in fixed]
        if boundary.kind == BoundaryKind.FIXED:
            pins += [boundary.right[index], boundary.left[index]]
        if not pins:
            continue
        constants[p] = pins[0]
        if any(v != pins[0] for v in pins):
            kappa = kappa.times(0.0)

    wires = [p for p in positions if p not in constants]
    wire_of = {p: i for i, p in enumerate(wires)}
    gates: List[Gate] = []
    for tau in range(slices):
        for p in wires:
            edge = model.at_slice(p, tau)
            if edge in fixed:
                projector = np.zeros(2, dtype=complex)
                projector[fixed[edge]] = 1.0
                gates.append(Gate(np.diag(projector), (wire_of[p],), f"gauge@{edge}"))
        for face in model.faces():
            if not model.is_spatial_face(face) or face[t] != tau:
                continue
            coupling = model.coupling(face)
            if coupling == 1.0:
                continue
            known = 0
            free: List[int] = []
            for edge in face_edges(face):
                p = model.at_slice(edge, 0)
                if p in constants:
                    known += constants[p]
                elif edge in fixed:
                    known += fixed[edge]
                else:
                    free.append(wire_of[p])
            if not free:
                kappa = kappa.times(parity_weight(coupling, known, model.parity))
                continue
            diagonal = [
                parity_weight(coupling, known + bin(bits).count("1"), model.parity)
                for bits in range(2 ** len(free))
            ]
            gates.append(Gate(np.diag(diagonal), tuple(free), f"W_f^s@{face}"))
        if tau == slices - 1:
            continue
        for p in wires:
            face, matrix = transfers[(p, tau)]
            if not np.array_equal(matrix, identity):
                gates.append(Gate(matrix, (wire_of[p],), f"W_f^t@{face}"))

    circuit = Circuit(len(wires), 2, tuple(gates))
    left_digits = right_digits = None
    if boundary.kind == BoundaryKind.FIXED:
        index_of = {p: i for i, p in enumerate(positions)}
        left_digits = [boundary.left[index_of[p]] for p in wires]
        right_digits = [boundary.right[index_of[p]] for p in wires]
    left, right, boundary_kappa = _boundary_states(
        boundary, len(wires), 2, left_digits, right_digits
    )
    logger.info(
        f"Mapped LGT model {model.extents} to {len(gates)} gates on {len(wires)} wires "
        f"({len(constants)} constant positions)"
    )
    return MappedCircuit(circuit, kappa * boundary_kappa, boundary.kind, left, right)


def map_model(model: LatticeModel) -> MappedCircuit:
    """Dispatch to the mapping of the model's family.

    Raises:
        MalformedGeometry: if the model type is not supported
    """
    if isinstance(model, VertexModel):
        return vertex_to_circuit(model)
    if isinstance(model, EdgeModel):
        return edge_to_circuit(model)
    if isinstance(model, LgtModel):
        return lgt_to_circuit(model)
    raise MalformedGeometry(f"Unsupported model type: {type(model).__name__}")
