"""
JSON documents exchanged by the command line tools.

Complex numbers are always [re, im] pairs and every document carries
"latcirc_schema": 1.
"""
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter

from latcirc.core.exceptions import DimensionMismatch
from latcirc.models.circuit import BasisState, Circuit, Gate, Kappa, ProductState, StateSpec
from latcirc.models.lattice import (
    BoundaryCondition,
    BoundaryKind,
    EdgeKind,
    EdgeModel,
    FaceParity,
    GridEdge,
    LatticeModel,
    LgtModel,
    Pendant,
    PlanarCircuitGraph,
    Vertex,
    VertexModel,
)

SCHEMA_VERSION = 1

ComplexPair = Tuple[float, float]


def to_pair(value: complex) -> List[float]:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def from_pair(pair) -> complex:
    return complex(float(pair[0]), float(pair[1]))


def encode_array(array: np.ndarray) -> list:
    """Nested lists with a trailing [re, im] axis."""
    array = np.asarray(array, dtype=complex)
    return np.stack([array.real, array.imag], axis=-1).tolist()


def decode_array(data, shape: Optional[Tuple[int, ...]] = None) -> np.ndarray:
    """Inverse of encode_array, optionally reshaped.

    Raises:
        DimensionMismatch: if the data is not a pair array of the expected size
    """
    raw = np.asarray(data, dtype=float)
    if raw.ndim == 0 or raw.shape[-1] != 2:
        raise DimensionMismatch(f"Expected [re, im] pairs, got array of shape {raw.shape}")
    values = raw[..., 0] + 1j * raw[..., 1]
    if shape is not None:
        if values.size != int(np.prod(shape)):
            raise DimensionMismatch(f"Expected {int(np.prod(shape))} entries, got {values.size}")
        values = values.reshape(shape)
    return values


class Document(BaseModel):
    """Base for versioned documents."""

    latcirc_schema: Literal[1] = SCHEMA_VERSION


class BoundaryDocument(BaseModel):
    kind: BoundaryKind
    left: Optional[List[int]] = None
    right: Optional[List[int]] = None


class VertexEntry(BaseModel):
    column: int
    wire: int
    weights: List[ComplexPair] = Field(description="q^4 weights, row-major over (i,j,k,l)")


class VertexDocument(Document):
    family: Literal["vertex"] = "vertex"
    q: int = 2
    width: int
    vertices: List[VertexEntry]
    boundary: BoundaryDocument


class GraphDocument(BaseModel):
    n: int
    m: int
    deleted_vertical: List[Tuple[int, int]] = []
    contracted_horizontal: List[Tuple[int, int]] = []


class EdgeWeightEntry(BaseModel):
    edge: Tuple[EdgeKind, int, int]
    table: List[List[ComplexPair]]


class VertexFieldEntry(BaseModel):
    vertex: Tuple[int, int]
    table: List[ComplexPair]


class PendantEntry(BaseModel):
    vertex: Tuple[int, int]
    value: int
    table: List[List[ComplexPair]]
    label: str = ""


class EdgeDocument(Document):
    family: Literal["edge"] = "edge"
    q: int = 2
    graph: GraphDocument
    edge_weights: List[EdgeWeightEntry]
    vertex_weights: List[VertexFieldEntry] = []
    pendants: List[PendantEntry] = []
    boundary: BoundaryDocument


class FaceEntry(BaseModel):
    face: Tuple[int, int, int, int, int]
    coupling: ComplexPair


class GaugeEntry(BaseModel):
    edge: Tuple[int, int, int, int]
    value: int


class LgtDocument(Document):
    family: Literal["lgt"] = "lgt"
    q: Literal[2] = 2
    extents: Tuple[int, int, int]
    time_axis: int = 2
    parity: FaceParity = FaceParity.EVEN
    faces: List[FaceEntry] = []
    gauge_fixed: List[GaugeEntry] = []
    boundary: BoundaryDocument


ModelDocument = Annotated[
    Union[VertexDocument, EdgeDocument, LgtDocument], Field(discriminator="family")
]
model_adapter: TypeAdapter = TypeAdapter(ModelDocument)


def _boundary_document(boundary: BoundaryCondition) -> BoundaryDocument:
    return BoundaryDocument(
        kind=boundary.kind,
        left=list(boundary.left) if boundary.left is not None else None,
        right=list(boundary.right) if boundary.right is not None else None,
    )


def _boundary(document: BoundaryDocument) -> BoundaryCondition:
    if document.kind == BoundaryKind.FIXED:
        return BoundaryCondition.fixed(document.left or [], document.right or [])
    return BoundaryCondition(document.kind)


def model_to_document(model: LatticeModel) -> Document:
    """Convert a lattice model to its JSON document."""
    if isinstance(model, VertexModel):
        return VertexDocument(
            q=model.q,
            width=model.width,
            vertices=[
                VertexEntry(column=v.column, wire=v.wire,
                            weights=encode_array(v.weights.reshape(-1)))
                for v in model.vertices
            ],
            boundary=_boundary_document(model.boundary),
        )
    if isinstance(model, EdgeModel):
        graph = model.graph
        return EdgeDocument(
            q=model.q,
            graph=GraphDocument(
                n=graph.n,
                m=graph.m,
                deleted_vertical=sorted(graph.deleted_vertical),
                contracted_horizontal=sorted(graph.contracted_horizontal),
            ),
            edge_weights=[
                EdgeWeightEntry(edge=(e.kind, e.row, e.col), table=encode_array(t))
                for e, t in sorted(model.edge_weights.items())
            ],
            vertex_weights=[
                VertexFieldEntry(vertex=v, table=encode_array(t))
                for v, t in sorted(model.vertex_weights.items())
            ],
            pendants=[
                PendantEntry(vertex=p.vertex, value=p.value, table=encode_array(p.table),
                             label=p.label)
                for p in model.pendants
            ],
            boundary=_boundary_document(model.boundary),
        )
    return LgtDocument(
        extents=model.extents,
        time_axis=model.time_axis,
        parity=model.parity,
        faces=[FaceEntry(face=f, coupling=to_pair(w))
               for f, w in sorted(model.face_couplings.items())],
        gauge_fixed=[GaugeEntry(edge=e, value=v) for e, v in sorted(model.gauge_fixed.items())],
        boundary=_boundary_document(model.boundary),
    )


def document_to_model(document: Document) -> LatticeModel:
    """Build the lattice model described by a validated document."""
    if isinstance(document, VertexDocument):
        q = document.q
        vertices = tuple(
            Vertex(v.column, v.wire, decode_array(v.weights, (q,) * 4)) for v in document.vertices
        )
        return VertexModel(document.width, q, vertices, _boundary(document.boundary))
    if isinstance(document, EdgeDocument):
        q = document.q
        graph = PlanarCircuitGraph(
            document.graph.n,
            document.graph.m,
            frozenset(map(tuple, document.graph.deleted_vertical)),
            frozenset(map(tuple, document.graph.contracted_horizontal)),
        )
        return EdgeModel(
            graph,
            q,
            {GridEdge(*w.edge): decode_array(w.table, (q, q)) for w in document.edge_weights},
            {tuple(f.vertex): decode_array(f.table, (q,)) for f in document.vertex_weights},
            _boundary(document.boundary),
            tuple(Pendant(tuple(p.vertex), p.value, decode_array(p.table, (q, q)), p.label)
                  for p in document.pendants),
        )
    if isinstance(document, LgtDocument):
        return LgtModel(
            document.extents,
            {tuple(f.face): from_pair(f.coupling) for f in document.faces},
            {tuple(g.edge): g.value for g in document.gauge_fixed},
            _boundary(document.boundary),
            document.time_axis,
            document.parity,
        )
    raise DimensionMismatch(f"Unsupported document type: {type(document).__name__}")


def load_model(data: Dict[str, Any]) -> LatticeModel:
    """Validate a JSON object and build the model it describes."""
    return document_to_model(model_adapter.validate_python(data))


def dump_model(model: LatticeModel) -> Dict[str, Any]:
    return model_to_document(model).model_dump(mode="json")


# ---------------------------------------------------------------------------
# Circuits
# ---------------------------------------------------------------------------

class GateDocument(BaseModel):
    targets: List[int]
    matrix: List[List[ComplexPair]]
    label: str = ""


class CircuitDocument(Document):
    kind: Literal["circuit"] = "circuit"
    q: int = 2
    width: int
    prefactor: ComplexPair = (1.0, 0.0)
    gates: List[GateDocument] = []


class StateDocument(BaseModel):
    kind: Literal["basis", "product"]
    digits: Optional[List[int]] = None
    factors: Optional[List[List[ComplexPair]]] = None


class KappaDocument(BaseModel):
    pow2: str = Field(description="Exact power of two as a fraction string")
    powq: int
    q: int
    residual: ComplexPair


class MappedCircuitDocument(CircuitDocument):
    kind: Literal["mapped"] = "mapped"  # type: ignore[assignment]
    mode: BoundaryKind
    kappa: ComplexPair
    kappa_parts: KappaDocument
    left: Optional[StateDocument] = None
    right: Optional[StateDocument] = None


class LogicalOpDocument(BaseModel):
    gate: str
    targets: List[int]
    params: Dict[str, float] = {}


class LogicalCircuitDocument(Document):
    kind: Literal["logical"] = "logical"
    width: int
    ops: List[LogicalOpDocument] = []


CircuitLikeDocument = Annotated[
    Union[CircuitDocument, MappedCircuitDocument, LogicalCircuitDocument],
    Field(discriminator="kind"),
]
circuit_adapter: TypeAdapter = TypeAdapter(CircuitLikeDocument)


def circuit_to_document(circuit: Circuit) -> CircuitDocument:
    return CircuitDocument(
        q=circuit.q,
        width=circuit.width,
        prefactor=to_pair(circuit.prefactor),
        gates=[GateDocument(targets=list(g.targets), matrix=encode_array(g.matrix), label=g.label)
               for g in circuit.gates],
    )


def document_to_circuit(document: CircuitDocument) -> Circuit:
    q = document.q
    gates = []
    for g in document.gates:
        size = q ** len(g.targets)
        gates.append(Gate(decode_array(g.matrix, (size, size)), tuple(g.targets), g.label))
    return Circuit(document.width, q, tuple(gates), from_pair(document.prefactor))


def state_to_document(state: Optional[StateSpec]) -> Optional[StateDocument]:
    if state is None:
        return None
    if isinstance(state, BasisState):
        return StateDocument(kind="basis", digits=list(state.digits))
    if isinstance(state, ProductState):
        return StateDocument(kind="product", factors=[encode_array(f) for f in state.factors])
    raise DimensionMismatch("Dense state vectors are not serialized")


def document_to_state(document: Optional[StateDocument]) -> Optional[StateSpec]:
    if document is None:
        return None
    if document.kind == "basis":
        return BasisState(tuple(document.digits or ()))
    return ProductState(tuple(decode_array(f) for f in document.factors or ()))


def kappa_to_document(kappa: Kappa) -> KappaDocument:
    return KappaDocument(
        pow2=str(kappa.pow2), powq=kappa.powq, q=kappa.q, residual=to_pair(kappa.residual)
    )


def document_to_kappa(document: KappaDocument) -> Kappa:
    return Kappa(Fraction(document.pow2), document.powq, document.q, from_pair(document.residual))


__all__ = [
    "SCHEMA_VERSION",
    "to_pair",
    "from_pair",
    "encode_array",
    "decode_array",
    "model_adapter",
    "load_model",
    "dump_model",
    "model_to_document",
    "document_to_model",
    "CircuitDocument",
    "MappedCircuitDocument",
    "LogicalCircuitDocument",
    "LogicalOpDocument",
    "circuit_adapter",
    "circuit_to_document",
    "document_to_circuit",
    "state_to_document",
    "document_to_state",
    "kappa_to_document",
    "document_to_kappa",
]
