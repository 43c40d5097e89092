"""
Classical lattice model definitions.

Weights are stored directly as complex Boltzmann factors. Tables follow one
orientation throughout: horizontal edge tables are indexed [left, right],
vertical edge tables [upper row, lower row], vertex tensors [i, j, k, l] with
(i, j) on the left of the vertex and (k, l) on the right.
"""
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Callable,
    Dict,
    FrozenSet,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from latcirc.core.exceptions import InvalidConfig, MalformedGeometry

GridVertex = Tuple[int, int]
LgtEdge = Tuple[int, int, int, int]
LgtFace = Tuple[int, int, int, int, int]


def _frozen(values, dtype=complex) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


class BoundaryKind(str, Enum):
    """Boundary condition families."""
    FIXED = "fixed"
    OPEN = "open"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class BoundaryCondition:
    """Left/right boundary treatment of a lattice.

    For FIXED, `left` and `right` list one spin value per boundary position.
    """

    kind: BoundaryKind
    left: Optional[Tuple[int, ...]] = None
    right: Optional[Tuple[int, ...]] = None

    @classmethod
    def fixed(cls, left: Sequence[int], right: Sequence[int]) -> "BoundaryCondition":
        return cls(BoundaryKind.FIXED, tuple(int(s) for s in left), tuple(int(s) for s in right))

    @classmethod
    def open(cls) -> "BoundaryCondition":
        return cls(BoundaryKind.OPEN)

    @classmethod
    def periodic(cls) -> "BoundaryCondition":
        return cls(BoundaryKind.PERIODIC)

    def validate(self, size: int, q: int) -> None:
        """Check the fixed configurations against the boundary size and q.

        Raises:
            MalformedGeometry: wrong length or missing configuration
            InvalidConfig: a spin value outside 0..q-1
        """
        if self.kind != BoundaryKind.FIXED:
            return
        if self.left is None or self.right is None:
            raise MalformedGeometry("Fixed boundary needs both left and right configurations")
        for side, config in (("left", self.left), ("right", self.right)):
            if len(config) != size:
                raise MalformedGeometry(
                    f"Fixed {side} boundary has {len(config)} spins, expected {size}"
                )
            if any(s < 0 or s >= q for s in config):
                raise InvalidConfig(f"Fixed {side} boundary {config} has values outside 0..{q - 1}")


# ---------------------------------------------------------------------------
# Vertex models
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Vertex:
    """A four-leg vertex at `column` joining wires (wire, wire + 1)."""

    column: int
    wire: int
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", _frozen(self.weights))


@dataclass(frozen=True, eq=False)
class VertexModel:
    """Vertex model on a tilted lattice.

    Spins live on wire segments. Columns are ordered left to right; a wire
    segment runs between consecutive vertices touching that wire.
    """

    width: int
    q: int
    vertices: Tuple[Vertex, ...]
    boundary: BoundaryCondition = field(default_factory=BoundaryCondition.open)

    def __post_init__(self):
        vertices = tuple(sorted(self.vertices, key=lambda v: (v.column, v.wire)))
        object.__setattr__(self, "vertices", vertices)
        if self.width < 2:
            raise MalformedGeometry(f"Vertex model needs at least 2 wires, got {self.width}")
        occupied: Dict[Tuple[int, int], int] = {}
        for vertex in vertices:
            if not 0 <= vertex.wire < self.width - 1:
                raise MalformedGeometry(
                    f"Vertex at column {vertex.column} uses wires "
                    f"({vertex.wire}, {vertex.wire + 1}) outside width {self.width}"
                )
            if vertex.column < 0:
                raise MalformedGeometry(f"Negative column {vertex.column}")
            if vertex.weights.shape != (self.q,) * 4:
                raise MalformedGeometry(
                    f"Vertex weights have shape {vertex.weights.shape}, expected {(self.q,) * 4}"
                )
            for wire in (vertex.wire, vertex.wire + 1):
                key = (vertex.column, wire)
                if key in occupied:
                    raise MalformedGeometry(
                        f"Wire {wire} is used twice in column {vertex.column}"
                    )
                occupied[key] = vertex.wire
        self.boundary.validate(self.boundary_size, self.q)

    @property
    def boundary_size(self) -> int:
        return self.width

    @property
    def columns(self) -> int:
        return 1 + max((v.column for v in self.vertices), default=-1)

    @classmethod
    def tilted_grid(
        cls,
        rows: int,
        cols: int,
        weights: Union[np.ndarray, Callable[[int, int], np.ndarray]],
        boundary: Optional[BoundaryCondition] = None,
        q: int = 2,
    ) -> "VertexModel":
        """Build the brickwork tilted lattice with 2*rows wires.

        Even columns hold vertices on wires (0,1), (2,3), ...; odd columns on
        (1,2), (3,4), .... `weights` is either one tensor for every vertex or a
        callable (column, wire) -> tensor.
        """
        if rows < 1 or cols < 1:
            raise MalformedGeometry(f"Tilted grid needs rows, cols >= 1, got {rows}x{cols}")
        width = 2 * rows
        vertices = []
        for column in range(cols):
            for wire in range(column % 2, width - 1, 2):
                tensor = weights(column, wire) if callable(weights) else weights
                vertices.append(Vertex(column, wire, tensor))
        return cls(width, q, tuple(vertices), boundary or BoundaryCondition.open())


# ---------------------------------------------------------------------------
# Edge models on planar circuit graphs
# ---------------------------------------------------------------------------

class EdgeKind(str, Enum):
    """Grid edge orientation."""
    HORIZONTAL = "h"
    VERTICAL = "v"


class GridEdge(NamedTuple):
    """Edge of the originating n x m grid.

    Horizontal (row, col) joins (row, col)-(row, col + 1); vertical (row, col)
    joins (row, col)-(row + 1, col).
    """

    kind: EdgeKind
    row: int
    col: int


class GridNode(NamedTuple):
    """A run of grid vertices in one row merged by contracted horizontal edges."""

    row: int
    start: int
    end: int


@dataclass(frozen=True)
class PlanarCircuitGraph:
    """An n x m grid with deleted vertical edges and contracted horizontal edges."""

    n: int
    m: int
    deleted_vertical: FrozenSet[GridVertex] = frozenset()
    contracted_horizontal: FrozenSet[GridVertex] = frozenset()

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise MalformedGeometry(f"Grid must be at least 1x1, got {self.n}x{self.m}")
        deleted = frozenset((int(r), int(c)) for r, c in self.deleted_vertical)
        contracted = frozenset((int(r), int(c)) for r, c in self.contracted_horizontal)
        for r, c in deleted:
            if not (0 <= r < self.n - 1 and 0 <= c < self.m):
                raise MalformedGeometry(f"Deleted vertical edge ({r}, {c}) is not in the grid")
        for r, c in contracted:
            if not (0 <= r < self.n and 0 <= c < self.m - 1):
                raise MalformedGeometry(f"Contracted horizontal edge ({r}, {c}) is not in the grid")
        object.__setattr__(self, "deleted_vertical", deleted)
        object.__setattr__(self, "contracted_horizontal", contracted)

    @classmethod
    def full(cls, n: int, m: int) -> "PlanarCircuitGraph":
        return cls(n, m)

    def nodes(self) -> List[GridNode]:
        """Merged vertices, row by row, left to right."""
        result = []
        for r in range(self.n):
            start = 0
            for c in range(self.m):
                if (r, c) not in self.contracted_horizontal:
                    result.append(GridNode(r, start, c))
                    start = c + 1
        return result

    def node_index(self) -> Dict[GridVertex, int]:
        """Map every grid vertex to the index of its merged node."""
        index = {}
        for i, node in enumerate(self.nodes()):
            for c in range(node.start, node.end + 1):
                index[(node.row, c)] = i
        return index

    def horizontal_edges(self) -> List[GridEdge]:
        return [
            GridEdge(EdgeKind.HORIZONTAL, r, c)
            for r in range(self.n)
            for c in range(self.m - 1)
            if (r, c) not in self.contracted_horizontal
        ]

    def vertical_edges(self) -> List[GridEdge]:
        return [
            GridEdge(EdgeKind.VERTICAL, r, c)
            for c in range(self.m)
            for r in range(self.n - 1)
            if (r, c) not in self.deleted_vertical
        ]

    def edges(self) -> List[GridEdge]:
        return self.horizontal_edges() + self.vertical_edges()

    @property
    def tau(self) -> int:
        """Number of horizontal edges left after contraction."""
        return len(self.horizontal_edges())

    def edge_endpoints(self, edge: GridEdge) -> Tuple[GridVertex, GridVertex]:
        if edge.kind == EdgeKind.HORIZONTAL:
            return (edge.row, edge.col), (edge.row, edge.col + 1)
        return (edge.row, edge.col), (edge.row + 1, edge.col)


@dataclass(frozen=True, eq=False)
class Pendant:
    """An auxiliary spin fixed to `value`, attached to grid vertex `vertex`.

    `table` is indexed [vertex spin, auxiliary spin].
    """

    vertex: GridVertex
    value: int
    table: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "vertex", (int(self.vertex[0]), int(self.vertex[1])))
        object.__setattr__(self, "table", _frozen(self.table))

    def field(self) -> np.ndarray:
        """The induced single-spin weight on the attached vertex."""
        return self.table[:, self.value]


def potts_table(q: int, mu: complex, nu: complex) -> np.ndarray:
    """q x q table with `mu` on the diagonal and `nu` elsewhere."""
    table = np.full((q, q), nu, dtype=complex)
    np.fill_diagonal(table, mu)
    return table


def ising_table(x: complex) -> np.ndarray:
    return np.array([[x, 1.0], [1.0, x]], dtype=complex)


@dataclass(frozen=True, eq=False)
class EdgeModel:
    """Spins on the merged vertices of a planar circuit graph, weights on edges."""

    graph: PlanarCircuitGraph
    q: int
    edge_weights: Mapping[GridEdge, np.ndarray]
    vertex_weights: Mapping[GridVertex, np.ndarray] = field(default_factory=dict)
    boundary: BoundaryCondition = field(default_factory=BoundaryCondition.open)
    pendants: Tuple[Pendant, ...] = ()

    def __post_init__(self):
        edge_weights = {GridEdge(EdgeKind(e[0]), int(e[1]), int(e[2])): _frozen(t)
                        for e, t in self.edge_weights.items()}
        vertex_weights = {
            (int(v[0]), int(v[1])): _frozen(t) for v, t in self.vertex_weights.items()
        }
        expected = set(self.graph.edges())
        if set(edge_weights) != expected:
            missing = sorted(expected - set(edge_weights))
            extra = sorted(set(edge_weights) - expected)
            raise MalformedGeometry(
                f"Edge weights must cover exactly the graph edges; missing {missing[:4]}, "
                f"unexpected {extra[:4]}"
            )
        for edge, table in edge_weights.items():
            if table.shape != (self.q, self.q):
                raise MalformedGeometry(f"Edge {tuple(edge)} table has shape {table.shape}")
        for vertex, table in vertex_weights.items():
            if not (0 <= vertex[0] < self.graph.n and 0 <= vertex[1] < self.graph.m):
                raise MalformedGeometry(f"Vertex field at {vertex} is outside the grid")
            if table.shape != (self.q,):
                raise MalformedGeometry(f"Vertex {vertex} field has shape {table.shape}")
        pendants = tuple(self.pendants)
        for pendant in pendants:
            r, c = pendant.vertex
            if not (0 <= r < self.graph.n and 0 <= c < self.graph.m):
                raise MalformedGeometry(f"Pendant at {pendant.vertex} is outside the grid")
            if pendant.table.shape != (self.q, self.q):
                raise MalformedGeometry(f"Pendant table has shape {pendant.table.shape}")
            if not 0 <= pendant.value < self.q:
                raise InvalidConfig(f"Pendant value {pendant.value} outside 0..{self.q - 1}")
        object.__setattr__(self, "edge_weights", edge_weights)
        object.__setattr__(self, "vertex_weights", vertex_weights)
        object.__setattr__(self, "pendants", pendants)
        self.boundary.validate(self.boundary_size, self.q)

    @property
    def boundary_size(self) -> int:
        return self.graph.n

    def node_field(self, node: GridNode) -> np.ndarray:
        """Product of the vertex fields merged into `node`."""
        result = np.ones(self.q, dtype=complex)
        for c in range(node.start, node.end + 1):
            table = self.vertex_weights.get((node.row, c))
            if table is not None:
                result = result * table
        return result

    def with_boundary(self, boundary: BoundaryCondition) -> "EdgeModel":
        return EdgeModel(self.graph, self.q, self.edge_weights, self.vertex_weights,
                         boundary, self.pendants)

    @classmethod
    def ising(
        cls,
        graph: PlanarCircuitGraph,
        x: Union[complex, Mapping[GridEdge, complex]],
        y: Union[complex, Mapping[GridVertex, complex], None] = None,
        boundary: Optional[BoundaryCondition] = None,
    ) -> "EdgeModel":
        """Ising model with edge factors x = e^{beta J_e} and fields y = e^{beta h_a}.

        A scalar `y` places one field factor on every merged vertex.
        """
        edges = graph.edges()
        if isinstance(x, Mapping):
            tables = {e: ising_table(x[e]) for e in edges}
        else:
            tables = {e: ising_table(x) for e in edges}
        fields: Dict[GridVertex, np.ndarray] = {}
        if isinstance(y, Mapping):
            fields = {v: np.array([h, 1.0], dtype=complex) for v, h in y.items()}
        elif y is not None:
            fields = {(node.row, node.start): np.array([y, 1.0], dtype=complex)
                      for node in graph.nodes()}
        return cls(graph, 2, tables, fields, boundary or BoundaryCondition.open())

    @classmethod
    def ising_from_couplings(
        cls,
        graph: PlanarCircuitGraph,
        beta: float,
        coupling: float,
        field_strength: float = 0.0,
        boundary: Optional[BoundaryCondition] = None,
    ) -> "EdgeModel":
        """Ising model from physical (beta, J, h) values."""
        y = math.exp(beta * field_strength) if field_strength else None
        return cls.ising(graph, math.exp(beta * coupling), y, boundary)

    @classmethod
    def potts(
        cls,
        graph: PlanarCircuitGraph,
        q: int,
        mu: Union[complex, Mapping[GridEdge, complex]],
        nu: Union[complex, Mapping[GridEdge, complex]] = 1.0,
        boundary: Optional[BoundaryCondition] = None,
    ) -> "EdgeModel":
        """Potts model: weight mu for equal neighbours, nu otherwise."""
        tables = {}
        for e in graph.edges():
            m = mu[e] if isinstance(mu, Mapping) else mu
            v = nu[e] if isinstance(nu, Mapping) else nu
            tables[e] = potts_table(q, m, v)
        return cls(graph, q, tables, {}, boundary or BoundaryCondition.open())


# ---------------------------------------------------------------------------
# Z2 lattice gauge theory
# ---------------------------------------------------------------------------

class FaceParity(str, Enum):
    """Which plaquette parity receives the coupling e^{beta J}."""
    EVEN = "even"
    ODD = "odd"


def _shift(site: Sequence[int], axis: int, amount: int = 1) -> Tuple[int, ...]:
    moved = list(site)
    moved[axis] += amount
    return tuple(moved)


def lattice_edges(extents: Sequence[int]) -> List[LgtEdge]:
    """All edges (x, y, z, axis) of an open cubic lattice with `extents` vertices."""
    result = []
    for site in itertools.product(*(range(e) for e in extents)):
        for axis in range(3):
            if site[axis] + 1 < extents[axis]:
                result.append((*site, axis))
    return sorted(result)


def lattice_faces(extents: Sequence[int]) -> List[LgtFace]:
    """All plaquettes (x, y, z, a, b), a < b, of an open cubic lattice."""
    result = []
    for site in itertools.product(*(range(e) for e in extents)):
        for a, b in ((0, 1), (0, 2), (1, 2)):
            if site[a] + 1 < extents[a] and site[b] + 1 < extents[b]:
                result.append((*site, a, b))
    return sorted(result)


def face_edges(face: LgtFace) -> Tuple[LgtEdge, LgtEdge, LgtEdge, LgtEdge]:
    """The four boundary edges of a plaquette."""
    site, a, b = face[:3], face[3], face[4]
    return (
        (*site, a),
        (*site, b),
        (*_shift(site, b), a),
        (*_shift(site, a), b),
    )


def edge_endpoints(edge: LgtEdge) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    site, axis = edge[:3], edge[3]
    return tuple(site), _shift(site, axis)


def face_weight_table(coupling: complex, parity: FaceParity) -> np.ndarray:
    """2x2x2x2 table: `coupling` on the weighted parity class, 1 elsewhere."""
    weighted = 0 if parity == FaceParity.EVEN else 1
    table = np.ones((2, 2, 2, 2), dtype=complex)
    for bits in itertools.product(range(2), repeat=4):
        if sum(bits) % 2 == weighted:
            table[bits] = coupling
    return table


def parity_weight(coupling: complex, parity_bit: int, parity: FaceParity) -> complex:
    weighted = 0 if parity == FaceParity.EVEN else 1
    return coupling if parity_bit % 2 == weighted else 1.0


@dataclass(frozen=True)
class LgtModel:
    """Z2 gauge theory on an open cubic lattice.

    `extents` counts vertices per axis. Faces missing from `face_couplings`
    have coupling 1 (J = 0). Boundary configurations refer to the spatial
    edges of the first (right) and last (left) slice along `time_axis`, in
    the order of `slice_positions()`.
    """

    extents: Tuple[int, int, int]
    face_couplings: Mapping[LgtFace, complex] = field(default_factory=dict)
    gauge_fixed: Mapping[LgtEdge, int] = field(default_factory=dict)
    boundary: BoundaryCondition = field(default_factory=BoundaryCondition.open)
    time_axis: int = 2
    parity: FaceParity = FaceParity.EVEN

    def __post_init__(self):
        extents = tuple(int(e) for e in self.extents)
        if len(extents) != 3 or any(e < 1 for e in extents):
            raise MalformedGeometry(f"LGT extents must be three positive counts, got {extents}")
        if self.time_axis not in (0, 1, 2):
            raise MalformedGeometry(f"Time axis must be 0, 1 or 2, got {self.time_axis}")
        object.__setattr__(self, "extents", extents)
        faces = set(lattice_faces(extents))
        edges = set(lattice_edges(extents))
        couplings = {tuple(int(i) for i in f): complex(w) for f, w in self.face_couplings.items()}
        for face in couplings:
            if face not in faces:
                raise MalformedGeometry(f"Face {face} is not in a lattice of extents {extents}")
        fixed = {tuple(int(i) for i in e): int(s) for e, s in self.gauge_fixed.items()}
        for edge, value in fixed.items():
            if edge not in edges:
                raise MalformedGeometry(f"Edge {edge} is not in a lattice of extents {extents}")
            if value not in (0, 1):
                raise InvalidConfig(f"Gauge-fixed value {value} on {edge} must be 0 or 1")
        object.__setattr__(self, "face_couplings", couplings)
        object.__setattr__(self, "gauge_fixed", fixed)
        object.__setattr__(self, "parity", FaceParity(self.parity))
        self.boundary.validate(self.boundary_size, self.q)

    @property
    def q(self) -> int:
        return 2

    @property
    def slices(self) -> int:
        return self.extents[self.time_axis]

    def coupling(self, face: LgtFace) -> complex:
        return self.face_couplings.get(face, 1.0)

    def edges(self) -> List[LgtEdge]:
        return lattice_edges(self.extents)

    def faces(self) -> List[LgtFace]:
        return lattice_faces(self.extents)

    def slice_positions(self) -> List[LgtEdge]:
        """Spatial edges of slice 0, the register positions of the time evolution."""
        t = self.time_axis
        return [e for e in self.edges() if e[3] != t and e[t] == 0]

    def at_slice(self, position: LgtEdge, tau: int) -> LgtEdge:
        moved = list(position)
        moved[self.time_axis] = tau
        return tuple(moved)  # type: ignore[return-value]

    def is_temporal(self, edge: LgtEdge) -> bool:
        return edge[3] == self.time_axis

    def is_spatial_face(self, face: LgtFace) -> bool:
        return self.time_axis not in (face[3], face[4])

    @property
    def boundary_size(self) -> int:
        return len(self.slice_positions())

    def table(self, face: LgtFace) -> np.ndarray:
        return face_weight_table(self.coupling(face), self.parity)

    def incident_edges(self, site: Sequence[int]) -> List[LgtEdge]:
        """Edges touching vertex `site`."""
        result = []
        for axis in range(3):
            if site[axis] + 1 < self.extents[axis]:
                result.append((*site, axis))
            if site[axis] >= 1:
                result.append((*_shift(site, axis, -1), axis))
        return result  # type: ignore[return-value]


LatticeModel = Union[VertexModel, EdgeModel, LgtModel]
