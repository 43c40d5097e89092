"""
Lattice, circuit and document types.
"""
from latcirc.models.circuit import (
    BasisState,
    Circuit,
    Gate,
    Kappa,
    PartitionValue,
    ProductState,
    Provenance,
    StateSpec,
    StateVector,
)
from latcirc.models.lattice import (
    BoundaryCondition,
    BoundaryKind,
    EdgeKind,
    EdgeModel,
    FaceParity,
    GridEdge,
    GridNode,
    LatticeModel,
    LgtModel,
    Pendant,
    PlanarCircuitGraph,
    Vertex,
    VertexModel,
)

__all__ = [
    "BasisState",
    "Circuit",
    "Gate",
    "Kappa",
    "PartitionValue",
    "ProductState",
    "Provenance",
    "StateSpec",
    "StateVector",
    "BoundaryCondition",
    "BoundaryKind",
    "EdgeKind",
    "EdgeModel",
    "FaceParity",
    "GridEdge",
    "GridNode",
    "LatticeModel",
    "LgtModel",
    "Pendant",
    "PlanarCircuitGraph",
    "Vertex",
    "VertexModel",
]
