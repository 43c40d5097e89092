"""
Spin systems and the brute-force partition function oracle.
"""
import itertools
import logging
import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterator, List, Optional, Tuple

import networkx as nx
import numpy as np

from latcirc.core.config import settings
from latcirc.core.exceptions import EnumerationTooLarge, InvalidConfig, MalformedGeometry
from latcirc.models.circuit import Kappa, PartitionValue, Provenance
from latcirc.models.lattice import (
    BoundaryKind,
    EdgeModel,
    LatticeModel,
    LgtEdge,
    LgtModel,
    VertexModel,
    edge_endpoints,
    face_edges,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Factor:
    """A weight table over an ordered tuple of spins."""

    spins: Tuple[int, ...]
    table: np.ndarray
    label: str = ""


@dataclass(frozen=True, eq=False)
class SpinSystem:
    """Flat factor-graph view of a lattice model.

    Spins are numbered canonically; `labels[i]` names the lattice object that
    carries spin i. `scalar` is 0 when fixed values contradict each other.
    """

    q: int
    labels: Tuple[Hashable, ...]
    fixed: Dict[int, int]
    factors: Tuple[Factor, ...]
    scalar: complex = 1.0

    @property
    def num_spins(self) -> int:
        return len(self.labels)

    def free_spins(self) -> List[int]:
        return [s for s in range(self.num_spins) if s not in self.fixed]

    def weight(self, assignment: Dict[int, int]) -> complex:
        """Total Boltzmann weight of a complete spin assignment."""
        value = complex(self.scalar)
        for factor in self.factors:
            value *= factor.table[tuple(assignment[s] for s in factor.spins)]
        return value


@dataclass(frozen=True)
class LoopError:
    """A closed loop found among gauge-fixed edges."""

    cycle: Tuple[LgtEdge, ...]

    @property
    def message(self) -> str:
        return f"Gauge-fixed edges close a loop of length {len(self.cycle)}: {list(self.cycle)}"


class _SystemBuilder:
    def __init__(self, q: int):
        self.q = q
        self.labels: List[Hashable] = []
        self.fixed: Dict[int, int] = {}
        self.factors: List[Factor] = []
        self.scalar: complex = 1.0

    def spin(self, label: Hashable) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def fix(self, spin: int, value: int) -> None:
        if not 0 <= value < self.q:
            raise InvalidConfig(
                f"Fixed value {value} for {self.labels[spin]} outside 0..{self.q - 1}"
            )
        if spin in self.fixed and self.fixed[spin] != value:
            self.scalar = 0.0
            return
        self.fixed[spin] = value

    def factor(self, spins, table, label: str = "") -> None:
        self.factors.append(Factor(tuple(spins), np.asarray(table, dtype=complex), label))

    def build(self) -> SpinSystem:
        return SpinSystem(
            self.q, tuple(self.labels), dict(self.fixed), tuple(self.factors), self.scalar
        )


def _vertex_system(model: VertexModel) -> SpinSystem:
    builder = _SystemBuilder(model.q)
    periodic = model.boundary.kind == BoundaryKind.PERIODIC
    touches = [0] * model.width
    for vertex in model.vertices:
        touches[vertex.wire] += 1
        touches[vertex.wire + 1] += 1

    first = [builder.spin(("wire", w, 0)) for w in range(model.width)]
    current = list(first)
    seen = [0] * model.width

    def next_segment(wire: int) -> int:
        seen[wire] += 1
        if periodic and seen[wire] == touches[wire]:
            return first[wire]
        return builder.spin(("wire", wire, seen[wire]))

    for vertex in model.vertices:
        w = vertex.wire
        i, j = current[w], current[w + 1]
        k, l = next_segment(w), next_segment(w + 1)
        builder.factor((i, j, k, l), vertex.weights, f"vertex@({vertex.column},{w})")
        current[w], current[w + 1] = k, l

    if model.boundary.kind == BoundaryKind.FIXED:
        for w in range(model.width):
            builder.fix(first[w], model.boundary.left[w])
            builder.fix(current[w], model.boundary.right[w])
    return builder.build()


def _edge_system(model: EdgeModel) -> SpinSystem:
    graph = model.graph
    builder = _SystemBuilder(model.q)
    nodes = graph.nodes()
    periodic = model.boundary.kind == BoundaryKind.PERIODIC
    row_nodes: Dict[int, List[int]] = {r: [] for r in range(graph.n)}
    for i, node in enumerate(nodes):
        row_nodes[node.row].append(i)

    node_spin: Dict[int, int] = {}
    for r in range(graph.n):
        for position, i in enumerate(row_nodes[r]):
            is_last = position == len(row_nodes[r]) - 1
            if periodic and is_last and position > 0:
                node_spin[i] = node_spin[row_nodes[r][0]]
            else:
                node = nodes[i]
                node_spin[i] = builder.spin(("node", node.row, node.start))

    index = graph.node_index()
    for edge in graph.edges():
        a, b = graph.edge_endpoints(edge)
        builder.factor(
            (node_spin[index[a]], node_spin[index[b]]),
            model.edge_weights[edge],
            f"edge@{edge.kind.value}({edge.row},{edge.col})",
        )
    for i, node in enumerate(nodes):
        table = model.node_field(node)
        if not np.all(table == 1.0):
            builder.factor((node_spin[i],), table, f"field@({node.row},{node.start})")
    for p, pendant in enumerate(model.pendants):
        aux = builder.spin(("pendant", p))
        builder.fix(aux, pendant.value)
        builder.factor((node_spin[index[pendant.vertex]], aux), pendant.table, f"pendant{p}")

    if model.boundary.kind == BoundaryKind.FIXED:
        for r in range(graph.n):
            builder.fix(node_spin[row_nodes[r][0]], model.boundary.left[r])
            builder.fix(node_spin[row_nodes[r][-1]], model.boundary.right[r])
    return builder.build()


def _lgt_system(model: LgtModel) -> SpinSystem:
    builder = _SystemBuilder(2)
    t = model.time_axis
    last = model.slices - 1
    periodic = model.boundary.kind == BoundaryKind.PERIODIC
    spin_of: Dict[LgtEdge, int] = {}
    for edge in model.edges():
        if periodic and last > 0 and edge[3] != t and edge[t] == last:
            continue
        spin_of[edge] = builder.spin(edge)
    if periodic and last > 0:
        for edge in model.edges():
            if edge[3] != t and edge[t] == last:
                spin_of[edge] = spin_of[model.at_slice(edge, 0)]

    for face in model.faces():
        coupling = model.coupling(face)
        if coupling == 1.0:
            continue
        spins = tuple(spin_of[e] for e in face_edges(face))
        builder.factor(spins, model.table(face), "face")
    for edge, value in model.gauge_fixed.items():
        builder.fix(spin_of[edge], value)
    if model.boundary.kind == BoundaryKind.FIXED:
        for position, left, right in zip(model.slice_positions(), model.boundary.left,
                                         model.boundary.right):
            builder.fix(spin_of[model.at_slice(position, 0)], right)
            builder.fix(spin_of[model.at_slice(position, last)], left)
    return builder.build()


def spin_system(model: LatticeModel) -> SpinSystem:
    """Flatten a lattice model into spins, fixed values and weight factors.

    Raises:
        MalformedGeometry: if the model type is not supported
    """
    if isinstance(model, VertexModel):
        return _vertex_system(model)
    if isinstance(model, EdgeModel):
        return _edge_system(model)
    if isinstance(model, LgtModel):
        return _lgt_system(model)
    raise MalformedGeometry(f"Unsupported model type: {type(model).__name__}")


@dataclass
class _ReducedSystem:
    q: int
    size: int
    factors: List[Tuple[Tuple[int, ...], np.ndarray]] = field(default_factory=list)
    scalar: complex = 1.0


def _restrict(spins, table, find, values):
    """Substitute fixed classes into `table` and merge repeated classes."""
    classes = [find(s) for s in spins]
    index = tuple(values[c] if c in values else slice(None) for c in classes)
    table = table[index]
    remaining = [c for c in classes if c not in values]
    unique = list(dict.fromkeys(remaining))
    if len(unique) < len(remaining):
        letter = {c: string.ascii_letters[i] for i, c in enumerate(unique)}
        subscripts = (
            "".join(letter[c] for c in remaining) + "->" + "".join(letter[c] for c in unique)
        )
        table = np.einsum(subscripts, table)
    return unique, table


def _reduce(system: SpinSystem) -> _ReducedSystem:
    """Contract pinned spins and identity factors exactly."""
    q = system.q
    parent = list(range(system.num_spins))
    values: Dict[int, int] = {}
    scalar = complex(system.scalar)

    def find(s: int) -> int:
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    def pin(c: int, v: int) -> bool:
        if c in values and values[c] != v:
            return False
        values[c] = int(v)
        return True

    for s, v in system.fixed.items():
        if not pin(find(s), v):
            scalar = 0.0

    identity = np.eye(q)
    factors = [(f.spins, f.table) for f in system.factors]
    changed = True
    while changed and scalar != 0:
        changed = False
        pending = []
        for spins, table in factors:
            classes, table = _restrict(spins, table, find, values)
            if not classes:
                scalar *= complex(table)
                continue
            if len(classes) == 2 and np.array_equal(table, identity):
                a, b = classes
                parent[b] = a
                changed = True
                continue
            if len(classes) == 1:
                support = np.flatnonzero(table)
                if support.size == 0:
                    scalar = 0.0
                    continue
                if support.size == 1:
                    pin(classes[0], int(support[0]))
                    scalar *= complex(table[support[0]])
                    changed = True
                    continue
            pending.append((tuple(classes), table))
        factors = pending

    if scalar == 0:
        return _ReducedSystem(q, 0, [], 0.0)

    constrained: List[int] = []
    for spins, _ in factors:
        for c in spins:
            if c not in constrained:
                constrained.append(c)
    free_roots = {find(s) for s in range(system.num_spins)} - set(values)
    scalar *= q ** (len(free_roots) - len(constrained))
    order = sorted(constrained)
    position = {c: i for i, c in enumerate(order)}
    reduced = [(tuple(position[c] for c in spins), table) for spins, table in factors]
    return _ReducedSystem(q, len(order), reduced, scalar)


def _chunk_sum(reduced: _ReducedSystem, start: int, stop: int) -> complex:
    q, k = reduced.q, reduced.size
    index = np.arange(start, stop, dtype=np.int64)
    powers = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    digits = (index[:, None] // powers[None, :]) % q
    weight = np.ones(stop - start, dtype=complex)
    for positions, table in reduced.factors:
        weight *= table[tuple(digits[:, p] for p in positions)]
    return complex(weight.sum())


def brute_force_partition(
    model: LatticeModel,
    cap: Optional[int] = None,
    workers: Optional[int] = None,
) -> PartitionValue:
    """Exact partition function by summing over every free-spin configuration.

    Pinned spins and identity factors are contracted first; the remaining
    configurations are enumerated in fixed chunks (row-major, first spin most
    significant) and the chunk sums are added in index order, so the result
    does not depend on the number of workers.

    Args:
        model: lattice model of any family
        cap: maximum number of enumerated spins (defaults from settings)
        workers: thread count (defaults to LATCIRC_THREADS)

    Returns:
        PartitionValue with kappa = 1

    Raises:
        EnumerationTooLarge: if more spins than `cap` remain after reduction
    """
    system = spin_system(model)
    reduced = _reduce(system)
    limit = settings.enumeration_cap(system.q) if cap is None else cap
    if reduced.size > limit:
        raise EnumerationTooLarge(
            f"{reduced.size} free spins exceed the enumeration cap of {limit} for q={system.q}"
        )
    total = system.q ** reduced.size
    chunk = max(1, settings.ENUMERATION_CHUNK)
    bounds = [(start, min(start + chunk, total)) for start in range(0, total, chunk)]
    pool_size = workers or settings.worker_count(len(bounds))
    logger.debug(
        f"Enumerating {total} configurations of {reduced.size} spins "
        f"in {len(bounds)} chunks on {pool_size} workers"
    )
    if reduced.scalar == 0:
        partials = [0j]
    elif pool_size == 1:
        partials = [_chunk_sum(reduced, a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=pool_size) as executor:
            partials = list(executor.map(lambda ab: _chunk_sum(reduced, *ab), bounds))
    value = 0j
    for partial in partials:
        value += partial
    value *= reduced.scalar
    logger.info(f"Oracle Z = {value} over {reduced.size} enumerated spins")
    return PartitionValue(value, Kappa.one(system.q), Provenance.ORACLE)


def enumerate_configs(
    model: LatticeModel, cap: Optional[int] = None
) -> Iterator[Tuple[Tuple[int, ...], complex]]:
    """Yield (free-spin configuration, total weight) for every configuration.

    Free spins follow the canonical order of `spin_system(model)`; no
    contraction is applied, so zero-weight configurations are included.

    Raises:
        EnumerationTooLarge: if the free-spin count exceeds `cap`
    """
    system = spin_system(model)
    free = system.free_spins()
    limit = settings.enumeration_cap(system.q) if cap is None else cap
    if len(free) > limit:
        raise EnumerationTooLarge(
            f"{len(free)} free spins exceed the enumeration cap of {limit} for q={system.q}"
        )
    assignment = dict(system.fixed)
    for config in itertools.product(range(system.q), repeat=len(free)):
        assignment.update(zip(free, config))
        yield config, system.weight(assignment)


def validate_gauge_fixing(model: LgtModel) -> Optional[LoopError]:
    """Return None if the gauge-fixed edges form a forest, else one offending loop."""
    graph = nx.Graph()
    for edge in model.gauge_fixed:
        u, v = edge_endpoints(edge)
        graph.add_edge(u, v)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return None
    edges = []
    for u, v in cycle:
        low = min(u, v)
        axis = next(a for a in range(3) if u[a] != v[a])
        edges.append((*low, axis))
    loop = LoopError(tuple(edges))
    logger.warning(loop.message)
    return loop
