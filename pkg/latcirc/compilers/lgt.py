"""
Compile logical circuits over {R_z(xi), diag(1, i, i, 1), CZ, H} into Z2 gauge models.

Layout: the time axis is z and faces use odd parity. Logical qubit j is a
ladder of x-edges in column x = 2j, rows bottom..top, all equal in the code
space; column 2j + 1 stays empty and the y-edges ("rails") beside a ladder
carry values between neighbouring ladders. Every temporal edge is
gauge-fixed to 0 and every temporal face gets coupling 0 (an identity
transfer) except the spreads, which keep coupling 1 and free the next value
of a position. Each op occupies a few consecutive slices:

- R_z(xi) adds xi to the ladder's pending phase and emits nothing.
- diag copies both top members onto the rails between the ladders, couples
  the rails with an i-face and frees the rails again; they are gauge-fixed to
  0 two slices later. A rail row is used once, so ladders grow upwards when
  their top rails are taken.
- H teleports the ladder: two fresh four-edge blocks above the top are spread
  and coded, a mediator edge couples them, and the old ladder is summed out.
  The result is R_z(pi/2) sqrt(2) H R_z(phase), so the pending phase becomes
  -pi/2 and kappa gains 2^(1/2).

Pending phases left at the end become one face on each ladder top.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from latcirc.compilers.base import (
    CompiledInstance,
    LogicalCircuit,
    LogicalOp,
    ProvenanceEntry,
    TargetKind,
    check_whitelist,
    logical_reference,
)
from latcirc.core.exceptions import (
    BlockBudget,
    DimensionMismatch,
    GaugeLoop,
    MalformedGeometry,
    UnsupportedGate,
)
from latcirc.encodings.ising import CZ, HADAMARD, rz
from latcirc.encodings.lgt import MEMBERS, allowed_coupling
from latcirc.models.circuit import BasisState, Kappa
from latcirc.models.lattice import (
    BoundaryCondition,
    BoundaryKind,
    FaceParity,
    LgtEdge,
    LgtFace,
    LgtModel,
    lattice_edges,
    lattice_faces,
)
from latcirc.services.spinlat import validate_gauge_fixing

logger = logging.getLogger(__name__)

TIME_AXIS = 2
DIAG = np.diag([1, 1j, 1j, 1]).astype(complex)

# teleport offsets relative to the ladder top
SECOND_BLOCK = (1, 2, 3, 4)
MEDIATOR_ROW = 5
THIRD_BLOCK = (6, 7, 8, 9)

# (x, y, z) extents of one block of the reference construction
BLOCK_SHAPE = (4, 12, 7)

LGT_MATRICES = {
    "Rz": lambda op: rz(op.param("xi")),
    "diag": lambda op: DIAG,
    "CZ": lambda op: CZ,
    "H": lambda op: HADAMARD,
}


def member(j: int, row: int) -> LgtEdge:
    return (2 * j, row, 0, 0)


def rail(x: int, row: int) -> LgtEdge:
    return (x, row, 0, 1)


@dataclass
class Ladder:
    """Rows of one logical qubit and its not yet emitted R_z phase."""

    bottom: int = 0
    top: int = MEMBERS - 1
    phase: float = 0.0

    def rows(self) -> range:
        return range(self.bottom, self.top + 1)


@dataclass
class LgtLayout:
    """Faces, spreads and gauge-fixed rails accumulated while compiling."""

    width: int
    ladders: List[Ladder] = field(default_factory=list)
    cursor: int = 0
    faces: Dict[LgtFace, complex] = field(default_factory=dict)
    spreads: Set[Tuple[LgtEdge, int]] = field(default_factory=set)
    fixed_rails: Dict[LgtEdge, int] = field(default_factory=dict)
    used_rails: Set[LgtEdge] = field(default_factory=set)
    teleports: int = 0
    max_row: int = MEMBERS - 1
    log: List[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.ladders:
            self.ladders = [Ladder() for _ in range(self.width)]

    def face(self, x: int, row: int, tau: int, coupling: complex) -> None:
        key = (x, row, tau, 0, 1)
        if key in self.faces:
            raise MalformedGeometry(f"Face {key} assigned twice")
        self.faces[key] = complex(coupling)
        self.log.append(f"face{key}={complex(coupling):.6g}")

    def spread(self, position: LgtEdge, tau: int) -> None:
        self.spreads.add((position, tau))
        self.log.append(f"spread{position}@{tau}")

    def fix_rail(self, position: LgtEdge, tau: int) -> None:
        edge = (position[0], position[1], tau, position[3])
        self.fixed_rails[edge] = 0
        self.used_rails.add(position)
        self.log.append(f"gauge{edge}=0")

    def take_log(self) -> Tuple[str, ...]:
        entries, self.log = tuple(self.log), []
        return entries

    def raise_ladders(self, targets: Dict[int, int]) -> None:
        """Extend ladders upwards: spread the new rows and code them to the old top."""
        grow = {j: top for j, top in targets.items() if top > self.ladders[j].top}
        if not grow:
            return
        s = self.cursor
        for j, top in grow.items():
            ladder = self.ladders[j]
            for row in range(ladder.top + 1, top + 1):
                self.spread(member(j, row), s)
            for row in range(ladder.top, top):
                self.face(2 * j, row, s + 1, 0.0)
            ladder.top = top
            self.max_row = max(self.max_row, top)
        self.cursor = s + 1

    def diag(self, j: int) -> None:
        """diag(1, i, i, 1) on ladders j and j + 1."""
        top = max(self.ladders[j].top, self.ladders[j + 1].top)
        while rail(2 * j + 1, top) in self.used_rails or rail(2 * j + 2, top) in self.used_rails:
            top += 1
        self.raise_ladders({j: top, j + 1: top})
        s = self.cursor
        rails = (rail(2 * j + 1, top), rail(2 * j + 2, top))
        for position in rails:
            self.spread(position, s)
        self.face(2 * j, top, s + 1, 0.0)
        self.face(2 * j + 2, top, s + 1, 0.0)
        self.face(2 * j + 1, top, s + 1, 1j)
        for position in rails:
            self.spread(position, s + 1)
            self.fix_rail(position, s + 2)
        self.cursor = s + 2

    def teleport(self, j: int) -> None:
        """H by teleporting ladder j onto four fresh rows."""
        ladder = self.ladders[j]
        top = ladder.top
        x = 2 * j
        s = self.cursor
        self.face(x, top, s, np.exp(1j * (ladder.phase + np.pi)))
        for offset in SECOND_BLOCK + THIRD_BLOCK:
            self.spread(member(j, top + offset), s)
        for block in (SECOND_BLOCK, THIRD_BLOCK):
            for offset in block[:-1]:
                self.face(x, top + offset, s + 1, 0.0)
        self.face(x, top + SECOND_BLOCK[-1], s + 1, 1j)
        self.spread(member(j, top + MEDIATOR_ROW), s + 1)
        self.face(x, top + SECOND_BLOCK[-1], s + 2, 0.0)
        self.face(x, top + MEDIATOR_ROW, s + 2, 1j)
        self.face(x, top, s + 2, 0.0)
        for row in range(ladder.bottom, top + MEDIATOR_ROW + 1):
            self.spread(member(j, row), s + 2)
        ladder.bottom = top + THIRD_BLOCK[0]
        ladder.top = top + THIRD_BLOCK[-1]
        ladder.phase = -np.pi / 2
        self.max_row = max(self.max_row, ladder.top)
        self.teleports += 1
        self.cursor = s + 3

    def flush_phases(self) -> None:
        for j, ladder in enumerate(self.ladders):
            phase = float(np.mod(ladder.phase, 2 * np.pi))
            if np.isclose(phase, 0.0) or np.isclose(phase, 2 * np.pi):
                continue
            self.face(2 * j, ladder.top, self.cursor, np.exp(1j * phase))
            ladder.phase = 0.0

    @property
    def extents(self) -> Tuple[int, int, int]:
        return (2 * self.width, self.max_row + 2, self.cursor + 1)


def _adjacent_pair(op: LogicalOp) -> int:
    if len(op.targets) != 2 or abs(op.targets[0] - op.targets[1]) != 1:
        raise UnsupportedGate(f"{op.gate} needs two neighbouring logical qubits, got {op.targets}")
    return min(op.targets)


def _apply(layout: LgtLayout, op: LogicalOp) -> None:
    if op.gate == "Rz" and len(op.targets) == 1:
        layout.ladders[op.targets[0]].phase += op.param("xi")
    elif op.gate == "diag":
        layout.diag(_adjacent_pair(op))
    elif op.gate == "CZ":
        j = _adjacent_pair(op)
        layout.ladders[j].phase -= np.pi / 2
        layout.ladders[j + 1].phase -= np.pi / 2
        layout.diag(j)
    elif op.gate == "H" and len(op.targets) == 1:
        layout.teleport(op.targets[0])
    else:
        raise UnsupportedGate(f"Unsupported LGT gate: {op.gate} on {op.targets}")


def _boundary_digits(
    positions: Sequence[LgtEdge], rows: Dict[int, range], bits: Sequence[int]
) -> Tuple[int, ...]:
    digits = []
    for x, y, _, axis in positions:
        if axis == 0 and x % 2 == 0 and y in rows.get(x // 2, ()):
            digits.append(int(bits[x // 2]))
        else:
            digits.append(0)
    return tuple(digits)


def block_counts(extents: Sequence[int]) -> Tuple[int, int, int]:
    """Whole (4, 12, 7) blocks needed along each axis to hold `extents`."""
    x, y, z = (-(-int(e) // size) for e, size in zip(extents, BLOCK_SHAPE))
    return (x, y, z)


def _check_budget(extents: Tuple[int, int, int], budget: Optional[Sequence[int]]) -> None:
    if budget is None:
        return
    limits = tuple(b * size for b, size in zip(budget, BLOCK_SHAPE))
    if any(e > limit for e, limit in zip(extents, limits)):
        raise BlockBudget(f"Lattice extents {extents} exceed the block budget {limits}")


def pad_lattice(model: LgtModel, extents: Sequence[int]) -> LgtModel:
    """Grow a compiled lattice to `extents` without changing Z.

    New positions are held at 0 by identity transfers and zero boundary
    digits, the last slice is carried into the new slices and every new
    temporal edge is gauge-fixed to 0.

    Raises:
        MalformedGeometry: if `extents` is smaller than the model, or the model
            is not a fixed-boundary odd-parity lattice evolving along z
    """
    target = tuple(int(e) for e in extents)
    if len(target) != 3 or any(t < e for t, e in zip(target, model.extents)):
        raise MalformedGeometry(f"Cannot pad extents {model.extents} to {target}")
    if (
        model.time_axis != TIME_AXIS
        or model.parity != FaceParity.ODD
        or model.boundary.kind != BoundaryKind.FIXED
    ):
        raise MalformedGeometry("Only fixed-boundary odd-parity lattices along z can be padded")
    if target == model.extents:
        return model

    old_edges = set(model.edges())
    gauge_fixed = dict(model.gauge_fixed)
    for edge in lattice_edges(target):
        if edge[3] == TIME_AXIS and edge not in old_edges:
            gauge_fixed[edge] = 0
    old_faces = set(model.faces())
    couplings = dict(model.face_couplings)
    for face in lattice_faces(target):
        if TIME_AXIS in face[3:] and face not in old_faces:
            couplings[face] = 0.0

    old_positions = model.slice_positions()
    left = dict(zip(old_positions, model.boundary.left))
    right = dict(zip(old_positions, model.boundary.right))
    positions = LgtModel(target, time_axis=TIME_AXIS).slice_positions()
    boundary = BoundaryCondition.fixed(
        [left.get(p, 0) for p in positions], [right.get(p, 0) for p in positions]
    )
    return LgtModel(target, couplings, gauge_fixed, boundary, TIME_AXIS, FaceParity.ODD)


def compile_to_lgt(
    circuit: LogicalCircuit,
    input_bits: Optional[Sequence[int]] = None,
    output_bits: Optional[Sequence[int]] = None,
    block_budget: Optional[Sequence[int]] = None,
    pad_to_blocks: bool = False,
) -> CompiledInstance:
    """Z2 gauge model with Z / kappa = <output| C |input>, kappa = 2^(#H / 2).

    Args:
        circuit: logical circuit over Rz (param "xi"), diag, CZ and H
        input_bits: logical basis input, all zeros by default
        output_bits: logical basis output, all zeros by default
        block_budget: optional (x, y, z) block counts the lattice must fit
        pad_to_blocks: grow the lattice to whole (4, 12, 7) blocks; Z is unchanged

    Returns:
        CompiledInstance with fixed boundaries on the first and last slice

    Raises:
        UnsupportedGate: if an op is outside the alphabet or not nearest-neighbour
        GaugeLoop: if the gauge-fixed edges close a loop
        BlockBudget: if the lattice exceeds the block budget
    """
    width = circuit.width
    input_bits = tuple(input_bits or (0,) * width)
    output_bits = tuple(output_bits or (0,) * width)
    if len(input_bits) != width or len(output_bits) != width:
        raise DimensionMismatch(f"Boundary bits must have {width} entries")
    layout = LgtLayout(width)
    initial_rows = {j: layout.ladders[j].rows() for j in range(width)}
    provenance = []
    for index, op in enumerate(circuit.ops):
        _apply(layout, op)
        provenance.append(ProvenanceEntry(index, op.gate, layout.take_log()))
    layout.flush_phases()
    if layout.log:
        provenance.append(ProvenanceEntry(len(circuit.ops), "phase", layout.take_log()))

    extents = layout.extents
    _check_budget(extents, block_budget)
    check_whitelist(layout.faces.values(), allowed_coupling, "LGT face")

    X, Y, Z = extents
    gauge_fixed: Dict[LgtEdge, int] = {
        (x, y, z, TIME_AXIS): 0 for x in range(X) for y in range(Y) for z in range(Z - 1)
    }
    gauge_fixed.update(layout.fixed_rails)
    face_couplings: Dict[LgtFace, complex] = dict(layout.faces)
    skeleton = LgtModel(extents, time_axis=TIME_AXIS, parity=FaceParity.ODD)
    for position in skeleton.slice_positions():
        for tau in range(Z - 1):
            if (position, tau) not in layout.spreads:
                a, b = sorted((position[3], TIME_AXIS))
                face_couplings[(position[0], position[1], tau, a, b)] = 0.0

    positions = skeleton.slice_positions()
    final_rows = {j: layout.ladders[j].rows() for j in range(width)}
    boundary = BoundaryCondition.fixed(
        _boundary_digits(positions, final_rows, output_bits),
        _boundary_digits(positions, initial_rows, input_bits),
    )
    model = LgtModel(extents, face_couplings, gauge_fixed, boundary, TIME_AXIS, FaceParity.ODD)
    blocks = block_counts(extents)
    if pad_to_blocks:
        model = pad_lattice(model, tuple(b * size for b, size in zip(blocks, BLOCK_SHAPE)))
    loop = validate_gauge_fixing(model)
    if loop is not None:
        raise GaugeLoop(loop.cycle)

    kappa = Kappa(pow2=Fraction(layout.teleports, 2))
    logger.info(
        f"Compiled {len(circuit.ops)} logical ops on {width} qubits to an LGT lattice "
        f"{model.extents} with {layout.teleports} teleports"
    )
    return CompiledInstance(
        model,
        kappa,
        TargetKind.MATRIX_ELEMENT,
        logical_reference(circuit, LGT_MATRICES),
        BasisState(output_bits),
        BasisState(input_bits),
        tuple(provenance),
        {
            "extents": list(model.extents),
            "blocks": list(blocks),
            "teleports": layout.teleports,
        },
    )
