"""
Compile logical circuits over {I1, P, H, I2, CZ} into three-state Potts models.

Logical qubit a lives on grid rows 2a (upper qutrit) and 2a + 1 (lower
qutrit). Every recipe step becomes one time step of a planar circuit graph:
vertical steps are vertical edges, horizontal steps horizontal edges and
auxiliary qutrits pendant vertices fixed to their prepared value.
"""
import logging
from typing import Dict, Optional, Sequence

import numpy as np

from latcirc.compilers.base import (
    CompiledInstance,
    GridTimeline,
    LogicalCircuit,
    LogicalOp,
    TargetKind,
    check_whitelist,
    logical_reference,
)
from latcirc.core.config import settings
from latcirc.core.exceptions import DimensionMismatch, UnsupportedGate, WidthExceeded
from latcirc.encodings.base import GateRecipe, StepKind
from latcirc.encodings.ising import CZ, HADAMARD
from latcirc.encodings.potts import (
    EIGHTH_PHASE,
    Q,
    check_epsilon,
    controlled_z_recipe,
    hadamard_recipe,
    identity_pair_recipe,
    identity_recipe,
    is_whitelisted,
    phase_recipe,
)
from latcirc.models.circuit import BasisState, Kappa
from latcirc.models.lattice import BoundaryCondition, potts_table
from latcirc.services.qcirc import qubit_equivalents

logger = logging.getLogger(__name__)

# qutrit values of (upper, lower) for |0_L> and |1_L>
LOGICAL_DIGITS = ((0, 1), (1, 2))

# (1, 1) couplings for vertical positions no recipe uses
INERT_PADDING = potts_table(Q, 1.0, 1.0)

POTTS_MATRICES = {
    "I1": lambda op: np.eye(2, dtype=complex),
    "P": lambda op: np.diag([1.0, EIGHTH_PHASE]),
    "H": lambda op: HADAMARD,
    "I2": lambda op: np.eye(4, dtype=complex),
    "CZ": lambda op: CZ,
}


def logical_digits(bits: Sequence[int]) -> tuple:
    """Fixed boundary qutrit values of a logical basis state."""
    digits = []
    for bit in bits:
        digits.extend(LOGICAL_DIGITS[int(bit)])
    return tuple(digits)


class _RecipeCache:
    """One recipe instance per (gate, epsilon)."""

    def __init__(self):
        self._recipes: Dict[tuple, GateRecipe] = {}

    def get(self, op: LogicalOp, epsilon: float) -> GateRecipe:
        key = (op.gate, op.param("epsilon", epsilon) if op.gate == "H" else None)
        if key not in self._recipes:
            self._recipes[key] = self._build(op, key[1])
        return self._recipes[key]

    @staticmethod
    def _build(op: LogicalOp, epsilon: Optional[float]) -> GateRecipe:
        if op.gate == "I1" and len(op.targets) == 1:
            return identity_recipe()
        if op.gate == "P" and len(op.targets) == 1:
            return phase_recipe()
        if op.gate == "H" and len(op.targets) == 1:
            return hadamard_recipe(epsilon)
        if op.gate in ("I2", "CZ") and len(op.targets) == 2:
            return identity_pair_recipe() if op.gate == "I2" else controlled_z_recipe()
        raise UnsupportedGate(f"Unsupported Potts gate: {op.gate} on {op.targets}")


def _base_row(op: LogicalOp) -> int:
    if len(op.targets) == 2 and abs(op.targets[0] - op.targets[1]) != 1:
        raise UnsupportedGate(f"{op.gate} needs neighbouring logical qubits, got {op.targets}")
    return 2 * min(op.targets)


def compile_to_potts(
    circuit: LogicalCircuit,
    epsilon: Optional[float] = None,
    input_bits: Optional[Sequence[int]] = None,
    output_bits: Optional[Sequence[int]] = None,
    pad_borders: bool = False,
) -> CompiledInstance:
    """Potts model with Z / kappa ~ <output| C |input>, kappa = product of recipe normalizations.

    The only approximate recipe is H, whose error is O(epsilon^2) per use.

    Args:
        circuit: logical circuit over I1, P, H (optional param "epsilon"), I2 and CZ
        epsilon: default filter parameter for H
        input_bits: logical basis input, all zeros by default
        output_bits: logical basis output, all zeros by default
        pad_borders: fill unused vertical positions with inert (1, 1) edges

    Raises:
        UnsupportedGate: if an op is outside the alphabet or a coupling is not whitelisted
        WidthExceeded: if the physical register is wider than the simulation cap
        BadEpsilon: if epsilon is outside (0, 0.1]
    """
    epsilon = settings.DEFAULT_EPSILON if epsilon is None else epsilon
    check_epsilon(epsilon)
    width = circuit.width
    rows = 2 * width
    if qubit_equivalents(rows, Q) > settings.SIMULATION_CAP:
        raise WidthExceeded(
            f"{rows} qutrits exceed the simulation cap of {settings.SIMULATION_CAP} qubits"
        )
    input_bits = tuple(input_bits or (0,) * width)
    output_bits = tuple(output_bits or (0,) * width)
    if len(input_bits) != width or len(output_bits) != width:
        raise DimensionMismatch(f"Boundary bits must have {width} entries")

    cache = _RecipeCache()
    timeline = GridTimeline(rows, Q)
    normalization = 1.0 + 0j
    for index, op in enumerate(circuit.ops):
        recipe = cache.get(op, epsilon)
        base = _base_row(op)
        used_epsilon = recipe.parameter if recipe.parameter is not None else epsilon
        check_whitelist(
            [step.params for step in recipe.steps],
            lambda pair: is_whitelisted(pair, used_epsilon),
            f"Potts {op.gate}",
        )
        for step in recipe.steps:
            grid_step = timeline.add_step(index, op.gate)
            table = potts_table(Q, *step.params)
            if step.kind == StepKind.VERTICAL:
                grid_step.vertical[base + min(step.targets)] = table
            elif step.kind == StepKind.HORIZONTAL:
                grid_step.horizontal[base + step.targets[0]] = table
            elif step.kind == StepKind.PENDANT:
                grid_step.pendants.append(
                    (base + step.targets[0], step.aux.state, table, f"{step.aux.name}@{index}")
                )
            else:
                raise UnsupportedGate(f"Potts compilation cannot place {step.kind} steps")
        normalization *= recipe.normalization

    boundary = BoundaryCondition.fixed(logical_digits(output_bits), logical_digits(input_bits))
    model, provenance = timeline.build(
        boundary, vertical_padding=INERT_PADDING if pad_borders else None
    )
    kappa = Kappa.one(Q).times(normalization)
    logger.info(
        f"Compiled {len(circuit.ops)} logical ops on {width} qubits to a Potts graph with "
        f"{len(timeline.steps)} steps and {len(model.pendants)} auxiliaries"
    )
    return CompiledInstance(
        model,
        kappa,
        TargetKind.MATRIX_ELEMENT,
        logical_reference(circuit, POTTS_MATRICES),
        BasisState(output_bits),
        BasisState(input_bits),
        provenance,
        {"epsilon": epsilon, "auxiliaries": len(model.pendants)},
    )
