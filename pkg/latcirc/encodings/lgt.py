"""
Four-qubit repetition encoding of the Z2 gauge model and its gate recipes.

A logical qubit is four physical edges stacked along the time axis, all
equal in the code space. Recipes are written for odd-parity faces: a face
with coupling c weights configurations with an odd number of set edges by c.
Edges of a face that are not register qubits are gauge-fixed to 0.
"""
import logging
from typing import Dict, Optional, Sequence

import numpy as np

from latcirc.core.config import settings
from latcirc.core.exceptions import BadParameter, UnsupportedGate
from latcirc.encodings.base import (
    EncodingName,
    GateRecipe,
    LogicalEncoding,
    RecipeExecutor,
    RecipeStep,
    StepKind,
)
from latcirc.encodings.ising import HADAMARD, rz
from latcirc.models.circuit import Gate
from latcirc.models.lattice import FaceParity, parity_weight

logger = logging.getLogger(__name__)

MEMBERS = 4
MAX_ZETA = 0.1

# 2x headroom over the measured first-order error 2 * zeta
IDENTITY_ERROR_CONSTANT = 4.0

# register of the teleported Hadamard: input, Bell partner, mediator, output
L1 = (0, 1, 2, 3)
L2 = (4, 5, 6, 7)
MEDIATOR = 8
L3 = (9, 10, 11, 12)


def lgt_encoding() -> LogicalEncoding:
    zero = np.zeros(2 ** MEMBERS, dtype=complex)
    one = np.zeros(2 ** MEMBERS, dtype=complex)
    zero[0] = 1.0
    one[-1] = 1.0
    return LogicalEncoding(EncodingName.LGT_FOUR_QUBIT, 2, MEMBERS, (zero, one))


def allowed_coupling(coupling: complex, zeta: Optional[float] = None) -> bool:
    """Couplings available to a recipe: 0, unit modulus, 1/2 and the identity parameter."""
    if np.isclose(coupling, 0.0) or np.isclose(abs(coupling), 1.0) or np.isclose(coupling, 0.5):
        return True
    return zeta is not None and np.isclose(coupling, zeta)


class LgtExecutor(RecipeExecutor):
    """Builds qubit gates from odd-parity faces, spreads and transfers."""

    parity = FaceParity.ODD

    def step_gate(self, step: RecipeStep) -> Gate:
        if step.kind == StepKind.FACE:
            (coupling,) = step.params
            diagonal = [
                parity_weight(coupling, bin(bits).count("1"), self.parity)
                for bits in range(2 ** len(step.targets))
            ]
            return Gate(np.diag(diagonal), step.targets, step.label)
        if step.kind == StepKind.SPREAD:
            # a coupling-1 temporal face: every next value is allowed
            return Gate(np.ones((2, 2), dtype=complex), step.targets, step.label)
        if step.kind == StepKind.TRANSFER:
            (coupling,) = step.params
            matrix = np.array(
                [[parity_weight(coupling, s + s_in, self.parity) for s_in in range(2)]
                 for s in range(2)],
                dtype=complex,
            )
            return Gate(matrix, step.targets, step.label)
        raise UnsupportedGate(f"LGT recipes cannot execute {step.kind} steps")


def _face(targets: Sequence[int], coupling: complex, label: str) -> RecipeStep:
    return RecipeStep(StepKind.FACE, tuple(targets), (coupling,), label=label)


def _spread(targets: Sequence[int], label: str) -> Sequence[RecipeStep]:
    return [RecipeStep(StepKind.SPREAD, (t,), label=label) for t in targets]


def _check_angle(name: str, angle: float) -> None:
    if not 0 <= angle < 2 * np.pi:
        raise BadParameter(f"{name} must lie in [0, 2pi), got {angle}")


def rotation_recipe(xi: float) -> GateRecipe:
    """R_z(xi): one face on the top member with the other edges fixed to 0."""
    _check_angle("xi", xi)
    slots = (L1,)
    steps = (_face((L1[-1],), np.exp(1j * xi), "R_z face"),)
    return GateRecipe("lgt.Rz", lgt_encoding(), MEMBERS, slots, slots, steps, rz(xi),
                      metadata={"xi": xi})


def diagonal_phase_recipe() -> GateRecipe:
    """diag(1, i, i, 1): a coupling-i face shared by the top members of two logical qubits."""
    slots = (L1, L2)
    steps = (_face((L1[-1], L2[-1]), 1j, "shared face"),)
    ideal = np.diag([1, 1j, 1j, 1]).astype(complex)
    return GateRecipe("lgt.diag", lgt_encoding(), 2 * MEMBERS, slots, slots, steps, ideal)


def teleport_hadamard_recipe(alpha: float = 0.0) -> GateRecipe:
    """R_z(pi/2) H~ R_z(alpha) by gate teleportation from L1 onto L3, with H~ = sqrt(2) H.

    The incoming rotation angle is absorbed into the first face as
    e^{i(alpha + pi)}. The next rotation is corrected by +pi/2 if it is
    followed by another teleport and by -pi/2 otherwise.
    """
    _check_angle("alpha", alpha)
    steps = [_face((L1[-1],), np.exp(1j * (alpha + np.pi)), "incoming rotation")]
    steps += _spread(L2 + L3, "spread")
    for block in (L2, L3):
        for a, b in zip(block, block[1:]):
            steps.append(_face((a, b), 0.0, "code"))
    steps.append(_face((L2[-1],), 1j, "phase L2"))
    steps += _spread((MEDIATOR,), "spread mediator")
    steps.append(_face((L2[-1], MEDIATOR), 0.0, "copy"))
    steps.append(_face((MEDIATOR, L3[0]), 1j, "couple L3"))
    steps.append(_face((L1[-1], L2[0]), 0.0, "bell"))
    ideal = rz(np.pi / 2) @ HADAMARD @ rz(alpha)
    recipe = GateRecipe(
        "lgt.teleport_H",
        lgt_encoding(),
        13,
        (L1,),
        (L3,),
        tuple(steps),
        ideal,
        normalization=np.sqrt(2),
        discarded=L1 + L2 + (MEDIATOR,),
        metadata={
            "alpha": alpha,
            "incoming_offset": np.pi,
            "next_teleport_offset": np.pi / 2,
            "final_rotation_offset": -np.pi / 2,
        },
    )
    factor = spread_factor(recipe)
    expected = np.sqrt(2) ** len(L2 + L3)
    if not np.isclose(factor, expected):
        raise UnsupportedGate(f"Teleport spread factor {factor} differs from {expected}")
    recipe.metadata["spread_factor"] = factor
    return recipe


def spread_factor(recipe: GateRecipe) -> float:
    """Norm growth of |0_L> through the steps up to the first code face."""
    prefix = []
    for step in recipe.steps:
        if step.kind == StepKind.FACE and len(step.targets) == 2:
            break
        prefix.append(step)
    basis = np.zeros(2 ** recipe.logical_width, dtype=complex)
    basis[0] = 1.0
    state = LgtExecutor().evolve(recipe, basis, prefix)
    return float(np.linalg.norm(state))


def identity_recipe(zeta: Optional[float] = None) -> GateRecipe:
    """Near-identity transfer [[1, zeta], [zeta, 1]] on every member; error grows as zeta.

    Raises:
        BadParameter: if zeta is outside (0, 0.1]
    """
    zeta = settings.DEFAULT_ZETA if zeta is None else zeta
    if not 0 < zeta <= MAX_ZETA:
        raise BadParameter(f"zeta must lie in (0, {MAX_ZETA}], got {zeta}")
    slots = (L1,)
    steps = tuple(
        RecipeStep(StepKind.TRANSFER, (t,), (zeta,), label="I1") for t in L1
    )
    # odd-parity transfer: a flip between consecutive slices costs zeta
    return GateRecipe(
        "lgt.I1",
        lgt_encoding(),
        MEMBERS,
        slots,
        slots,
        steps,
        np.eye(2, dtype=complex),
        parameter=zeta,
        error_order=1,
        error_budget=lambda z: IDENTITY_ERROR_CONSTANT * z,
    )


def lgt_logical_gates(
    xi: float = np.pi / 4, alpha: float = 0.0, zeta: Optional[float] = None
) -> Dict[str, GateRecipe]:
    """All LGT recipes at the given angles.

    Raises:
        BadParameter: if an angle or zeta is out of range
        UnsupportedGate: if a face coupling is outside the allowed set
    """
    recipes = {
        "lgt.Rz": rotation_recipe(xi),
        "lgt.diag": diagonal_phase_recipe(),
        "lgt.teleport_H": teleport_hadamard_recipe(alpha),
        "lgt.I1": identity_recipe(zeta),
    }
    for recipe in recipes.values():
        for step in recipe.steps:
            if step.params and not allowed_coupling(step.params[0], recipe.parameter):
                raise UnsupportedGate(
                    f"Recipe {recipe.name} step {step.label!r} uses coupling {step.params[0]}"
                )
    return recipes
