"""
Two-qutrit Potts encoding and its logical gate recipes.

A logical qubit lives on an upper and a lower qutrit with |0_L> = |0>|1>
and |1_L> = |1>|2>. Recipes use three physical operations: a vertical gate
between two qutrits, a horizontal gate on one qutrit and a pendant, an
auxiliary qutrit fixed to a value and coupled to one register qutrit.
"""
import logging
from typing import Dict, Optional, Tuple

import numpy as np

from latcirc.core.config import settings
from latcirc.core.exceptions import BadEpsilon, UnsupportedGate
from latcirc.encodings.base import (
    AuxSpec,
    EncodingName,
    GateRecipe,
    LogicalEncoding,
    RecipeExecutor,
    RecipeStep,
    StepKind,
    diagonal_pair_table,
)
from latcirc.encodings.ising import CZ, HADAMARD
from latcirc.models.circuit import Gate

logger = logging.getLogger(__name__)

Q = 3
EIGHTH_PHASE = np.exp(1j * np.pi / 8)
MAX_EPSILON = 0.1

# 2x headroom over the measured leakage sqrt(2) * eps^2
H_ERROR_CONSTANT = 2 * np.sqrt(2)


def potts_encoding() -> LogicalEncoding:
    zero = np.zeros(Q * Q, dtype=complex)
    one = np.zeros(Q * Q, dtype=complex)
    zero[0 * Q + 1] = 1.0
    one[1 * Q + 2] = 1.0
    return LogicalEncoding(EncodingName.POTTS_QUTRIT, Q, 2, (zero, one))


def coupling_whitelist(epsilon: float) -> Tuple[Tuple[complex, complex], ...]:
    """(mu, nu) pairs a Potts recipe may use at this epsilon."""
    return (
        (1.0, 0.0),
        (EIGHTH_PHASE, 1.0),
        (-1j, 1.0),
        (1.0, 1.0),
        (0.0, 1.0),
        (epsilon, 1.0),
        (1 / (np.sqrt(2) * epsilon), 1.0),
        (-1.0, 1.0),
    )


def check_epsilon(epsilon: float) -> None:
    if not 0 < epsilon <= MAX_EPSILON:
        raise BadEpsilon(f"epsilon must lie in (0, {MAX_EPSILON}], got {epsilon}")


def is_whitelisted(pair: Tuple[complex, complex], epsilon: float) -> bool:
    return any(
        np.isclose(pair[0], mu, rtol=1e-12, atol=1e-15) and np.isclose(pair[1], nu)
        for mu, nu in coupling_whitelist(epsilon)
    )


class PottsExecutor(RecipeExecutor):
    """Builds qutrit gates from vertical, horizontal and pendant steps."""

    def step_gate(self, step: RecipeStep) -> Gate:
        mu, nu = step.params
        if step.kind == StepKind.VERTICAL:
            return Gate(np.diag(diagonal_pair_table(Q, mu, nu)), step.targets, step.label)
        if step.kind == StepKind.HORIZONTAL:
            matrix = np.full((Q, Q), nu, dtype=complex)
            np.fill_diagonal(matrix, mu)
            return Gate(matrix, step.targets, step.label)
        if step.kind == StepKind.PENDANT:
            # the auxiliary is fixed to aux.state, so only the matching row survives
            field = np.full(Q, nu, dtype=complex)
            field[step.aux.state] = mu
            return Gate(np.diag(field), step.targets, step.label)
        raise UnsupportedGate(f"Potts recipes cannot execute {step.kind} steps")


class _StepList:
    """Accumulates steps and hands out fresh auxiliary names."""

    def __init__(self, prefix: str):
        self.prefix = prefix
        self.steps = []
        self._aux = 0

    def vertical(self, a: int, b: int, mu: complex, nu: complex, label: str = "") -> None:
        self.steps.append(RecipeStep(StepKind.VERTICAL, (a, b), (mu, nu), label=label))

    def horizontal(self, target: int, mu: complex, nu: complex, label: str = "") -> None:
        self.steps.append(RecipeStep(StepKind.HORIZONTAL, (target,), (mu, nu), label=label))

    def pendant(self, target: int, value: int, mu: complex, nu: complex, label: str = "") -> None:
        name = f"{self.prefix}.aux{self._aux}"
        self._aux += 1
        self.steps.append(
            RecipeStep(StepKind.PENDANT, (target,), (mu, nu), aux=AuxSpec(name, value), label=label)
        )


def _single(name: str, steps: _StepList, ideal: np.ndarray, **kwargs) -> GateRecipe:
    slots = ((0, 1),)
    return GateRecipe(name, potts_encoding(), 2, slots, slots, tuple(steps.steps), ideal, **kwargs)


def identity_recipe() -> GateRecipe:
    steps = _StepList("potts.I1")
    steps.vertical(0, 1, 1.0, 1.0, "I1")
    return _single("potts.I1", steps, np.eye(2, dtype=complex))


def phase_recipe() -> GateRecipe:
    steps = _StepList("potts.P")
    steps.pendant(1, 2, EIGHTH_PHASE, 1.0, "P(pi/8)")
    return _single("potts.P", steps, np.diag([1.0, EIGHTH_PHASE]))


def hadamard_recipe(epsilon: float) -> GateRecipe:
    """Approximate Hadamard whose leakage out of the code space scales as epsilon^2.

    Raises:
        BadEpsilon: if epsilon is outside (0, 0.1]
    """
    check_epsilon(epsilon)
    upper, lower = 0, 1
    large = 1 / (np.sqrt(2) * epsilon)
    steps = _StepList("potts.H")
    steps.pendant(lower, 2, -1j, 1.0, "phase lower")
    steps.horizontal(upper, -1j, 1.0, "spread upper")
    steps.horizontal(lower, 1.0, 1.0, "spread lower")
    steps.pendant(upper, 2, 0.0, 1.0, "forbid upper 2")
    steps.pendant(lower, 0, 0.0, 1.0, "forbid lower 0")
    steps.vertical(upper, lower, 0.0, 1.0, "forbid equal")
    steps.pendant(upper, 0, epsilon, 1.0, "damp upper 0")
    steps.pendant(lower, 2, epsilon, 1.0, "damp lower 2")
    steps.pendant(upper, 1, large, 1.0, "boost upper 1")
    steps.pendant(lower, 1, large, 1.0, "boost lower 1")
    # e^{i pi/8} eight times on the upper code values is a global i
    for value in (0, 1):
        for _ in range(4):
            steps.pendant(upper, value, EIGHTH_PHASE, 1.0, "global phase")
    steps.pendant(lower, 2, -1j, 1.0, "phase lower")
    recipe = _single(
        "potts.H",
        steps,
        HADAMARD,
        parameter=epsilon,
        error_order=2,
        error_budget=lambda eps: H_ERROR_CONSTANT * eps ** 2,
        metadata={"leakage_state": "|0>|2>", "error_constant": H_ERROR_CONSTANT},
    )
    return recipe.with_normalization(PottsExecutor().fitted_normalization(recipe))


def identity_pair_recipe() -> GateRecipe:
    steps = _StepList("potts.I2")
    steps.vertical(0, 1, 1.0, 1.0, "I1")
    steps.vertical(2, 3, 1.0, 1.0, "I1")
    slots = ((0, 1), (2, 3))
    return GateRecipe("potts.I2", potts_encoding(), 4, slots, slots, tuple(steps.steps),
                      np.eye(4, dtype=complex))


def controlled_z_recipe() -> GateRecipe:
    """CZ between logical qubits on qutrits (0, 1) and (2, 3)."""
    steps = _StepList("potts.CZ")
    steps.vertical(1, 2, -1.0, 1.0, "lower-upper")
    steps.pendant(3, 2, -1.0, 1.0, "lower 2")
    slots = ((0, 1), (2, 3))
    return GateRecipe("potts.CZ", potts_encoding(), 4, slots, slots, tuple(steps.steps), CZ)


def potts_logical_gates(epsilon: Optional[float] = None) -> Dict[str, GateRecipe]:
    """All Potts recipes at one epsilon.

    Raises:
        BadEpsilon: if epsilon is outside (0, 0.1]
        UnsupportedGate: if a recipe uses a coupling outside the whitelist
    """
    epsilon = settings.DEFAULT_EPSILON if epsilon is None else epsilon
    check_epsilon(epsilon)
    recipes = {
        "potts.I1": identity_recipe(),
        "potts.P": phase_recipe(),
        "potts.H": hadamard_recipe(epsilon),
        "potts.I2": identity_pair_recipe(),
        "potts.CZ": controlled_z_recipe(),
    }
    for recipe in recipes.values():
        for step in recipe.steps:
            if not is_whitelisted(step.params, epsilon):
                raise UnsupportedGate(
                    f"Recipe {recipe.name} step {step.label!r} uses coupling {step.params}"
                )
    return recipes
