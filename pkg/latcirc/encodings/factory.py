"""
Recipe factory and randomized recipe verification.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from latcirc.core.config import settings
from latcirc.encodings.base import (
    EncodingName,
    GateRecipe,
    LogicalEncoding,
    RecipeExecutor,
    RecipeReport,
)
from latcirc.encodings.ising import IsingExecutor, ising_encoding, ising_recipes
from latcirc.encodings.lgt import (
    LgtExecutor,
    diagonal_phase_recipe,
    identity_recipe as lgt_identity_recipe,
    lgt_encoding,
    rotation_recipe,
    teleport_hadamard_recipe,
)
from latcirc.encodings.potts import (
    PottsExecutor,
    controlled_z_recipe,
    hadamard_recipe,
    identity_pair_recipe,
    identity_recipe as potts_identity_recipe,
    phase_recipe,
    potts_encoding,
)
from latcirc.encodings.six_vertex import six_vertex_encoding

logger = logging.getLogger(__name__)

DEFAULT_SWEEP = (1e-2, 3e-3, 1e-3)
SLOPE_TOLERANCE = 0.2


def get_encoding(name: EncodingName) -> LogicalEncoding:
    """Return the logical encoding registered under `name`.

    Raises:
        ValueError: If the encoding is not supported
    """
    builders = {
        EncodingName.SIX_VERTEX_HEISENBERG: six_vertex_encoding,
        EncodingName.POTTS_QUTRIT: potts_encoding,
        EncodingName.LGT_FOUR_QUBIT: lgt_encoding,
        EncodingName.ISING_QUBIT: ising_encoding,
    }
    if name not in builders:
        raise ValueError(f"Unsupported encoding: {name}")
    return builders[name]()


def get_executor(name: EncodingName) -> RecipeExecutor:
    """Return the step executor for recipes over encoding `name`.

    Raises:
        ValueError: If no recipes exist for the encoding
    """
    if name == EncodingName.POTTS_QUTRIT:
        return PottsExecutor()
    if name == EncodingName.LGT_FOUR_QUBIT:
        return LgtExecutor()
    if name == EncodingName.ISING_QUBIT:
        return IsingExecutor()
    raise ValueError(f"Unsupported recipe encoding: {name}")


def get_recipe(name: str, parameter: Optional[float] = None) -> GateRecipe:
    """Build the recipe `name`.

    Args:
        name: recipe name, e.g. "potts.H" or "lgt.teleport_H"
        parameter: epsilon for potts.H, zeta for lgt.I1, xi for lgt.Rz and
            alpha for lgt.teleport_H; ignored otherwise

    Returns:
        GateRecipe instance

    Raises:
        ValueError: If the recipe is not supported
    """
    if name.startswith("ising."):
        recipes = ising_recipes()
        if name in recipes:
            return recipes[name]
    elif name == "potts.I1":
        return potts_identity_recipe()
    elif name == "potts.P":
        return phase_recipe()
    elif name == "potts.H":
        return hadamard_recipe(settings.DEFAULT_EPSILON if parameter is None else parameter)
    elif name == "potts.I2":
        return identity_pair_recipe()
    elif name == "potts.CZ":
        return controlled_z_recipe()
    elif name == "lgt.Rz":
        return rotation_recipe(np.pi / 4 if parameter is None else parameter)
    elif name == "lgt.diag":
        return diagonal_phase_recipe()
    elif name == "lgt.teleport_H":
        return teleport_hadamard_recipe(0.0 if parameter is None else parameter)
    elif name == "lgt.I1":
        return lgt_identity_recipe(parameter)
    raise ValueError(f"Unsupported recipe: {name}")


def get_supported_recipes() -> Dict[str, Dict[str, Any]]:
    """Get information about the available recipes.

    Returns:
        Dictionary with recipe information
    """
    return {
        "ising.H": {"encoding": EncodingName.ISING_QUBIT.value, "parameter": None,
                    "description": "Hadamard from K, K^dag and Z"},
        "ising.P": {"encoding": EncodingName.ISING_QUBIT.value, "parameter": None,
                    "description": "Phase gate from K, K^dag and Z"},
        "ising.CZ": {"encoding": EncodingName.ISING_QUBIT.value, "parameter": None,
                     "description": "CZ from W_v and phase gates"},
        "potts.I1": {"encoding": EncodingName.POTTS_QUTRIT.value, "parameter": None,
                     "description": "Logical identity"},
        "potts.P": {"encoding": EncodingName.POTTS_QUTRIT.value, "parameter": None,
                    "description": "Phase diag(1, e^{i pi/8})"},
        "potts.H": {"encoding": EncodingName.POTTS_QUTRIT.value, "parameter": "epsilon",
                    "description": "Hadamard with epsilon^2 leakage"},
        "potts.I2": {"encoding": EncodingName.POTTS_QUTRIT.value, "parameter": None,
                     "description": "Two-qubit identity"},
        "potts.CZ": {"encoding": EncodingName.POTTS_QUTRIT.value, "parameter": None,
                     "description": "Controlled-Z"},
        "lgt.Rz": {"encoding": EncodingName.LGT_FOUR_QUBIT.value, "parameter": "xi",
                   "description": "Rotation diag(1, e^{i xi})"},
        "lgt.diag": {"encoding": EncodingName.LGT_FOUR_QUBIT.value, "parameter": None,
                     "description": "Two-qubit diag(1, i, i, 1)"},
        "lgt.teleport_H": {"encoding": EncodingName.LGT_FOUR_QUBIT.value, "parameter": "alpha",
                           "description": "Teleported R_z(pi/2) sqrt(2) H R_z(alpha)"},
        "lgt.I1": {"encoding": EncodingName.LGT_FOUR_QUBIT.value, "parameter": "zeta",
                   "description": "Near identity with error linear in zeta"},
    }


def random_logical_states(width: int, trials: int, seed: int) -> List[np.ndarray]:
    """Haar-like random normalized states of `width` logical qubits."""
    rng = np.random.Generator(np.random.Philox(seed))
    states = []
    for _ in range(trials):
        vector = rng.normal(size=2 ** width) + 1j * rng.normal(size=2 ** width)
        states.append(vector / np.linalg.norm(vector))
    return states


def _max_distance(recipe: GateRecipe, states: Sequence[np.ndarray]) -> float:
    executor = get_executor(recipe.encoding.name)
    pool_size = settings.worker_count(len(states))
    if pool_size == 1:
        distances = [executor.distance(recipe, s) for s in states]
    else:
        with ThreadPoolExecutor(max_workers=pool_size) as pool:
            distances = list(pool.map(lambda s: executor.distance(recipe, s), states))
    return float(max(distances))


def verify_recipe(
    recipe: GateRecipe,
    trials: int = 16,
    seed: Optional[int] = None,
    sweep: Optional[Sequence[float]] = None,
) -> RecipeReport:
    """Run a recipe on random logical inputs and compare with its ideal gate.

    Exact recipes pass when every distance is at round-off level. Recipes
    with an error order also get a parameter sweep; they pass when the
    distance stays within the error budget and the log-log slope matches the
    order.

    Args:
        recipe: recipe to check
        trials: number of random input states
        seed: sampling seed (defaults to DEFAULT_SEED)
        sweep: parameter values for the slope fit

    Returns:
        RecipeReport
    """
    seed = settings.DEFAULT_SEED if seed is None else seed
    states = random_logical_states(recipe.logical_width, trials, seed)
    max_distance = _max_distance(recipe, states)
    allowed = recipe.allowed_distance()
    failures = []
    if max_distance > allowed:
        failures.append(f"distance {max_distance:.3e} exceeds {allowed:.3e}")

    slope = None
    distances: Dict[str, float] = {}
    if recipe.error_order is not None:
        values = list(DEFAULT_SWEEP if sweep is None else sweep)
        measured = []
        for value in values:
            swept = get_recipe(recipe.name, value)
            distance = _max_distance(swept, states)
            distances[repr(value)] = distance
            measured.append(distance)
            if distance > swept.allowed_distance():
                failures.append(f"distance {distance:.3e} at {value} exceeds the error budget")
        slope = float(np.polyfit(np.log(values), np.log(measured), 1)[0])
        if abs(slope - recipe.error_order) > SLOPE_TOLERANCE:
            failures.append(f"fitted slope {slope:.3f} differs from order {recipe.error_order}")

    report = RecipeReport(
        name=recipe.name,
        trials=trials,
        max_distance=max_distance,
        passed=not failures,
        fitted_slope=slope,
        distances=distances,
        failures=failures,
    )
    logger.info(
        f"Recipe {recipe.name}: max distance {max_distance:.3e}, "
        f"{'pass' if report.passed else 'FAIL'}"
    )
    return report


def verify_all(trials: int = 16, seed: Optional[int] = None) -> List[RecipeReport]:
    """Verify every supported recipe at its default parameter."""
    return [verify_recipe(get_recipe(name), trials, seed) for name in get_supported_recipes()]
