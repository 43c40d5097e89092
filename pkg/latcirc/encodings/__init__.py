"""
Logical encodings and the physical recipes realizing their gates.
"""
from latcirc.encodings.base import (
    AuxSpec,
    EncodingName,
    GateRecipe,
    LogicalEncoding,
    RecipeExecutor,
    RecipeReport,
    RecipeStep,
    StepKind,
)
from latcirc.encodings.factory import (
    get_encoding,
    get_executor,
    get_recipe,
    get_supported_recipes,
    verify_all,
    verify_recipe,
)
from latcirc.encodings.ising import (
    IsingGateSet,
    compose_euler,
    euler_angles,
    find_inverse_power,
    ising_gate_set,
)
from latcirc.encodings.lgt import lgt_logical_gates
from latcirc.encodings.potts import potts_logical_gates
from latcirc.encodings.six_vertex import six_vertex_gates

__all__ = [
    "AuxSpec",
    "EncodingName",
    "GateRecipe",
    "LogicalEncoding",
    "RecipeExecutor",
    "RecipeReport",
    "RecipeStep",
    "StepKind",
    "get_encoding",
    "get_executor",
    "get_recipe",
    "get_supported_recipes",
    "verify_all",
    "verify_recipe",
    "IsingGateSet",
    "compose_euler",
    "euler_angles",
    "find_inverse_power",
    "ising_gate_set",
    "lgt_logical_gates",
    "potts_logical_gates",
    "six_vertex_gates",
]
