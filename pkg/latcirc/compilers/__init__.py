"""
Circuit-to-lattice compilers.
"""
from latcirc.compilers.base import (
    CompiledInstance,
    LogicalCircuit,
    LogicalOp,
    ProvenanceEntry,
    TargetKind,
)
from latcirc.compilers.factory import CompileTarget, compile_circuit, get_supported_targets
from latcirc.compilers.ising import compile_to_ising, dqc1_instance
from latcirc.compilers.lgt import compile_to_lgt
from latcirc.compilers.potts import compile_to_potts
from latcirc.compilers.six_vertex import compile_to_six_vertex

__all__ = [
    "CompiledInstance",
    "LogicalCircuit",
    "LogicalOp",
    "ProvenanceEntry",
    "TargetKind",
    "CompileTarget",
    "compile_circuit",
    "get_supported_targets",
    "compile_to_ising",
    "dqc1_instance",
    "compile_to_lgt",
    "compile_to_potts",
    "compile_to_six_vertex",
]
