"""
Compiler factory.
"""
import logging
from enum import Enum
from typing import Any, Dict, Union

from latcirc.compilers.base import CompiledInstance, LogicalCircuit
from latcirc.compilers.ising import compile_to_ising, dqc1_instance
from latcirc.compilers.lgt import compile_to_lgt
from latcirc.compilers.potts import compile_to_potts
from latcirc.compilers.six_vertex import compile_to_six_vertex
from latcirc.core.exceptions import UnsupportedGate
from latcirc.models.circuit import Circuit

logger = logging.getLogger(__name__)


class CompileTarget(str, Enum):
    """Lattice families a circuit can be compiled into."""
    ISING = "ising"
    SIX_VERTEX = "sixvertex"
    POTTS = "potts"
    LGT = "lgt"
    DQC1 = "dqc1"


def compile_circuit(
    target: CompileTarget, circuit: Union[Circuit, LogicalCircuit], **options: Any
) -> CompiledInstance:
    """Compile `circuit` for `target`.

    Args:
        target: lattice family
        circuit: a gate-level Circuit (ising, sixvertex, dqc1) or a
            LogicalCircuit (ising, dqc1, potts, lgt)
        **options: forwarded to the target compiler, e.g. epsilon for potts or
            input_bits / output_bits for potts and lgt

    Returns:
        CompiledInstance

    Raises:
        ValueError: If the target is not supported
        UnsupportedGate: If the circuit kind does not fit the target
    """
    try:
        target = CompileTarget(target)
    except ValueError:
        raise ValueError(f"Unsupported compile target: {target}") from None
    if target == CompileTarget.ISING:
        return compile_to_ising(circuit)
    if target == CompileTarget.DQC1:
        return dqc1_instance(circuit)
    if target == CompileTarget.SIX_VERTEX:
        if not isinstance(circuit, Circuit):
            raise UnsupportedGate("Six-vertex compilation needs a gate-level circuit")
        return compile_to_six_vertex(circuit, **options)
    if not isinstance(circuit, LogicalCircuit):
        raise UnsupportedGate(f"{target.value} compilation needs a logical circuit")
    if target == CompileTarget.POTTS:
        return compile_to_potts(circuit, **options)
    return compile_to_lgt(circuit, **options)


def get_supported_targets() -> Dict[str, Dict[str, Any]]:
    """Get information about the available compile targets.

    Returns:
        Dictionary with target information
    """
    return {
        CompileTarget.ISING.value: {
            "input": "circuit or logical",
            "alphabet": ["T", "TWvT"],
            "kappa": "2^(tau/2 + n)",
        },
        CompileTarget.SIX_VERTEX.value: {
            "input": "circuit",
            "alphabet": ["six-vertex-form two-qubit gates"],
            "kappa": "1",
        },
        CompileTarget.POTTS.value: {
            "input": "logical",
            "alphabet": ["I1", "P", "H", "I2", "CZ"],
            "kappa": "product of recipe normalizations",
        },
        CompileTarget.LGT.value: {
            "input": "logical",
            "alphabet": ["Rz", "diag", "CZ", "H"],
            "kappa": "2^(#H / 2)",
        },
        CompileTarget.DQC1.value: {
            "input": "circuit or logical",
            "alphabet": ["T", "TWvT"],
            "kappa": "2^(tau/2 + n)",
        },
    }
