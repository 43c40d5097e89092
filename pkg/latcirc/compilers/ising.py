"""
Compile circuits over {T, T(x)T W_v T(x)T} into Ising models on planar circuit graphs.

The circuit U is wrapped as A U A with A = V^(1/2) on every qubit. Expanding
T = V^(1/2) W_h_bar V^(1/2) leaves exactly one V between consecutive W_h_bar
gates of a wire, so every merged vertex carries the field e^{i pi/4}, every
W_h_bar becomes a horizontal edge and every W_v a vertical edge, all with
coupling i.
"""
import logging
from fractions import Fraction
from typing import List, Tuple, Union

import numpy as np

from latcirc.compilers.base import (
    CompiledInstance,
    GridTimeline,
    LogicalCircuit,
    TargetKind,
    check_whitelist,
)
from latcirc.core.exceptions import UnsupportedGate
from latcirc.encodings.ising import ising_gate_set
from latcirc.models.circuit import Circuit, Gate, Kappa, ProductState
from latcirc.models.lattice import BoundaryCondition, ising_table

logger = logging.getLogger(__name__)

GATE_T = "T"
GATE_BLOCK = "TWvT"

EDGE_COUPLING = 1j
FIELD = np.exp(1j * np.pi / 4)

SourceOp = Tuple[str, Tuple[int, ...]]


def _classify(index: int, gate: Gate) -> SourceOp:
    gates = ising_gate_set()
    if gate.arity == 1 and np.allclose(gate.matrix, gates.t, atol=1e-12):
        return GATE_T, gate.targets
    if gate.arity == 2 and np.allclose(gate.matrix, gates.two_qubit_block(), atol=1e-12):
        _check_neighbours(index, gate.targets)
        return GATE_BLOCK, gate.targets
    raise UnsupportedGate(
        f"Gate {index} ({gate.label or 'unlabelled'}) on {gate.targets} is neither T nor "
        f"T(x)T W_v T(x)T"
    )


def _check_neighbours(index: int, targets: Tuple[int, ...]) -> None:
    if abs(targets[0] - targets[1]) != 1:
        raise UnsupportedGate(f"Gate {index} acts on non-neighbouring qubits {targets}")


def ising_ops(circuit: Union[Circuit, LogicalCircuit]) -> Tuple[int, List[SourceOp]]:
    """Width and (name, targets) list of a circuit over the Ising alphabet.

    Raises:
        UnsupportedGate: if a gate is outside the alphabet
    """
    if isinstance(circuit, LogicalCircuit):
        ops = []
        for index, op in enumerate(circuit.ops):
            if op.gate == GATE_T and len(op.targets) == 1:
                ops.append((GATE_T, op.targets))
            elif op.gate == GATE_BLOCK and len(op.targets) == 2:
                _check_neighbours(index, op.targets)
                ops.append((GATE_BLOCK, op.targets))
            else:
                raise UnsupportedGate(f"Unsupported Ising gate: {op.gate} on {op.targets}")
        return circuit.width, ops
    if circuit.q != 2:
        raise UnsupportedGate(f"Ising compilation needs qubits, got q={circuit.q}")
    return circuit.width, [_classify(i, g) for i, g in enumerate(circuit.gates)]


def reference_circuit(width: int, ops: List[SourceOp]) -> Circuit:
    """A U A as a unitary circuit."""
    gates = ising_gate_set()
    wrap = [Gate(gates.v_half, (r,), "V^1/2") for r in range(width)]
    body = [
        Gate(gates.t if name == GATE_T else gates.two_qubit_block(), targets, name)
        for name, targets in ops
    ]
    return Circuit(width, 2, tuple(wrap + body + wrap))


def _timeline(width: int, ops: List[SourceOp]) -> GridTimeline:
    timeline = GridTimeline(width, 2)
    table = ising_table(EDGE_COUPLING)
    for index, (name, targets) in enumerate(ops):
        if name == GATE_T:
            timeline.add_step(index, name).horizontal[targets[0]] = table
            continue
        upper = min(targets)
        for r in targets:
            timeline.add_step(index, name).horizontal[r] = table
        timeline.add_step(index, name).vertical[upper] = table
        for r in targets:
            timeline.add_step(index, name).horizontal[r] = table
    return timeline


def _compile(circuit: Union[Circuit, LogicalCircuit], boundary: BoundaryCondition):
    width, ops = ising_ops(circuit)
    model, provenance = _timeline(width, ops).build(
        boundary, node_field=np.array([FIELD, 1.0], dtype=complex)
    )
    edge_table = ising_table(EDGE_COUPLING)
    check_whitelist(
        model.edge_weights.values(), lambda t: np.allclose(t, edge_table), "Ising edge"
    )
    tau = model.graph.tau
    return width, ops, model, provenance, tau


def compile_to_ising(circuit: Union[Circuit, LogicalCircuit]) -> CompiledInstance:
    """Open-boundary Ising instance with Z / kappa = <+| A U A |+>, kappa = 2^(tau/2 + n).

    Raises:
        UnsupportedGate: if a gate is outside the alphabet
    """
    width, ops, model, provenance, tau = _compile(circuit, BoundaryCondition.open())
    plus = ProductState.plus(width, 2)
    kappa = Kappa(pow2=Fraction(tau, 2) + width)
    logger.info(
        f"Compiled {len(ops)} gates on {width} qubits to an Ising graph with tau={tau}, "
        f"{len(model.graph.nodes())} spins"
    )
    return CompiledInstance(
        model,
        kappa,
        TargetKind.MATRIX_ELEMENT,
        reference_circuit(width, ops),
        plus,
        plus,
        provenance,
        {"tau": tau, "spins": len(model.graph.nodes())},
    )


def dqc1_instance(circuit: Union[Circuit, LogicalCircuit]) -> CompiledInstance:
    """Periodic Ising instance whose Z' / kappa is the normalized trace 2^-n Tr(A U A).

    kappa here is 2^(tau/2) * 2^n; the circuit normalization alone is 2^(tau/2).

    Raises:
        UnsupportedGate: if a gate is outside the alphabet
    """
    width, ops, model, provenance, tau = _compile(circuit, BoundaryCondition.periodic())
    kappa = Kappa(pow2=Fraction(tau, 2) + width)
    logger.info(f"Compiled {len(ops)} gates on {width} qubits to a periodic Ising graph")
    return CompiledInstance(
        model,
        kappa,
        TargetKind.TRACE,
        reference_circuit(width, ops),
        provenance=provenance,
        metadata={"tau": tau, "circuit_kappa": str(Fraction(tau, 2))},
    )
