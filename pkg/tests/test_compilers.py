"""
Unit tests for the circuit-to-lattice compilers.
"""
from fractions import Fraction

import numpy as np
import pytest

from latcirc.compilers.base import LogicalCircuit, LogicalOp, TargetKind
from latcirc.compilers.factory import CompileTarget, compile_circuit, get_supported_targets
from latcirc.compilers.ising import GATE_BLOCK, GATE_T, compile_to_ising, dqc1_instance
from latcirc.compilers.lgt import BLOCK_SHAPE, block_counts, compile_to_lgt, pad_lattice
from latcirc.compilers.potts import compile_to_potts
from latcirc.compilers.six_vertex import compile_to_six_vertex
from latcirc.core.exceptions import (
    BadEpsilon,
    BlockBudget,
    DimensionMismatch,
    MalformedGeometry,
    NotSixVertexForm,
    UnsupportedGate,
)
from latcirc.encodings.ising import HADAMARD, ising_gate_set
from latcirc.encodings.six_vertex import exchange_unitary, six_vertex_gates
from latcirc.models.circuit import Circuit, Gate
from latcirc.models.lattice import LgtModel
from latcirc.services.spinlat import brute_force_partition, validate_gauge_fixing
from latcirc.services.verification import (
    ROUND_TRIP_TOLERANCE,
    compiler_suite,
    potts_tolerance,
    round_trip_errors,
)

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def logical(width, *ops):
    return LogicalCircuit(width, tuple(LogicalOp(*op) for op in ops))


class TestLogicalCircuit:
    """Test cases for logical circuits."""

    def test_target_outside_width(self):
        """Test that ops must fit the register."""
        with pytest.raises(DimensionMismatch):
            logical(1, ("CZ", (0, 1)))


class TestSixVertexCompiler:
    """Test cases for the six-vertex compiler."""

    def test_exchange_round_trip(self):
        """Test Z / kappa = <0101| U |0101> for one exchange gate."""
        t = 0.4
        circuit = Circuit(2, 2, (Gate(six_vertex_gates(t)["U"], (0, 1), "U"),))
        instance = compile_to_six_vertex(circuit)
        assert np.isclose(instance.target_value(), exchange_unitary(t)[0b01, 0b01])
        errors, complete = round_trip_errors(instance)
        assert complete
        assert max(errors) <= ROUND_TRIP_TOLERANCE

    def test_disjoint_gates_share_a_column(self):
        """Test greedy column packing."""
        u = six_vertex_gates(0.2)["U"]
        circuit = Circuit(4, 2, (Gate(u, (0, 1), "U"), Gate(u, (2, 3), "U")))
        instance = compile_to_six_vertex(circuit)
        interactions = [entry.interactions[0] for entry in instance.provenance]
        assert interactions == ["vertex(0,0)", "vertex(0,2)"]

    def test_prefactor_goes_into_kappa(self):
        """Test kappa = 1 / prefactor."""
        u = six_vertex_gates(0.2)["U"]
        circuit = Circuit(2, 2, (Gate(u, (0, 1)),), prefactor=0.5)
        instance = compile_to_six_vertex(circuit, [0, 1], [1, 0])
        assert np.isclose(instance.kappa.value, 2.0)
        errors, _ = round_trip_errors(instance)
        assert max(errors) <= ROUND_TRIP_TOLERANCE

    def test_not_six_vertex_form(self):
        """Test that CNOT violates the sparsity pattern."""
        with pytest.raises(NotSixVertexForm):
            compile_to_six_vertex(Circuit(2, 2, (Gate(CNOT, (0, 1), "CNOT"),)))

    def test_non_neighbour_gate(self):
        """Test that gates must act on adjacent wires."""
        with pytest.raises(UnsupportedGate):
            compile_to_six_vertex(Circuit(3, 2, (Gate(np.eye(4), (0, 2)),)))


class TestIsingCompiler:
    """Test cases for the Ising compiler and DQC1 instances."""

    def test_logical_round_trip(self):
        """Test <+| A U A |+> for T then the entangling block."""
        circuit = logical(2, (GATE_T, (0,)), (GATE_BLOCK, (0, 1)))
        instance = compile_to_ising(circuit)
        tau = instance.metadata["tau"]
        assert instance.kappa.pow2 == Fraction(tau, 2) + 2
        assert instance.target == TargetKind.MATRIX_ELEMENT
        errors, _ = round_trip_errors(instance)
        assert max(errors) <= ROUND_TRIP_TOLERANCE

    def test_gate_level_circuit(self):
        """Test that T gates are recognised in a plain circuit."""
        circuit = Circuit(1, 2, (Gate(ising_gate_set().t, (0,), "T"),) * 2)
        instance = compile_to_ising(circuit)
        assert instance.metadata["tau"] == 2
        errors, _ = round_trip_errors(instance)
        assert max(errors) <= ROUND_TRIP_TOLERANCE

    def test_unsupported_gate(self):
        """Test that a plain Hadamard is outside the alphabet."""
        with pytest.raises(UnsupportedGate):
            compile_to_ising(Circuit(1, 2, (Gate(HADAMARD, (0,), "H"),)))

    def test_non_neighbour_block(self):
        """Test that the entangling block needs adjacent qubits."""
        with pytest.raises(UnsupportedGate):
            compile_to_ising(logical(3, (GATE_BLOCK, (0, 2))))

    def test_dqc1_trace(self):
        """Test Z' / kappa = Tr(A U A) / 2^n."""
        instance = dqc1_instance(logical(2, (GATE_BLOCK, (0, 1)), (GATE_T, (1,))))
        assert instance.target == TargetKind.TRACE
        errors, _ = round_trip_errors(instance)
        assert max(errors) <= ROUND_TRIP_TOLERANCE


class TestPottsCompiler:
    """Test cases for the Potts compiler."""

    def test_controlled_z(self):
        """Test <11| CZ |11> = -1."""
        circuit = logical(2, ("CZ", (0, 1)))
        instance = compile_to_potts(circuit, input_bits=(1, 1), output_bits=(1, 1))
        assert np.isclose(instance.target_value(), -1.0)
        errors, _ = round_trip_errors(instance)
        assert max(errors) <= ROUND_TRIP_TOLERANCE

    def test_hadamard_within_leakage(self):
        """Test that H compiles within its epsilon^2 error."""
        circuit = logical(1, ("H", (0,)))
        instance = compile_to_potts(circuit, 0.01, input_bits=(0,), output_bits=(1,))
        assert instance.metadata["epsilon"] == 0.01
        assert instance.metadata["auxiliaries"] == len(instance.model.pendants)
        errors, _ = round_trip_errors(instance)
        assert max(errors) <= potts_tolerance(circuit, 0.01)

    def test_padding_keeps_value(self):
        """Test that inert padding edges leave Z unchanged."""
        circuit = logical(2, ("P", (0,)), ("CZ", (0, 1)))
        instance = compile_to_potts(circuit, input_bits=(1, 1), output_bits=(1, 1),
                                    pad_borders=True)
        errors, _ = round_trip_errors(instance)
        assert max(errors) <= ROUND_TRIP_TOLERANCE

    def test_errors(self):
        """Test unsupported gates, bad epsilon and boundary widths."""
        with pytest.raises(UnsupportedGate):
            compile_to_potts(logical(1, ("T", (0,))))
        with pytest.raises(BadEpsilon):
            compile_to_potts(logical(1, ("H", (0,))), epsilon=0.2)
        with pytest.raises(DimensionMismatch):
            compile_to_potts(logical(1, ("P", (0,))), input_bits=(0, 1))


class TestLgtCompiler:
    """Test cases for the Z2 gauge compiler."""

    def test_rotation(self):
        """Test <1| R_z(xi) |1> = e^{i xi}."""
        circuit = logical(1, ("Rz", (0,), {"xi": 0.7}))
        instance = compile_to_lgt(circuit, (1,), (1,))
        assert np.isclose(instance.target_value(), np.exp(0.7j))
        assert instance.kappa.pow2 == 0
        errors, _ = round_trip_errors(instance)
        assert max(errors) <= ROUND_TRIP_TOLERANCE

    def test_diagonal_phase(self):
        """Test <10| diag(1, i, i, 1) |10> = i."""
        instance = compile_to_lgt(logical(2, ("diag", (0, 1))), (1, 0), (1, 0))
        errors, _ = round_trip_errors(instance)
        assert max(errors) <= ROUND_TRIP_TOLERANCE

    def test_teleported_hadamard(self):
        """Test that each H adds a factor sqrt(2) to kappa."""
        instance = compile_to_lgt(logical(1, ("H", (0,))), (0,), (1,))
        assert instance.metadata["teleports"] == 1
        assert instance.kappa.pow2 == Fraction(1, 2)
        errors, _ = round_trip_errors(instance)
        assert max(errors) <= ROUND_TRIP_TOLERANCE

    def test_block_budget(self):
        """Test that oversized lattices are refused."""
        with pytest.raises(BlockBudget):
            compile_to_lgt(logical(1, ("H", (0,))), block_budget=(0, 0, 0))

    def test_unsupported_gate(self):
        """Test that only the LGT alphabet compiles."""
        with pytest.raises(UnsupportedGate):
            compile_to_lgt(logical(1, ("T", (0,))))

    @pytest.mark.parametrize(
        "ops, bits",
        [
            ([("Rz", (0,), {"xi": 0.7})], ((1,), (1,))),
            ([("H", (0,))], ((0,), (1,))),
            ([("diag", (0, 1)), ("H", (1,))], ((1, 0), (1, 1))),
        ],
    )
    def test_padding_to_blocks_keeps_partition(self, ops, bits):
        """Test that whole (4, 12, 7) blocks give the same Z as the compact lattice."""
        circuit = logical(len(bits[0]), *ops)
        compact = compile_to_lgt(circuit, *bits)
        padded = compile_to_lgt(circuit, *bits, pad_to_blocks=True)
        assert all(e % size == 0 for e, size in zip(padded.model.extents, BLOCK_SHAPE))
        assert padded.metadata["blocks"] == list(block_counts(compact.model.extents))
        assert validate_gauge_fixing(padded.model) is None
        z = brute_force_partition(padded.model).value
        assert np.isclose(z, brute_force_partition(compact.model).value)
        assert np.isclose(z / padded.kappa.value, padded.target_value())

    def test_block_counts(self):
        """Test rounding extents up to whole blocks."""
        assert block_counts((2, 5, 4)) == (1, 1, 1)
        assert block_counts((4, 13, 8)) == (1, 2, 2)

    def test_pad_lattice_errors(self):
        """Test that padding never shrinks and needs the compiled lattice form."""
        model = compile_to_lgt(logical(1, ("Rz", (0,), {"xi": 0.7}))).model
        assert pad_lattice(model, model.extents) is model
        with pytest.raises(MalformedGeometry):
            pad_lattice(model, (1, 1, 1))
        with pytest.raises(MalformedGeometry):
            pad_lattice(LgtModel((2, 2, 2)), BLOCK_SHAPE)


class TestCompilerFactory:
    """Test cases for target dispatch."""

    def test_unknown_target(self):
        """Test that unknown targets raise ValueError."""
        with pytest.raises(ValueError):
            compile_circuit("dimer", logical(1, ("T", (0,))))

    def test_circuit_kind_checked(self):
        """Test that targets refuse the wrong circuit kind."""
        with pytest.raises(UnsupportedGate):
            compile_circuit(CompileTarget.SIX_VERTEX, logical(1, ("T", (0,))))
        with pytest.raises(UnsupportedGate):
            compile_circuit(CompileTarget.POTTS, Circuit(1, 2))

    def test_options_forwarded(self):
        """Test that keyword options reach the target compiler."""
        instance = compile_circuit("potts", logical(1, ("H", (0,))), epsilon=0.02)
        assert instance.metadata["epsilon"] == 0.02

    def test_supported_targets(self):
        """Test that every target is described."""
        assert set(get_supported_targets()) == {target.value for target in CompileTarget}

    def test_compiler_suite(self):
        """Test random round trips for every compiler."""
        assert compiler_suite(instances=2, seed=0).passed
