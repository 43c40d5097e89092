"""
Unit tests for the self-check suites and the demo constructions.
"""
from unittest.mock import patch

import numpy as np

from latcirc.models.lattice import BoundaryCondition
from latcirc.services.spinlat import brute_force_partition
from latcirc.services.estimate import Estimate
from latcirc.services.verification import (
    BOUNDARY_INSTANCES,
    COMPILER_INSTANCES,
    ORACLE_INSTANCES,
    ROUND_TRIP_TOLERANCE,
    TELEPORT_ANGLES,
    CheckResult,
    SuiteReport,
    _check,
    _generator,
    bias_in_standard_errors,
    boundary_variant_suite,
    demo_constructions,
    estimator_suite,
    failure_rate,
    gate_identity_suite,
    oracle_equivalence_suite,
    random_ising_model,
    relative_error,
    run_all,
    six_vertex_gate_suite,
    teleport_angle_check,
    trace_by_fixed_boundaries,
)


class TestReports:
    """Test cases for check and suite reports."""

    def test_check_result_to_dict(self):
        """Test that skipped counts and details appear only when set."""
        plain = CheckResult("a", True, 0.0, 1e-9, 3).to_dict()
        assert plain == {"name": "a", "pass": True, "max_error": 0.0, "tolerance": 1e-9,
                         "instances": 3}
        detailed = CheckResult("b", False, 1.0, 1e-9, 2, skipped=1, detail="m=4").to_dict()
        assert detailed["skipped"] == 1
        assert detailed["detail"] == "m=4"

    def test_check_threshold(self):
        """Test that the worst error decides the outcome."""
        assert _check("ok", [1e-12, 1e-10], 1e-9).passed
        assert not _check("bad", [1e-12, 1e-3], 1e-9).passed
        assert _check("empty", [], 1e-9).max_error == 0.0

    def test_suite_passes_only_if_all_checks_pass(self):
        """Test the suite verdict."""
        suite = SuiteReport("s", [CheckResult("a", True, 0.0, 1.0, 1)])
        assert suite.passed
        suite.checks.append(CheckResult("b", False, 2.0, 1.0, 1))
        assert not suite.passed
        assert suite.to_dict()["pass"] is False

    def test_relative_error(self):
        """Test the absolute floor for small values."""
        assert relative_error(1e-3, 0.0) == 1e-3
        assert np.isclose(relative_error(110.0, 100.0), 0.1)


class TestSuites:
    """Test cases for the seeded self-check suites."""

    def test_oracle_equivalence(self):
        """Test every family on a few random instances."""
        assert oracle_equivalence_suite(instances=2, seed=0).passed

    def test_boundary_variants(self):
        """Test open and periodic variants and the trace identity."""
        report = boundary_variant_suite(instances=1, seed=0)
        assert report.passed
        names = {check.name for check in report.checks}
        for family in ("sixvertex", "ising", "potts", "lgt"):
            assert {f"{family}.open", f"{family}.periodic"} <= names

    def test_gate_identities(self):
        """Test the Ising composites, inverse search and Euler decompositions."""
        report = gate_identity_suite(seed=0)
        assert report.passed
        names = [check.name for check in report.checks]
        assert "ising.inverse_power" in names

    def test_six_vertex_gates(self):
        """Test the exchange gate and the singlet codeword."""
        assert six_vertex_gate_suite(seed=0).passed

    def test_estimators(self):
        """Test failure rates, bias and outcome frequencies of both estimators."""
        report = estimator_suite(seed=0, runs=20)
        assert report.passed
        assert {check.name for check in report.checks} == {
            "hadamard_test.failure_rate",
            "dqc1_trace.failure_rate",
            "hadamard_test.unbiased",
            "outcome_frequencies",
            "controlled_unitary",
        }

    def test_failure_rate(self):
        """Test that misses are counted per quadrature against each epsilon."""
        hit = Estimate(complex(0.5, 0.0), 0.1, 0.05, 10, 0.75, 0.5, 0)
        miss = Estimate(complex(0.5, 0.2), 0.1, 0.05, 10, 0.75, 0.4, 1)
        assert failure_rate([hit, miss], complex(0.5, 0.0)) == 0.5
        assert failure_rate([], 0j) == 0.0

    def test_bias_in_standard_errors(self):
        """Test the standard-error distance of a sample mean."""
        values = [1 + 1j, -1 - 1j, 1 + 1j, -1 - 1j]
        assert bias_in_standard_errors(values, 0j) == 0.0
        assert np.isclose(bias_in_standard_errors(values, 0.5 + 0j), 0.5 / (2 / np.sqrt(3) / 2))
        assert bias_in_standard_errors([1j, 1j], 0j) == np.inf

    def test_teleport_angles(self):
        """Test the teleported Hadamard at ten random incoming angles."""
        check = teleport_angle_check(seed=0)
        assert check.passed
        assert check.instances == TELEPORT_ANGLES == 10
        assert check.max_error < ROUND_TRIP_TOLERANCE

    def test_default_instance_counts(self):
        """Test that a full run uses 50 models per family and 25 circuits per compiler."""
        assert ORACLE_INSTANCES >= 50
        assert COMPILER_INSTANCES >= 25
        with patch("latcirc.services.verification.oracle_equivalence_suite") as oracle, \
                patch("latcirc.services.verification.boundary_variant_suite") as variants, \
                patch("latcirc.services.verification.gate_identity_suite"), \
                patch("latcirc.services.verification.six_vertex_gate_suite"), \
                patch("latcirc.services.verification.recipe_suite"), \
                patch("latcirc.services.verification.compiler_suite") as compilers, \
                patch("latcirc.services.verification.estimator_suite"):
            run_all(seed=3)
        oracle.assert_called_once_with(ORACLE_INSTANCES, 3)
        variants.assert_called_once_with(BOUNDARY_INSTANCES, 3)
        compilers.assert_called_once_with(COMPILER_INSTANCES, 3)

    def test_trace_by_fixed_boundaries(self):
        """Test that a periodic Z sums fixed boundaries with equal rows."""
        model = random_ising_model(_generator(9), BoundaryCondition.periodic())
        assert np.isclose(trace_by_fixed_boundaries(model), brute_force_partition(model).value)

    def test_run_all_order(self):
        """Test that run_all reports every suite in order."""
        with patch("latcirc.services.verification.recipe_suite") as recipes, \
                patch("latcirc.services.verification.compiler_suite") as compilers:
            recipes.return_value = SuiteReport("recipes")
            compilers.return_value = SuiteReport("compiler_round_trips")
            reports = run_all(oracle_instances=1, compiler_instances=1, trials=1, seed=0)
        assert [r.name for r in reports] == [
            "oracle_equivalence",
            "boundary_variants",
            "gate_identities",
            "six_vertex_gates",
            "recipes",
            "compiler_round_trips",
            "estimators",
        ]


class TestDemo:
    """Test cases for the demo constructions."""

    def test_all_constructions_pass(self):
        """Test the smallest instance of every construction."""
        entries = demo_constructions()
        assert [e["name"] for e in entries] == [
            "sixvertex.exchange",
            "ising.entangling_block",
            "potts.controlled_z",
            "lgt.diagonal_phase",
        ]
        assert all(e["pass"] for e in entries)

    def test_expected_values(self):
        """Test the closed-form expectations of the Potts and LGT demos."""
        entries = {e["name"]: e for e in demo_constructions()}
        assert entries["potts.controlled_z"]["expected"] == [-1.0, 0.0]
        assert entries["lgt.diagonal_phase"]["expected"] == [0.0, 1.0]
