"""
Unit tests for the command line interface.
"""
import json
from unittest.mock import patch

import numpy as np
import pytest

from latcirc.scripts.cli import EXIT_FAILED, EXIT_INVALID, EXIT_OK, main
from latcirc.services.verification import CheckResult, SuiteReport


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def pair(values):
    return complex(values[0], values[1])


class TestPartitionAndMap:
    """Test cases for partition, map and simulate."""

    def test_partition(self, capsys, fixtures_dir):
        """Test Z = 6 for the single-edge Ising fixture."""
        code, payload = run(capsys, "partition", str(fixtures_dir / "ising_single_edge.json"))
        assert code == EXIT_OK
        assert payload["latcirc_schema"] == 1
        assert payload["Z"] == [6.0, 0.0]
        assert payload["provenance"] == "oracle"

    def test_map_then_simulate(self, capsys, fixtures_dir, tmp_path):
        """Test that the mapped circuit reproduces the oracle value."""
        mapped = tmp_path / "mapped.json"
        code, _ = run(capsys, "map", str(fixtures_dir / "ising_single_edge.json"),
                      "-o", str(mapped))
        assert code == EXIT_OK
        assert json.loads(mapped.read_text())["kind"] == "mapped"
        code, payload = run(capsys, "simulate", str(mapped))
        assert code == EXIT_OK
        assert np.isclose(pair(payload["Z"]), 6.0)

    def test_simulate_vertex_fixture(self, capsys, fixtures_dir, tmp_path):
        """Test a fixed-boundary vertex model through map and simulate."""
        mapped = tmp_path / "mapped.json"
        run(capsys, "map", str(fixtures_dir / "six_vertex_single.json"), "-o", str(mapped))
        code, payload = run(capsys, "simulate", str(mapped))
        assert code == EXIT_OK
        assert np.isclose(pair(payload["Z"]), 1 / np.sqrt(2))

    def test_simulate_circuit(self, capsys, fixtures_dir):
        """Test the trace and a matrix element of the two-qubit circuit."""
        path = str(fixtures_dir / "two_qubit_circuit.json")
        code, payload = run(capsys, "simulate", path)
        assert code == EXIT_OK
        assert np.isclose(pair(payload["trace"]), np.sqrt(2))
        code, payload = run(capsys, "simulate", path, "--left", "00", "--right", "00")
        assert np.isclose(pair(payload["matrix_element"]), 1 / np.sqrt(2))

    def test_simulate_refuses_logical(self, capsys, fixtures_dir):
        """Test that logical circuits cannot be simulated directly."""
        code, _ = run(capsys, "simulate", str(fixtures_dir / "logical_ising.json"))
        assert code == EXIT_INVALID


class TestCompile:
    """Test cases for compile."""

    def test_compile_then_partition(self, capsys, fixtures_dir, tmp_path):
        """Test Z / kappa of a compiled Ising instance against its expected value."""
        model = tmp_path / "model.json"
        audit = tmp_path / "audit.json"
        code, _ = run(capsys, "compile", str(fixtures_dir / "logical_ising.json"),
                      "--target", "ising", "-o", str(model), "--audit", str(audit))
        assert code == EXIT_OK
        compiled = json.loads(model.read_text())["compiled"]
        assert compiled["target"] == "ising"
        assert len(json.loads(audit.read_text())["provenance"]) == 3

        code, payload = run(capsys, "partition", str(model))
        assert code == EXIT_OK
        value = pair(payload["Z"]) / pair(compiled["kappa"])
        assert np.isclose(value, pair(compiled["expected"]), atol=1e-9)

    def test_compile_lgt_padded(self, capsys, tmp_path):
        """Test that --pad-blocks writes whole blocks with an unchanged Z / kappa."""
        source = tmp_path / "hadamard.json"
        source.write_text(json.dumps({
            "latcirc_schema": 1,
            "kind": "logical",
            "width": 1,
            "ops": [{"gate": "H", "targets": [0]}],
        }))
        model = tmp_path / "model.json"
        code, _ = run(capsys, "compile", str(source), "--target", "lgt", "--pad-blocks",
                      "--output-bits", "1", "-o", str(model))
        assert code == EXIT_OK
        compiled = json.loads(model.read_text())["compiled"]
        assert compiled["metadata"]["extents"][0] % 4 == 0
        assert compiled["metadata"]["extents"][1] % 12 == 0
        assert compiled["metadata"]["extents"][2] % 7 == 0

        code, payload = run(capsys, "partition", str(model))
        assert code == EXIT_OK
        value = pair(payload["Z"]) / pair(compiled["kappa"])
        assert np.isclose(value, pair(compiled["expected"]), atol=1e-9)

    def test_compile_unsupported_target(self, capsys, fixtures_dir):
        """Test that argparse rejects unknown targets."""
        with pytest.raises(SystemExit):
            main(["compile", str(fixtures_dir / "logical_ising.json"), "--target", "dimer"])

    def test_compile_unsupported_gate(self, capsys, fixtures_dir):
        """Test that the Potts compiler refuses Ising gates."""
        code, _ = run(capsys, "compile", str(fixtures_dir / "logical_ising.json"),
                      "--target", "potts")
        assert code == EXIT_INVALID


class TestEstimate:
    """Test cases for estimate."""

    def test_hadamard_test(self, capsys, fixtures_dir):
        """Test a seeded Hadamard-test estimate."""
        code, payload = run(capsys, "estimate", str(fixtures_dir / "two_qubit_circuit.json"),
                            "--left", "00", "--right", "00", "--epsilon", "0.1",
                            "--seed", "4")
        assert code == EXIT_OK
        assert payload["seed"] == 4
        assert payload["rng"] == "numpy.random.Philox"
        assert abs(payload["value"][0] - 1 / np.sqrt(2)) <= 0.1

    def test_trace(self, capsys, fixtures_dir):
        """Test the DQC1 trace estimate with an explicit shot count."""
        code, payload = run(capsys, "estimate", str(fixtures_dir / "two_qubit_circuit.json"),
                            "--trace", "--shots", "20000", "--seed", "1")
        assert code == EXIT_OK
        assert payload["shots_used"] == 20000
        assert abs(payload["value"][0] - np.sqrt(2) / 4) <= 0.05

    def test_bad_config(self, capsys, fixtures_dir):
        """Test that an invalid budget exits with the invalid-input code."""
        code, _ = run(capsys, "estimate", str(fixtures_dir / "two_qubit_circuit.json"),
                      "--delta", "1.5")
        assert code == EXIT_INVALID


class TestVerify:
    """Test cases for verify and demo."""

    def test_single_recipe(self, capsys):
        """Test verifying one recipe."""
        code, payload = run(capsys, "verify", "--recipe", "potts.CZ", "--trials", "2")
        assert code == EXIT_OK
        assert payload["pass"] is True
        assert payload["name"] == "potts.CZ"

    def test_unknown_recipe(self, capsys):
        """Test that unknown recipe names are invalid input."""
        code, _ = run(capsys, "verify", "--recipe", "potts.T")
        assert code == EXIT_INVALID

    def test_verify_needs_a_mode(self, capsys):
        """Test that verify without --all or --recipe is invalid input."""
        code, _ = run(capsys, "verify")
        assert code == EXIT_INVALID

    def test_all_failed_suite(self, capsys):
        """Test that a failing suite gives exit code 1."""
        failing = SuiteReport("x", [CheckResult("c", False, 1.0, 1e-9, 1)])
        with patch("latcirc.scripts.cli.run_all", return_value=[failing]) as run_all:
            code, payload = run(
                capsys, "verify", "--all", "--instances", "3", "--compiler-instances", "2",
                "--seed", "5",
            )
        run_all.assert_called_once_with(3, 2, 8, 5)
        assert code == EXIT_FAILED
        assert payload["pass"] is False
        assert payload["suites"][0]["checks"][0]["name"] == "c"

    def test_demo(self, capsys, tmp_path):
        """Test the demo constructions through the CLI."""
        output = tmp_path / "demo.json"
        code, _ = run(capsys, "demo", "-o", str(output))
        assert code == EXIT_OK
        payload = json.loads(output.read_text())
        assert payload["pass"] is True
        assert len(payload["constructions"]) == 4


class TestInvalidInput:
    """Test cases for malformed input documents."""

    def test_foreign_schema_version(self, capsys, tmp_path, fixtures_dir):
        """Test that documents must carry the current schema version."""
        data = json.loads((fixtures_dir / "ising_single_edge.json").read_text())
        data["latcirc_schema"] = 2
        path = tmp_path / "old.json"
        path.write_text(json.dumps(data))
        code, payload = run(capsys, "partition", str(path))
        assert code == EXIT_INVALID
        assert payload is None

    def test_missing_file(self, capsys, tmp_path):
        """Test that unreadable inputs are invalid input."""
        code, _ = run(capsys, "map", str(tmp_path / "missing.json"))
        assert code == EXIT_INVALID

    def test_malformed_model(self, capsys, tmp_path):
        """Test that schema validation errors are invalid input."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"latcirc_schema": 1, "family": "edge", "q": 2}))
        code, _ = run(capsys, "partition", str(path))
        assert code == EXIT_INVALID
