"""
latcirc command line interface.

Every subcommand writes one JSON document to stdout (or --output) and logs
to stderr, so subcommands can be chained with pipes.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from pydantic import ValidationError

from latcirc.compilers.base import LogicalCircuit, LogicalOp
from latcirc.compilers.factory import CompileTarget, compile_circuit
from latcirc.core.config import settings
from latcirc.core.exceptions import InvalidConfig, LatcircError
from latcirc.encodings.factory import get_recipe, get_supported_recipes, verify_recipe
from latcirc.models.circuit import BasisState, Circuit
from latcirc.models.lattice import BoundaryKind
from latcirc.models.schema import (
    SCHEMA_VERSION,
    LogicalCircuitDocument,
    MappedCircuitDocument,
    circuit_adapter,
    circuit_to_document,
    document_to_circuit,
    document_to_kappa,
    document_to_state,
    dump_model,
    kappa_to_document,
    load_model,
    state_to_document,
    to_pair,
)
from latcirc.services import qcirc
from latcirc.services.estimate import EstimatorConfig, dqc1_trace_estimate, hadamard_test
from latcirc.services.mapping import MappedCircuit, map_model
from latcirc.services.spinlat import brute_force_partition
from latcirc.services.verification import (
    COMPILER_INSTANCES,
    ORACLE_INSTANCES,
    demo_constructions,
    run_all,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def _read_document(path: str) -> Dict[str, Any]:
    """Load a JSON document from a file or "-" (stdin) and check its schema version.

    Raises:
        InvalidConfig: if the document is not a current latcirc document
    """
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    data = json.loads(text)
    if not isinstance(data, dict) or data.get("latcirc_schema") != SCHEMA_VERSION:
        raise InvalidConfig(f"{path} is not a latcirc_schema {SCHEMA_VERSION} document")
    return data


def _emit(payload: Dict[str, Any], output: Optional[str] = None) -> None:
    text = json.dumps({"latcirc_schema": SCHEMA_VERSION, **payload}, indent=2, sort_keys=True)
    if output:
        Path(output).write_text(text + "\n")
        logger.info(f"Wrote {output}")
    else:
        print(text)


def _digits(text: Optional[str], width: int) -> BasisState:
    if text is None:
        return BasisState((0,) * width)
    return BasisState(tuple(int(d) for d in text))


def _logical_circuit(document: LogicalCircuitDocument) -> LogicalCircuit:
    ops = tuple(LogicalOp(op.gate, tuple(op.targets), dict(op.params)) for op in document.ops)
    return LogicalCircuit(document.width, ops)


def _mapped_document(mapped: MappedCircuit) -> Dict[str, Any]:
    base = circuit_to_document(mapped.circuit)
    document = MappedCircuitDocument(
        **base.model_dump(exclude={"kind"}),
        mode=mapped.mode,
        kappa=to_pair(mapped.kappa.value),
        kappa_parts=kappa_to_document(mapped.kappa),
        left=state_to_document(mapped.left),
        right=state_to_document(mapped.right),
    )
    return document.model_dump(mode="json")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_partition(args: argparse.Namespace) -> int:
    model = load_model(_read_document(args.model))
    result = brute_force_partition(model, cap=args.cap)
    _emit(
        {"Z": to_pair(result.value), "provenance": result.provenance.value, "q": model.q},
        args.output,
    )
    return EXIT_OK


def cmd_map(args: argparse.Namespace) -> int:
    model = load_model(_read_document(args.model))
    _emit(_mapped_document(map_model(model)), args.output)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    document = circuit_adapter.validate_python(_read_document(args.circuit))
    if isinstance(document, LogicalCircuitDocument):
        raise InvalidConfig("simulate needs a gate-level or mapped circuit")
    circuit = document_to_circuit(document)
    if isinstance(document, MappedCircuitDocument):
        kappa = document_to_kappa(document.kappa_parts)
        mapped = MappedCircuit(
            circuit,
            kappa,
            document.mode,
            document_to_state(document.left),
            document_to_state(document.right),
        )
        if mapped.mode == BoundaryKind.PERIODIC:
            raw = qcirc.trace(circuit, cap=args.cap)
        else:
            raw = mapped.raw()
        payload = {
            "Z": to_pair(kappa.value * raw),
            "raw": to_pair(raw),
            "kappa": to_pair(kappa.value),
            "provenance": "circuit",
        }
    elif args.left is None and args.right is None:
        payload = {"trace": to_pair(qcirc.trace(circuit, cap=args.cap))}
    else:
        left = _digits(args.left, circuit.width)
        right = _digits(args.right, circuit.width)
        payload = {"matrix_element": to_pair(qcirc.matrix_element(circuit, left, right))}
    _emit(payload, args.output)
    return EXIT_OK


def cmd_compile(args: argparse.Namespace) -> int:
    document = circuit_adapter.validate_python(_read_document(args.circuit))
    if isinstance(document, LogicalCircuitDocument):
        source: Any = _logical_circuit(document)
    else:
        source = document_to_circuit(document)
    options: Dict[str, Any] = {}
    target = CompileTarget(args.target)
    if target == CompileTarget.POTTS and args.epsilon is not None:
        options["epsilon"] = args.epsilon
    if target in (CompileTarget.POTTS, CompileTarget.LGT):
        if args.input_bits is not None:
            options["input_bits"] = [int(d) for d in args.input_bits]
        if args.output_bits is not None:
            options["output_bits"] = [int(d) for d in args.output_bits]
    if target == CompileTarget.LGT and args.pad_blocks:
        options["pad_to_blocks"] = True
    instance = compile_circuit(target, source, **options)

    payload = dump_model(instance.model)
    payload["compiled"] = {
        "target": target.value,
        "quantity": instance.describe_target(),
        "kappa": to_pair(instance.kappa.value),
        "kappa_parts": kappa_to_document(instance.kappa).model_dump(mode="json"),
        "expected": to_pair(instance.target_value()),
        "metadata": instance.metadata,
    }
    if args.audit:
        audit = {
            "latcirc_schema": SCHEMA_VERSION,
            "provenance": [entry.to_dict() for entry in instance.provenance],
        }
        Path(args.audit).write_text(json.dumps(audit, indent=2, sort_keys=True) + "\n")
        logger.info(f"Wrote provenance of {len(instance.provenance)} ops to {args.audit}")
    _emit(payload, args.output)
    return EXIT_OK


def _estimator_config(args: argparse.Namespace) -> EstimatorConfig:
    return EstimatorConfig(shots=args.shots, epsilon=args.epsilon, delta=args.delta, seed=args.seed)


def cmd_estimate(args: argparse.Namespace) -> int:
    document = circuit_adapter.validate_python(_read_document(args.circuit))
    if isinstance(document, LogicalCircuitDocument):
        raise InvalidConfig("estimate needs a gate-level circuit")
    circuit: Circuit = document_to_circuit(document)
    cfg = _estimator_config(args)
    if args.trace:
        estimate = dqc1_trace_estimate(circuit, cfg)
    else:
        left = _digits(args.left, circuit.width)
        right = _digits(args.right, circuit.width)
        estimate = hadamard_test(circuit, left, right, cfg)
    _emit(estimate.to_dict(), args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.recipe:
        if args.recipe not in get_supported_recipes():
            raise InvalidConfig(f"Unknown recipe: {args.recipe}")
        recipe = get_recipe(args.recipe, args.epsilon)
        report = verify_recipe(recipe, args.trials, args.seed)
        _emit(report.to_dict(), args.output)
        return EXIT_OK if report.passed else EXIT_FAILED
    if not args.all:
        raise InvalidConfig("verify needs --all or --recipe NAME")
    suites = run_all(args.instances, args.compiler_instances, args.trials, args.seed)
    passed = all(suite.passed for suite in suites)
    _emit({"pass": passed, "suites": [suite.to_dict() for suite in suites]}, args.output)
    return EXIT_OK if passed else EXIT_FAILED


def cmd_demo(args: argparse.Namespace) -> int:
    entries = demo_constructions()
    passed = all(entry["pass"] for entry in entries)
    _emit({"pass": passed, "constructions": entries}, args.output)
    return EXIT_OK if passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latcirc", description="Classical lattice models as quantum circuits"
    )
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Log level on stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, handler) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("-o", "--output", help="Write JSON here instead of stdout")
        sub.set_defaults(handler=handler)
        return sub

    partition = add("partition", "Brute-force partition function of a model", cmd_partition)
    partition.add_argument("model", help="Model JSON file or - for stdin")
    partition.add_argument("--cap", type=int, help="Maximum enumerated free spins")

    mapping = add("map", "Map a model to a circuit", cmd_map)
    mapping.add_argument("model", help="Model JSON file or - for stdin")

    simulate = add("simulate", "Evaluate a mapped circuit or a circuit quantity", cmd_simulate)
    simulate.add_argument("circuit", help="Circuit JSON file or - for stdin")
    simulate.add_argument("--left", help="Output basis digits, e.g. 01")
    simulate.add_argument("--right", help="Input basis digits, e.g. 01")
    simulate.add_argument("--cap", type=int, help="Maximum trace width in qubits")

    compile_parser = add("compile", "Compile a circuit into a lattice model", cmd_compile)
    compile_parser.add_argument("circuit", help="Circuit JSON file or - for stdin")
    compile_parser.add_argument(
        "--target", required=True, choices=[t.value for t in CompileTarget]
    )
    compile_parser.add_argument("--epsilon", type=float, help="Potts filter parameter")
    compile_parser.add_argument("--input-bits", help="Logical input basis state, e.g. 01")
    compile_parser.add_argument("--output-bits", help="Logical output basis state, e.g. 01")
    compile_parser.add_argument("--audit", help="Write per-gate provenance to this file")
    compile_parser.add_argument(
        "--pad-blocks", action="store_true", help="Grow an LGT lattice to whole (4, 12, 7) blocks"
    )

    estimate = add("estimate", "Sample the Hadamard test or the DQC1 trace", cmd_estimate)
    estimate.add_argument("circuit", help="Circuit JSON file or - for stdin")
    estimate.add_argument("--left", help="Output basis digits")
    estimate.add_argument("--right", help="Input basis digits")
    estimate.add_argument("--trace", action="store_true", help="Estimate Tr(U) / q^n")
    estimate.add_argument("--epsilon", type=float, help="Target additive error")
    estimate.add_argument("--delta", type=float, help="Failure probability")
    estimate.add_argument("--shots", type=int, help="Shots per quadrature")
    estimate.add_argument("--seed", type=int, help="Sampling seed")

    verify = add("verify", "Run the self-check suites", cmd_verify)
    verify.add_argument("--all", action="store_true", help="Run every suite")
    verify.add_argument("--recipe", help="Verify a single recipe by name")
    verify.add_argument("--epsilon", type=float, help="Recipe parameter")
    verify.add_argument("--trials", type=int, default=8, help="Random logical inputs")
    verify.add_argument(
        "--instances", type=int, default=ORACLE_INSTANCES, help="Random models per family"
    )
    verify.add_argument(
        "--compiler-instances",
        type=int,
        default=COMPILER_INSTANCES,
        help="Random circuits per compiler",
    )
    verify.add_argument("--seed", type=int, help="Base seed")

    add("demo", "Evaluate the smallest instance of every construction", cmd_demo)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except (LatcircError, ValidationError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
