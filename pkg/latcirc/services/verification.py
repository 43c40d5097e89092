"""
Self-checks behind `latcirc verify --all` and `latcirc demo`.

Each suite builds small seeded instances, evaluates them in two or three
independent ways and reports the largest disagreement per named check.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from latcirc.compilers.base import CompiledInstance, LogicalCircuit, LogicalOp
from latcirc.compilers.ising import GATE_BLOCK, GATE_T, compile_to_ising, dqc1_instance
from latcirc.compilers.lgt import compile_to_lgt
from latcirc.compilers.potts import compile_to_potts
from latcirc.compilers.six_vertex import compile_to_six_vertex
from latcirc.core.config import settings
from latcirc.core.exceptions import EnumerationTooLarge
from latcirc.encodings.factory import get_recipe, verify_all, verify_recipe
from latcirc.encodings.ising import (
    CZ,
    HADAMARD,
    PHASE,
    ZZ,
    compose_euler,
    euler_angles,
    find_inverse_power,
    ising_gate_set,
    rz,
)
from latcirc.encodings.lgt import teleport_hadamard_recipe
from latcirc.encodings.potts import H_ERROR_CONSTANT, hadamard_recipe
from latcirc.encodings.six_vertex import exchange_unitary, logical_zero, six_vertex_gates
from latcirc.models.circuit import BasisState, Circuit, Gate, ProductState
from latcirc.models.lattice import (
    BoundaryCondition,
    EdgeModel,
    FaceParity,
    LatticeModel,
    LgtModel,
    Pendant,
    PlanarCircuitGraph,
    VertexModel,
    lattice_edges,
    lattice_faces,
    potts_table,
)
from latcirc.services import qcirc
from latcirc.services.estimate import (
    Estimate,
    EstimatorConfig,
    dqc1_trace_estimate,
    hadamard_test,
    hadamard_test_probabilities,
    outcome_probabilities,
)
from latcirc.services.mapping import edge_to_circuit, evaluate, map_model, periodic_ising_trace
from latcirc.services.spinlat import brute_force_partition

logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-12
ROUND_TRIP_TOLERANCE = 1e-8
INVERSE_DELTA = 1e-2
LGT_EXTENTS = (2, 2, 3)

ORACLE_INSTANCES = 50
BOUNDARY_INSTANCES = 10
COMPILER_INSTANCES = 25
TELEPORT_ANGLES = 10

# sampling calibration: auto-sized shots at (epsilon, delta)
CALIBRATION_EPSILON = 0.05
CALIBRATION_DELTA = 0.01
CALIBRATION_RUNS = 200
BIAS_RUNS = 1000
BIAS_SHOTS = 64
BIAS_SIGMAS = 3.0
FREQUENCY_SIGMAS = 4.0


@dataclass
class CheckResult:
    """One named check: the worst error over its instances."""

    name: str
    passed: bool
    max_error: float
    tolerance: float
    instances: int
    skipped: int = 0
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "name": self.name,
            "pass": self.passed,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "instances": self.instances,
        }
        if self.skipped:
            result["skipped"] = self.skipped
        if self.detail:
            result["detail"] = self.detail
        return result


@dataclass
class SuiteReport:
    """Checks of one suite."""

    name: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.name,
            "pass": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _complex(rng: np.random.Generator) -> complex:
    return complex(rng.normal(), rng.normal())


def relative_error(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(b))


def _check(
    name: str, errors: Sequence[float], tolerance: float, skipped: int = 0, detail: str = ""
) -> CheckResult:
    worst = float(max(errors, default=0.0))
    result = CheckResult(name, worst <= tolerance, worst, tolerance, len(errors), skipped, detail)
    if not result.passed:
        logger.warning(f"Check {name} failed: error {worst:.3e} > {tolerance:.1e}")
    return result


# ---------------------------------------------------------------------------
# Random model builders
# ---------------------------------------------------------------------------

def random_fixed_boundary(rng: np.random.Generator, size: int, q: int) -> BoundaryCondition:
    return BoundaryCondition.fixed(rng.integers(0, q, size), rng.integers(0, q, size))


def random_vertex_model(
    rng: np.random.Generator, boundary: Optional[BoundaryCondition] = None
) -> VertexModel:
    """Dense random vertex weights on a tilted grid of at most 4 wires and 3 columns."""
    rows = int(rng.integers(1, 3))
    cols = int(rng.integers(1, 4))
    tensors = {}
    for column in range(cols):
        for wire in range(column % 2, 2 * rows - 1, 2):
            tensors[(column, wire)] = rng.normal(size=(2,) * 4) + 1j * rng.normal(size=(2,) * 4)
    if boundary is None:
        boundary = random_fixed_boundary(rng, 2 * rows, 2)
    return VertexModel.tilted_grid(rows, cols, lambda c, w: tensors[(c, w)], boundary)


def random_planar_graph(rng: np.random.Generator, n: int, m: int) -> PlanarCircuitGraph:
    deleted = {(r, c) for r in range(n - 1) for c in range(m) if rng.random() < 0.3}
    contracted = {(r, c) for r in range(n) for c in range(m - 1) if rng.random() < 0.3}
    return PlanarCircuitGraph(n, m, frozenset(deleted), frozenset(contracted))


def random_ising_model(
    rng: np.random.Generator, boundary: Optional[BoundaryCondition] = None
) -> EdgeModel:
    """Ising model with complex couplings and fields on at most 12 grid vertices."""
    n = int(rng.integers(2, 4))
    m = int(rng.integers(2, 5))
    graph = random_planar_graph(rng, n, m)
    x = {edge: _complex(rng) for edge in graph.edges()}
    y = {(node.row, node.start): _complex(rng) for node in graph.nodes() if rng.random() < 0.5}
    if boundary is None:
        boundary = random_fixed_boundary(rng, n, 2)
    return EdgeModel.ising(graph, x, y, boundary)


def random_potts_model(
    rng: np.random.Generator, boundary: Optional[BoundaryCondition] = None
) -> EdgeModel:
    """Three-state Potts model on at most 6 grid vertices with one pendant auxiliary."""
    n = int(rng.integers(1, 3))
    m = int(rng.integers(2, 4))
    graph = random_planar_graph(rng, n, m)
    mu = {edge: _complex(rng) for edge in graph.edges()}
    nu = {edge: _complex(rng) for edge in graph.edges()}
    if boundary is None:
        boundary = random_fixed_boundary(rng, n, 3)
    model = EdgeModel.potts(graph, 3, mu, nu, boundary)
    vertex = (int(rng.integers(0, n)), int(rng.integers(0, m)))
    pendant = Pendant(vertex, int(rng.integers(0, 3)), potts_table(3, _complex(rng), 1.0), "aux")
    return EdgeModel(graph, 3, model.edge_weights, {}, boundary, (pendant,))


def random_lgt_model(
    rng: np.random.Generator, boundary: Optional[BoundaryCondition] = None
) -> LgtModel:
    """Z2 gauge model on LGT_EXTENTS with every temporal edge fixed to a random value."""
    couplings = {face: _complex(rng) for face in lattice_faces(LGT_EXTENTS)}
    fixed = {
        edge: int(rng.integers(0, 2)) for edge in lattice_edges(LGT_EXTENTS) if edge[3] == 2
    }
    parity = FaceParity.ODD if rng.random() < 0.5 else FaceParity.EVEN
    skeleton = LgtModel(LGT_EXTENTS)
    if boundary is None:
        boundary = random_fixed_boundary(rng, skeleton.boundary_size, 2)
    return LgtModel(LGT_EXTENTS, couplings, fixed, boundary, 2, parity)


def with_boundary(model: LatticeModel, boundary: BoundaryCondition) -> LatticeModel:
    if isinstance(model, EdgeModel):
        return model.with_boundary(boundary)
    if isinstance(model, VertexModel):
        return VertexModel(model.width, model.q, model.vertices, boundary)
    return LgtModel(model.extents, model.face_couplings, model.gauge_fixed, boundary,
                    model.time_axis, model.parity)


def trace_by_fixed_boundaries(model: EdgeModel) -> complex:
    """Periodic Z as the sum of fixed-boundary Z over identical left and right rows."""
    total = 0j
    for rows in itertools.product(range(model.q), repeat=model.graph.n):
        fixed = model.with_boundary(BoundaryCondition.fixed(rows, rows))
        total += brute_force_partition(fixed).value
    return total


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

Builder = Callable[[np.random.Generator, Optional[BoundaryCondition]], LatticeModel]

FAMILIES: Dict[str, Builder] = {
    "sixvertex": random_vertex_model,
    "ising": random_ising_model,
    "potts": random_potts_model,
    "lgt": random_lgt_model,
}


def oracle_gap(model: LatticeModel) -> float:
    """Relative difference between the mapped circuit and brute-force enumeration."""
    oracle = brute_force_partition(model).value
    return relative_error(evaluate(map_model(model)).value, oracle)


def oracle_equivalence_suite(instances: int, seed: int) -> SuiteReport:
    report = SuiteReport("oracle_equivalence")
    rng = _generator(seed)
    for family, build in FAMILIES.items():
        errors = [oracle_gap(build(rng, None)) for _ in range(instances)]
        report.checks.append(_check(family, errors, settings.END_TO_END_TOLERANCE))
    return report


def boundary_variant_suite(instances: int, seed: int) -> SuiteReport:
    report = SuiteReport("boundary_variants")
    rng = _generator(seed + 1)
    variants = {
        "sixvertex": (BoundaryCondition.open(), BoundaryCondition.periodic()),
        "ising": (BoundaryCondition.open(), BoundaryCondition.periodic()),
        "potts": (BoundaryCondition.open(), BoundaryCondition.periodic()),
        "lgt": (BoundaryCondition.open(), BoundaryCondition.periodic()),
    }
    for family, boundaries in variants.items():
        for boundary in boundaries:
            errors = [
                oracle_gap(FAMILIES[family](rng, boundary)) for _ in range(instances)
            ]
            name = f"{family}.{boundary.kind.value}"
            report.checks.append(_check(name, errors, settings.END_TO_END_TOLERANCE))

    errors = []
    for _ in range(instances):
        model = random_ising_model(rng, BoundaryCondition.periodic())
        periodic = brute_force_partition(model).value
        errors.append(relative_error(trace_by_fixed_boundaries(model), periodic))
        normalized = periodic_ising_trace(model).normalized
        trace = qcirc.trace(edge_to_circuit(model).circuit) / 2 ** model.graph.n
        errors.append(relative_error(normalized, trace))
    report.checks.append(_check("ising.trace_identity", errors, settings.END_TO_END_TOLERANCE))
    return report


def _haar_unitary(rng: np.random.Generator, dimension: int) -> np.ndarray:
    z = rng.normal(size=(dimension, dimension)) + 1j * rng.normal(size=(dimension, dimension))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def gate_identity_suite(seed: int) -> SuiteReport:
    report = SuiteReport("gate_identities")
    gates = ising_gate_set()
    distance = qcirc.distance_up_to_phase
    v_half_pair = np.kron(gates.v_half, gates.v_half)
    identities = {
        "ising.hadamard": distance(gates.hadamard(), HADAMARD),
        "ising.phase": distance(gates.phase(), PHASE),
        "ising.w_v_squared": distance(gates.w_v_squared(), ZZ),
        "ising.t_conjugation": distance(
            gates.v_half @ gates.k @ gates.v_half.conj().T, gates.t
        ),
        "ising.w_v_conjugation": distance(
            v_half_pair @ gates.w_v @ v_half_pair.conj().T, gates.w_v
        ),
        "ising.controlled_z": distance(gates.controlled_z(), CZ),
        "lgt.cz_decomposition": float(np.max(np.abs(
            np.kron(rz(-np.pi / 2), rz(-np.pi / 2)) @ np.diag([1, 1j, 1j, 1]) - CZ
        ))),
    }
    for name, value in identities.items():
        report.checks.append(_check(name, [value], IDENTITY_TOLERANCE))

    m = find_inverse_power(gates.k, INVERSE_DELTA)
    gap = distance(np.linalg.matrix_power(gates.k, m), gates.k_dag)
    report.checks.append(_check("ising.inverse_power", [gap], INVERSE_DELTA, detail=f"m={m}"))

    rng = _generator(seed + 2)
    errors = []
    for _ in range(100):
        unitary = _haar_unitary(rng, 2)
        rebuilt = compose_euler(*euler_angles(unitary))
        errors.append(float(np.max(np.abs(rebuilt - unitary))))
    report.checks.append(_check("euler.composition", errors, 1e-9))
    return report


def six_vertex_gate_suite(seed: int) -> SuiteReport:
    report = SuiteReport("six_vertex_gates")
    rng = _generator(seed + 3)
    errors = []
    for t in rng.uniform(-np.pi, np.pi, 20):
        errors.append(qcirc.distance_up_to_phase(six_vertex_gates(t)["U"], exchange_unitary(t)))
    report.checks.append(_check("exchange_gate", errors, IDENTITY_TOLERANCE))

    singlet = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    v = six_vertex_gates(0.0)["V"]
    start = np.zeros(16, dtype=complex)
    start[0b0101] = 1.0
    codeword = np.kron(v, v) @ start
    gaps = [
        float(np.linalg.norm(codeword - np.kron(singlet, singlet))),
        float(np.linalg.norm(codeword - logical_zero())),
    ]
    report.checks.append(_check("logical_zero", gaps, IDENTITY_TOLERANCE))
    return report


def recipe_suite(trials: int, seed: int) -> SuiteReport:
    report = SuiteReport("recipes")
    for recipe_report in verify_all(trials, seed):
        report.checks.append(CheckResult(
            recipe_report.name,
            recipe_report.passed,
            recipe_report.max_distance,
            get_recipe(recipe_report.name).allowed_distance(),
            recipe_report.trials,
            detail="; ".join(recipe_report.failures),
        ))
    report.checks.append(teleport_angle_check(seed))
    return report


def teleport_angle_check(seed: int, angles: int = TELEPORT_ANGLES) -> CheckResult:
    """The teleported Hadamard at random incoming angles, one random input each."""
    rng = _generator(seed + 6)
    errors = []
    for trial, alpha in enumerate(rng.uniform(0, 2 * np.pi, angles)):
        recipe = teleport_hadamard_recipe(float(alpha))
        errors.append(verify_recipe(recipe, trials=1, seed=seed + trial).max_distance)
    return _check("lgt.teleport_H.random_alpha", errors, ROUND_TRIP_TOLERANCE)


# ---------------------------------------------------------------------------
# Compiler round trips
# ---------------------------------------------------------------------------

def round_trip_errors(instance: CompiledInstance) -> Tuple[List[float], bool]:
    """Errors of mapped circuit and oracle against the source quantity.

    Returns the errors and whether the oracle leg ran within the enumeration cap.
    """
    kappa = instance.kappa.value
    expected = instance.target_value()
    errors = [relative_error(evaluate(map_model(instance.model)).value / kappa, expected)]
    try:
        oracle = brute_force_partition(instance.model).value / kappa
    except EnumerationTooLarge:
        return errors, False
    errors.append(relative_error(oracle, expected))
    return errors, True


def random_six_vertex_circuit(rng: np.random.Generator, width: int = 4) -> Circuit:
    gates = []
    for _ in range(int(rng.integers(1, 5))):
        wire = int(rng.integers(0, width - 1))
        if rng.random() < 0.7:
            t = float(rng.uniform(-np.pi, np.pi))
            gates.append(Gate(six_vertex_gates(t)["U"], (wire, wire + 1), "U"))
        else:
            gates.append(Gate(six_vertex_gates(0.0)["V"], (wire, wire + 1), "V"))
    return Circuit(width, 2, tuple(gates))


def random_ising_circuit(rng: np.random.Generator, width: int = 2) -> Circuit:
    gates = ising_gate_set()
    body = []
    for _ in range(int(rng.integers(1, 4))):
        if rng.random() < 0.6:
            body.append(Gate(gates.t, (int(rng.integers(0, width)),), GATE_T))
        else:
            wire = int(rng.integers(0, width - 1))
            body.append(Gate(gates.two_qubit_block(), (wire, wire + 1), GATE_BLOCK))
    return Circuit(width, 2, tuple(body))


def random_potts_circuit(rng: np.random.Generator) -> LogicalCircuit:
    width = int(rng.integers(1, 3))
    ops = []
    hadamards = 0
    for _ in range(int(rng.integers(1, 4))):
        choices = ["I1", "P"] + (["H"] if hadamards < 2 else [])
        if width == 2:
            choices += ["CZ", "I2"]
        gate = str(rng.choice(choices))
        if gate in ("CZ", "I2"):
            ops.append(LogicalOp(gate, (0, 1)))
            continue
        hadamards += gate == "H"
        ops.append(LogicalOp(gate, (int(rng.integers(0, width)),)))
    return LogicalCircuit(width, tuple(ops))


def random_lgt_circuit(rng: np.random.Generator) -> LogicalCircuit:
    width = int(rng.integers(1, 3))
    ops = []
    for _ in range(int(rng.integers(1, 3))):
        choices = ["Rz", "Rz", "H"] + (["diag", "CZ"] if width == 2 else [])
        gate = str(rng.choice(choices))
        if gate in ("diag", "CZ"):
            ops.append(LogicalOp(gate, (0, 1)))
        elif gate == "Rz":
            xi = float(rng.uniform(0, 2 * np.pi))
            ops.append(LogicalOp(gate, (int(rng.integers(0, width)),), {"xi": xi}))
        else:
            ops.append(LogicalOp(gate, (int(rng.integers(0, width)),)))
    return LogicalCircuit(width, tuple(ops))


def _bits(rng: np.random.Generator, width: int) -> Tuple[int, ...]:
    return tuple(int(b) for b in rng.integers(0, 2, width))


def potts_tolerance(circuit: LogicalCircuit, epsilon: float) -> float:
    """Round-trip tolerance allowing the epsilon^2 leakage of every H."""
    hadamards = sum(op.gate == "H" for op in circuit.ops)
    if not hadamards:
        return ROUND_TRIP_TOLERANCE
    normalization = abs(hadamard_recipe(epsilon).normalization)
    per_gate = H_ERROR_CONSTANT * epsilon ** 2 / min(1.0, normalization)
    return ROUND_TRIP_TOLERANCE + 2 * hadamards * per_gate


def compiler_suite(instances: int, seed: int) -> SuiteReport:
    report = SuiteReport("compiler_round_trips")
    rng = _generator(seed + 4)
    epsilon = settings.DEFAULT_EPSILON

    def run(name: str, make: Callable[[], Tuple[CompiledInstance, float]]) -> None:
        worst = 0.0
        loosest = ROUND_TRIP_TOLERANCE
        passed = True
        skipped = 0
        for _ in range(instances):
            instance, tolerance = make()
            gaps, complete = round_trip_errors(instance)
            skipped += int(not complete)
            worst = max(worst, *gaps)
            loosest = max(loosest, tolerance)
            passed = passed and max(gaps) <= tolerance
        if not passed:
            logger.warning(f"Round trip {name} failed: error {worst:.3e}")
        report.checks.append(CheckResult(name, passed, worst, loosest, instances, skipped))

    def six_vertex() -> Tuple[CompiledInstance, float]:
        circuit = random_six_vertex_circuit(rng)
        instance = compile_to_six_vertex(circuit, _bits(rng, 4), _bits(rng, 4))
        return instance, ROUND_TRIP_TOLERANCE

    def potts() -> Tuple[CompiledInstance, float]:
        circuit = random_potts_circuit(rng)
        instance = compile_to_potts(
            circuit, epsilon, _bits(rng, circuit.width), _bits(rng, circuit.width)
        )
        return instance, potts_tolerance(circuit, epsilon)

    def lgt() -> Tuple[CompiledInstance, float]:
        circuit = random_lgt_circuit(rng)
        bits = _bits(rng, circuit.width)
        return compile_to_lgt(circuit, bits, _bits(rng, circuit.width)), ROUND_TRIP_TOLERANCE

    run("sixvertex", six_vertex)
    run("ising", lambda: (compile_to_ising(random_ising_circuit(rng)), ROUND_TRIP_TOLERANCE))
    run("potts", potts)
    run("lgt", lgt)
    run("dqc1", lambda: (dqc1_instance(random_ising_circuit(rng)), ROUND_TRIP_TOLERANCE))
    return report


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------

def failure_rate(estimates: Sequence[Estimate], exact: complex) -> float:
    """Fraction of estimates off by more than their epsilon in either quadrature."""
    misses = sum(
        max(abs(e.value.real - exact.real), abs(e.value.imag - exact.imag)) > e.epsilon
        for e in estimates
    )
    return misses / max(1, len(estimates))


def bias_in_standard_errors(values: Sequence[complex], exact: complex) -> float:
    """Distance of the sample mean from `exact` in standard errors, worst quadrature."""
    samples = np.asarray(values, dtype=complex)
    worst = 0.0
    for part, target in ((samples.real, exact.real), (samples.imag, exact.imag)):
        gap = abs(float(part.mean()) - target)
        error = float(part.std(ddof=1)) / np.sqrt(part.size) if part.size > 1 else 0.0
        if error == 0.0:
            worst = max(worst, 0.0 if gap == 0.0 else np.inf)
        else:
            worst = max(worst, gap / error)
    return worst


def frequency_in_sigmas(estimate: Estimate, p0_re: float, p0_im: float) -> float:
    """Distance of the observed outcome-0 frequencies from their probabilities, in sigmas."""
    worst = 0.0
    for observed, expected in ((estimate.p0_re, p0_re), (estimate.p0_im, p0_im)):
        sigma = np.sqrt(expected * (1 - expected) / estimate.shots_used)
        gap = abs(observed - expected)
        worst = max(worst, gap / sigma if sigma > 0 else (0.0 if gap == 0 else np.inf))
    return float(worst)


def estimator_suite(seed: int, runs: int = CALIBRATION_RUNS) -> SuiteReport:
    """Sampling calibration of both estimators on a random two-qubit unitary.

    Failure rates over `runs` seeds must stay within delta, the mean of many
    short runs must sit within BIAS_SIGMAS standard errors of the exact value,
    and the explicit controlled-U circuit must give the closed-form outcome
    probabilities.
    """
    report = SuiteReport("estimators")
    rng = _generator(seed + 5)
    width = 2
    unitary = _haar_unitary(rng, 2 ** width)
    circuit = Circuit(width, 2, (Gate(unitary, (0, 1), "U"),))
    plus = ProductState.plus(width, 2)
    zero = BasisState((0, 0))
    exact = qcirc.matrix_element(circuit, plus, zero)
    normalized_trace = qcirc.trace(circuit) / 2 ** width

    def calibrated(offset: int) -> EstimatorConfig:
        return EstimatorConfig(
            epsilon=CALIBRATION_EPSILON, delta=CALIBRATION_DELTA, seed=seed + offset
        )

    estimates = [hadamard_test(circuit, plus, zero, calibrated(k)) for k in range(runs)]
    rate = failure_rate(estimates, exact)
    report.checks.append(_check("hadamard_test.failure_rate", [rate], CALIBRATION_DELTA))
    estimates = [dqc1_trace_estimate(circuit, calibrated(k)) for k in range(runs)]
    rate = failure_rate(estimates, normalized_trace)
    report.checks.append(_check("dqc1_trace.failure_rate", [rate], CALIBRATION_DELTA))

    values = [
        hadamard_test(circuit, plus, zero, EstimatorConfig(shots=BIAS_SHOTS, seed=seed + k)).value
        for k in range(BIAS_RUNS)
    ]
    bias = bias_in_standard_errors(values, exact)
    report.checks.append(_check("hadamard_test.unbiased", [bias], BIAS_SIGMAS))

    p0_re, p0_im = outcome_probabilities(exact)
    sampled = hadamard_test(circuit, plus, zero, calibrated(runs))
    sigmas = [
        frequency_in_sigmas(sampled, p0_re, p0_im),
        frequency_in_sigmas(estimates[0], *outcome_probabilities(normalized_trace)),
    ]
    report.checks.append(_check("outcome_frequencies", sigmas, FREQUENCY_SIGMAS))

    explicit = hadamard_test_probabilities(circuit, plus, zero)
    gaps = [abs(a - b) for a, b in zip(explicit, (p0_re, p0_im))]
    report.checks.append(_check("controlled_unitary", gaps, settings.END_TO_END_TOLERANCE))
    return report


def run_all(
    oracle_instances: int = ORACLE_INSTANCES,
    compiler_instances: int = COMPILER_INSTANCES,
    trials: int = 8,
    seed: Optional[int] = None,
) -> List[SuiteReport]:
    """Run every suite.

    Args:
        oracle_instances: random models per family for the oracle checks
        compiler_instances: random circuits per compiler
        trials: random logical inputs per recipe
        seed: base seed (defaults to DEFAULT_SEED)

    Returns:
        One SuiteReport per suite
    """
    seed = settings.DEFAULT_SEED if seed is None else seed
    reports = [
        oracle_equivalence_suite(oracle_instances, seed),
        boundary_variant_suite(min(oracle_instances, BOUNDARY_INSTANCES), seed),
        gate_identity_suite(seed),
        six_vertex_gate_suite(seed),
        recipe_suite(trials, seed),
        compiler_suite(compiler_instances, seed),
        estimator_suite(seed),
    ]
    for suite in reports:
        logger.info(f"Suite {suite.name}: {'pass' if suite.passed else 'FAIL'}")
    return reports


# ---------------------------------------------------------------------------
# Demo
# ---------------------------------------------------------------------------

def _demo_entry(name: str, instance: CompiledInstance, expected: complex) -> Dict[str, Any]:
    value = brute_force_partition(instance.model).value / instance.kappa.value
    return {
        "name": name,
        "value": [value.real, value.imag],
        "expected": [expected.real, expected.imag],
        "kappa": instance.kappa.describe(),
        "pass": relative_error(value, expected) <= ROUND_TRIP_TOLERANCE,
    }


def demo_constructions() -> List[Dict[str, Any]]:
    """The smallest instance of each construction, checked against its expected value."""
    t = 0.3
    exchange = Circuit(2, 2, (Gate(six_vertex_gates(t)["U"], (0, 1), "U"),))
    six_vertex = compile_to_six_vertex(exchange)
    expected_exchange = complex(exchange_unitary(t)[0b01, 0b01])

    block = LogicalCircuit(2, (LogicalOp(GATE_BLOCK, (0, 1)),))
    ising = compile_to_ising(block)
    gates = ising_gate_set()
    wrap = np.kron(gates.v_half, gates.v_half)
    plus = np.full(4, 0.5, dtype=complex)
    expected_block = complex(plus.conj() @ wrap @ gates.two_qubit_block() @ wrap @ plus)

    potts = compile_to_potts(
        LogicalCircuit(2, (LogicalOp("CZ", (0, 1)),)), input_bits=(1, 1), output_bits=(1, 1)
    )
    lgt = compile_to_lgt(
        LogicalCircuit(2, (LogicalOp("diag", (0, 1)),)), input_bits=(1, 0), output_bits=(1, 0)
    )
    entries = [
        _demo_entry("sixvertex.exchange", six_vertex, expected_exchange),
        _demo_entry("ising.entangling_block", ising, expected_block),
        _demo_entry("potts.controlled_z", potts, -1.0 + 0j),
        _demo_entry("lgt.diagonal_phase", lgt, 1j),
    ]
    return entries
