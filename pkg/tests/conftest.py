"""
Pytest configuration and fixtures.
"""
from pathlib import Path

import numpy as np
import pytest

from latcirc.core.config import Settings
from latcirc.encodings.ising import CZ, HADAMARD
from latcirc.models.circuit import Circuit, Gate
from latcirc.models.lattice import BoundaryCondition, EdgeModel, PlanarCircuitGraph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def test_settings():
    """Test settings fixture."""
    return Settings(LATCIRC_THREADS=1, DEFAULT_SEED=0, LOG_LEVEL="DEBUG")


@pytest.fixture(scope="session")
def fixtures_dir():
    """Directory holding the sample JSON documents."""
    return FIXTURES


@pytest.fixture
def rng():
    """Seeded generator, fresh for each test."""
    return np.random.Generator(np.random.Philox(1234))


@pytest.fixture
def bell_circuit():
    """H on qubit 0 followed by CZ on (0, 1)."""
    return Circuit(2, 2, (Gate(HADAMARD, (0,), "H"), Gate(CZ, (0, 1), "CZ")))


@pytest.fixture
def ising_chain():
    """Ising model on a 1 x 3 grid with x = 2 and open boundaries."""
    return EdgeModel.ising(PlanarCircuitGraph.full(1, 3), 2.0)


@pytest.fixture
def ising_square():
    """Ising model on a full 2 x 2 grid with complex couplings and a field."""
    graph = PlanarCircuitGraph.full(2, 2)
    return EdgeModel.ising(graph, 0.5 + 0.25j, 1.5, BoundaryCondition.open())
