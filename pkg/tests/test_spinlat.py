"""
Unit tests for spin systems and the brute-force oracle.
"""
import itertools
from unittest.mock import patch

import numpy as np
import pytest

from latcirc.core.config import settings
from latcirc.core.exceptions import EnumerationTooLarge
from latcirc.models.circuit import Provenance
from latcirc.models.lattice import (
    BoundaryCondition,
    EdgeModel,
    FaceParity,
    LgtModel,
    Pendant,
    PlanarCircuitGraph,
    VertexModel,
    lattice_faces,
    potts_table,
)
from latcirc.services.spinlat import (
    brute_force_partition,
    enumerate_configs,
    spin_system,
    validate_gauge_fixing,
)


def square_partition(x: complex, y: complex) -> complex:
    """Direct sum for the 2 x 2 Ising fixture: spins (0,0), (0,1), (1,0), (1,1)."""
    total = 0j
    for a, b, c, d in itertools.product(range(2), repeat=4):
        weight = 1.0 + 0j
        for u, v in ((a, b), (c, d), (a, c), (b, d)):
            weight *= x if u == v else 1.0
        for s in (a, b, c, d):
            weight *= y if s == 0 else 1.0
        total += weight
    return total


class TestBruteForcePartition:
    """Test cases for the exact oracle."""

    def test_open_chain(self, ising_chain):
        """Test Z of a three-spin chain with x = 2."""
        result = brute_force_partition(ising_chain)
        assert np.isclose(result.value, 18.0)
        assert result.provenance == Provenance.ORACLE
        assert result.kappa.value == 1.0

    def test_square_with_field(self, ising_square):
        """Test a 2 x 2 grid with complex couplings against a direct sum."""
        expected = square_partition(0.5 + 0.25j, 1.5)
        assert np.isclose(brute_force_partition(ising_square).value, expected)

    def test_periodic_chain(self, ising_chain):
        """Test that a periodic row identifies its first and last vertex."""
        periodic = ising_chain.with_boundary(BoundaryCondition.periodic())
        assert np.isclose(brute_force_partition(periodic).value, 10.0)

    def test_fixed_chain(self, ising_chain):
        """Test fixed left and right spins."""
        fixed = ising_chain.with_boundary(BoundaryCondition.fixed([0], [1]))
        assert np.isclose(brute_force_partition(fixed).value, 4.0)

    def test_contradicting_fixed_values(self):
        """Test that a spin fixed to two values gives Z = 0."""
        model = EdgeModel(
            PlanarCircuitGraph.full(1, 1), 2, {}, boundary=BoundaryCondition.fixed([0], [1])
        )
        assert brute_force_partition(model).value == 0

    def test_potts_chain(self):
        """Test a two-spin three-state Potts model."""
        model = EdgeModel.potts(PlanarCircuitGraph.full(1, 2), 3, 2.0, 1.0)
        assert np.isclose(brute_force_partition(model).value, 12.0)

    def test_pendant(self):
        """Test that a pendant contributes the column of its fixed value."""
        pendant = Pendant((0, 0), 1, potts_table(3, 5.0, 1.0))
        model = EdgeModel(PlanarCircuitGraph.full(1, 1), 3, {}, pendants=(pendant,))
        assert np.isclose(brute_force_partition(model).value, 7.0)

    def test_single_plaquette(self):
        """Test one even-parity face: 8 even configurations weighted by the coupling."""
        face = (0, 0, 0, 0, 1)
        model = LgtModel((2, 2, 1), {face: 3.0 + 1j}, parity=FaceParity.EVEN)
        assert np.isclose(brute_force_partition(model).value, 8 * (3.0 + 1j) + 8)

    def test_vertex_model(self):
        """Test one vertex with all weights 1 and open boundaries."""
        model = VertexModel.tilted_grid(1, 1, np.ones((2, 2, 2, 2)))
        assert np.isclose(brute_force_partition(model).value, 16.0)

    def test_enumeration_cap(self, ising_square):
        """Test that too many free spins are refused."""
        with pytest.raises(EnumerationTooLarge):
            brute_force_partition(ising_square, cap=1)

    def test_result_independent_of_workers(self, rng):
        """Test that chunked sums are identical for any worker count."""
        graph = PlanarCircuitGraph.full(2, 3)
        x = {e: complex(rng.normal(), rng.normal()) for e in graph.edges()}
        model = EdgeModel.ising(graph, x)
        with patch.object(settings, "ENUMERATION_CHUNK", 5):
            serial = brute_force_partition(model, workers=1).value
            threaded = brute_force_partition(model, workers=4).value
        assert serial == threaded


class TestSpinSystem:
    """Test cases for the flattened spin systems."""

    def test_enumerate_configs_sums_to_z(self, ising_square):
        """Test that per-configuration weights add up to the oracle value."""
        total = sum(weight for _, weight in enumerate_configs(ising_square))
        assert np.isclose(total, brute_force_partition(ising_square).value)

    def test_enumerate_configs_cap(self, ising_square):
        """Test the cap on plain enumeration."""
        with pytest.raises(EnumerationTooLarge):
            list(enumerate_configs(ising_square, cap=2))

    def test_periodic_vertex_segments(self):
        """Test that a periodic vertex model closes every wire."""
        weights = np.ones((2, 2, 2, 2))
        open_model = VertexModel.tilted_grid(1, 1, weights)
        periodic = VertexModel(2, 2, open_model.vertices, BoundaryCondition.periodic())
        assert spin_system(open_model).num_spins == 4
        assert spin_system(periodic).num_spins == 2

    def test_fixed_spins_recorded(self, ising_chain):
        """Test that fixed boundaries pin the first and last node."""
        fixed = ising_chain.with_boundary(BoundaryCondition.fixed([1], [0]))
        system = spin_system(fixed)
        assert system.fixed == {0: 1, 2: 0}
        assert system.free_spins() == [1]


class TestGaugeFixing:
    """Test cases for gauge-fixing validation."""

    def test_forest_accepted(self):
        """Test that a tree of gauge-fixed edges passes."""
        model = LgtModel((2, 2, 1), gauge_fixed={(0, 0, 0, 0): 0, (0, 0, 0, 1): 1})
        assert validate_gauge_fixing(model) is None

    def test_loop_reported(self):
        """Test that a closed square of gauge-fixed edges is reported."""
        edges = [(0, 0, 0, 0), (0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 0, 1)]
        model = LgtModel((2, 2, 1), gauge_fixed={e: 0 for e in edges})
        loop = validate_gauge_fixing(model)
        assert loop is not None
        assert set(loop.cycle) == set(edges)
        assert "loop" in loop.message


class TestSymmetries:
    """Test cases for gauge invariance and coupling rescaling."""

    @pytest.mark.parametrize("site", [(1, 1, 1), (0, 0, 0), (2, 1, 0)])
    def test_gauge_transformation(self, rng, site):
        """Test that flipping every edge at a vertex leaves the weight unchanged."""
        extents = (3, 3, 3)
        couplings = {f: complex(rng.normal(), rng.normal()) for f in lattice_faces(extents)}
        system = spin_system(LgtModel(extents, couplings))
        index = {label: i for i, label in enumerate(system.labels)}
        flipped = {index[edge] for edge in LgtModel(extents).incident_edges(site)}
        for _ in range(5):
            assignment = {i: int(rng.integers(0, 2)) for i in range(system.num_spins)}
            transformed = {i: s ^ (i in flipped) for i, s in assignment.items()}
            assert np.isclose(system.weight(transformed), system.weight(assignment))

    def test_gauge_invariant_partition(self, rng):
        """Test that Z of a random plaquette model survives a relabelled gauge fixing."""
        extents = (2, 2, 2)
        couplings = {f: complex(rng.normal(), rng.normal()) for f in lattice_faces(extents)}
        free = brute_force_partition(LgtModel(extents, couplings)).value
        fixed = LgtModel(extents, couplings, gauge_fixed={(0, 0, 0, 2): 1})
        assert np.isclose(2 * brute_force_partition(fixed).value, free)

    @pytest.mark.parametrize("c", [2.0, -0.5, 1.5j])
    def test_potts_scaling(self, rng, c):
        """Test Z(c mu, c nu) = c^|E| Z(mu, nu)."""
        graph = PlanarCircuitGraph.full(2, 2)
        edges = graph.edges()
        mu = {e: complex(rng.normal(), rng.normal()) for e in edges}
        nu = {e: complex(rng.normal(), rng.normal()) for e in edges}
        base = brute_force_partition(EdgeModel.potts(graph, 3, mu, nu)).value
        scaled_mu = {e: c * w for e, w in mu.items()}
        scaled_nu = {e: c * w for e, w in nu.items()}
        scaled = brute_force_partition(EdgeModel.potts(graph, 3, scaled_mu, scaled_nu)).value
        assert np.isclose(scaled, c ** len(edges) * base)
