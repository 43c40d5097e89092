"""
Unit tests for logical encodings and gate recipes.
"""
import numpy as np
import pytest

from latcirc.core.exceptions import AuxiliaryReuse, BadEpsilon, BadParameter, SearchExhausted
from latcirc.encodings.base import AuxSpec, EncodingName, GateRecipe, RecipeStep, StepKind
from latcirc.encodings.factory import (
    DEFAULT_SWEEP,
    SLOPE_TOLERANCE,
    get_encoding,
    get_executor,
    get_recipe,
    get_supported_recipes,
    verify_recipe,
)
from latcirc.encodings.ising import (
    HADAMARD,
    PAULI_Z,
    compose_euler,
    euler_angles,
    find_inverse_power,
    ising_gate_set,
    rz,
)
from latcirc.encodings.lgt import (
    allowed_coupling,
    identity_recipe,
    lgt_logical_gates,
    rotation_recipe,
    teleport_hadamard_recipe,
)
from latcirc.encodings.potts import (
    PottsExecutor,
    hadamard_recipe,
    is_whitelisted,
    potts_encoding,
    potts_logical_gates,
)
from latcirc.encodings.six_vertex import (
    SIX_VERTEX_SUPPORT,
    exchange_unitary,
    logical_one,
    logical_zero,
    six_vertex_gates,
)
from latcirc.services.qcirc import distance_up_to_phase


class TestEncodings:
    """Test cases for codewords."""

    @pytest.mark.parametrize("name", list(EncodingName))
    def test_codewords_orthonormal(self, name):
        """Test that every embedding is an isometry."""
        embedding = get_encoding(name).embedding(2)
        assert np.allclose(embedding.conj().T @ embedding, np.eye(4))

    def test_six_vertex_codewords(self):
        """Test the singlet-pair logical zero and its orthogonal partner."""
        singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
        assert np.allclose(logical_zero(), np.kron(singlet, singlet))
        assert np.isclose(np.vdot(logical_zero(), logical_one()), 0.0)

    def test_unsupported_executor(self):
        """Test that the six-vertex encoding has no recipe executor."""
        with pytest.raises(ValueError):
            get_executor(EncodingName.SIX_VERTEX_HEISENBERG)


class TestSixVertexGates:
    """Test cases for the six-vertex gate set."""

    @pytest.mark.parametrize("t", [0.0, 0.3, -1.2, 2.5])
    def test_exchange_gate(self, t):
        """Test U(t) against the exponentiated exchange Hamiltonian."""
        assert distance_up_to_phase(six_vertex_gates(t)["U"], exchange_unitary(t)) < 1e-12

    def test_sparsity(self):
        """Test that U and V vanish outside the six configurations."""
        allowed = {2 * i + j: set() for i in range(2) for j in range(2)}
        for i, j, k, l in SIX_VERTEX_SUPPORT:
            allowed[2 * i + j].add(2 * k + l)
        for matrix in six_vertex_gates(0.7).values():
            for row in range(4):
                for column in range(4):
                    if column not in allowed[row]:
                        assert matrix[row, column] == 0

    def test_singlet_preparation(self):
        """Test V |01> = (|01> - |10>) / sqrt(2)."""
        column = six_vertex_gates(0.0)["V"][:, 0b01]
        assert np.allclose(column, np.array([0, 1, -1, 0]) / np.sqrt(2))


class TestIsingGates:
    """Test cases for the Ising gate set and exact-inverse search."""

    def test_composites(self):
        """Test that the K and Z words give H and P up to phase."""
        gates = ising_gate_set()
        assert distance_up_to_phase(gates.hadamard(), HADAMARD) < 1e-12
        assert distance_up_to_phase(gates.phase(), np.diag([1, 1j])) < 1e-12
        assert distance_up_to_phase(gates.w_v_squared(), np.kron(PAULI_Z, PAULI_Z)) < 1e-12

    def test_inverse_power_exact(self):
        """Test a rotation of order five."""
        assert find_inverse_power(rz(2 * np.pi / 5), 1e-6) == 4

    def test_inverse_power_of_k(self):
        """Test that the found power of K is within delta of K^dagger."""
        gates = ising_gate_set()
        m = find_inverse_power(gates.k, 1e-2)
        power = np.linalg.matrix_power(gates.k, m)
        assert distance_up_to_phase(power, gates.k_dag) < 1e-2

    def test_inverse_power_exhausted(self):
        """Test the search cap."""
        with pytest.raises(SearchExhausted):
            find_inverse_power(rz(1.0), 1e-3, cap=3)

    def test_inverse_power_bad_input(self):
        """Test non-unitary gates and non-positive delta."""
        with pytest.raises(BadParameter):
            find_inverse_power(2 * np.eye(2), 1e-3)
        with pytest.raises(BadParameter):
            find_inverse_power(np.eye(2), 0.0)

    def test_euler_round_trip(self, rng):
        """Test R_z H R_z H R_z decompositions of random unitaries."""
        for _ in range(20):
            z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            unitary, _ = np.linalg.qr(z)
            assert np.allclose(compose_euler(*euler_angles(unitary)), unitary, atol=1e-9)

    def test_euler_degenerate(self):
        """Test the diagonal and anti-diagonal branches."""
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        assert np.allclose(compose_euler(*euler_angles(x)), x)
        assert np.allclose(compose_euler(*euler_angles(rz(0.4))), rz(0.4))

    def test_euler_shape(self):
        """Test that only 2 x 2 unitaries decompose."""
        with pytest.raises(BadParameter):
            euler_angles(np.eye(4))


class TestRecipes:
    """Test cases for the recipe factory and verification."""

    @pytest.mark.parametrize("name", sorted(get_supported_recipes()))
    def test_recipe_passes(self, name):
        """Test every recipe on random logical inputs."""
        report = verify_recipe(get_recipe(name), trials=4, seed=0)
        assert report.passed, report.failures
        assert report.to_dict()["pass"] is True

    def test_unknown_recipe(self):
        """Test that unknown names raise ValueError."""
        with pytest.raises(ValueError):
            get_recipe("potts.T")

    def test_hadamard_error_order(self):
        """Test that the Potts H error over epsilon in {1e-2, 3e-3, 1e-3} has slope 2."""
        report = verify_recipe(get_recipe("potts.H"), trials=4, seed=1)
        assert report.passed
        assert abs(report.fitted_slope - 2) <= SLOPE_TOLERANCE
        assert set(report.distances) == {repr(e) for e in DEFAULT_SWEEP}
        assert DEFAULT_SWEEP == (1e-2, 3e-3, 1e-3)

    def test_identity_error_order(self):
        """Test that the gauge identity error is fitted with slope 1."""
        report = verify_recipe(identity_recipe(0.01), trials=4, seed=1)
        assert abs(report.fitted_slope - 1) <= SLOPE_TOLERANCE

    def test_potts_epsilon_range(self):
        """Test the admissible epsilon range."""
        with pytest.raises(BadEpsilon):
            hadamard_recipe(0.5)
        with pytest.raises(BadEpsilon):
            potts_logical_gates(0.0)

    def test_potts_whitelist(self):
        """Test that recipe couplings come from the whitelist."""
        assert is_whitelisted((1 / (np.sqrt(2) * 0.01), 1.0), 0.01)
        assert not is_whitelisted((0.3, 1.0), 0.01)
        for recipe in potts_logical_gates(0.01).values():
            for step in recipe.steps:
                assert is_whitelisted(step.params, 0.01)

    def test_lgt_parameters(self):
        """Test the LGT parameter ranges and allowed couplings."""
        with pytest.raises(BadParameter):
            identity_recipe(0.2)
        with pytest.raises(BadParameter):
            rotation_recipe(7.0)
        assert allowed_coupling(1j)
        assert allowed_coupling(0.5)
        assert not allowed_coupling(0.3)
        assert allowed_coupling(0.01, zeta=0.01)

    def test_lgt_logical_gates(self):
        """Test the LGT recipe set and its per-recipe angles."""
        recipes = lgt_logical_gates(xi=0.7, alpha=0.3, zeta=0.01)
        assert set(recipes) == {"lgt.Rz", "lgt.diag", "lgt.teleport_H", "lgt.I1"}
        assert recipes["lgt.Rz"].metadata["xi"] == 0.7
        assert recipes["lgt.teleport_H"].metadata["alpha"] == 0.3
        assert recipes["lgt.I1"].parameter == 0.01
        with pytest.raises(BadParameter):
            lgt_logical_gates(xi=-1.0)

    def test_teleport_spread_factor(self):
        """Test the norm growth recorded by the teleported Hadamard."""
        recipe = get_recipe("lgt.teleport_H")
        assert np.isclose(recipe.metadata["spread_factor"], 16.0)
        assert np.isclose(recipe.normalization, np.sqrt(2))

    def test_teleport_random_angles(self, rng):
        """Test the teleported Hadamard at ten random incoming angles."""
        for seed, alpha in enumerate(rng.uniform(0, 2 * np.pi, 10)):
            recipe = teleport_hadamard_recipe(float(alpha))
            report = verify_recipe(recipe, trials=1, seed=seed)
            assert report.max_distance < 1e-8

    def test_fitted_normalization_is_phase(self):
        """Test that the unitary Ising recipes have unit normalization."""
        for name in ("ising.H", "ising.P", "ising.CZ"):
            assert np.isclose(abs(get_recipe(name).normalization), 1.0)

    def test_auxiliary_reuse(self):
        """Test that an auxiliary cannot be consumed twice."""
        step = RecipeStep(StepKind.PENDANT, (0,), (1.0, 1.0), aux=AuxSpec("a", 0))
        slots = ((0, 1),)
        recipe = GateRecipe(
            "reuse", potts_encoding(), 2, slots, slots, (step, step), np.eye(2, dtype=complex)
        )
        with pytest.raises(AuxiliaryReuse):
            PottsExecutor().run(recipe, np.array([1.0, 0.0]))
