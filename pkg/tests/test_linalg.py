import numpy as np
import pytest

from qincompat import (
    DimensionMismatchError,
    NotHermitianError,
    commutator_norm,
    herm_eig,
    max_eig,
    projector,
    random_unit_vector,
    trace_product,
)
from conftest import PAULI_X, PAULI_Z, random_hermitian


class TestHermEig:
    def test_identity(self):
        eig = herm_eig(np.eye(3, dtype=complex))
        np.testing.assert_allclose(eig.eigenvalues, [1.0, 1.0, 1.0])

    def test_already_diagonal(self):
        eig = herm_eig(np.diag([1.0, -1.0]).astype(complex))
        np.testing.assert_allclose(eig.eigenvalues, [1.0, -1.0])
        np.testing.assert_allclose(np.abs(eig.eigenvectors), np.eye(2), atol=1e-14)
        # descending order puts +1 first
        assert eig.eigenvectors[0, 0] == pytest.approx(1.0)

    def test_reconstruction_residual(self):
        h = random_hermitian(4, np.random.default_rng(7))
        eig = herm_eig(h)
        assert np.linalg.norm(eig.reconstruct() - h) < 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatchError):
            herm_eig(np.zeros((2, 3)))

    def test_deterministic(self):
        h = random_hermitian(5, np.random.default_rng(3))
        a, b = herm_eig(h), herm_eig(h)
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)

    @pytest.mark.parametrize("dim", [2, 3, 4, 6, 9])
    def test_invariants_on_random_inputs(self, dim):
        rng = np.random.default_rng(dim)
        for _ in range(20):
            h = random_hermitian(dim, rng)
            eig = herm_eig(h)
            gram = eig.eigenvectors.conj().T @ eig.eigenvectors
            assert np.linalg.norm(gram - np.eye(dim)) <= 1e-10
            assert np.linalg.norm(eig.reconstruct() - h) <= 1e-9
            assert np.all(np.diff(eig.eigenvalues) <= 0)
            for column in eig.eigenvectors.T:
                lead = column[np.argmax(np.abs(column) > 1e-12)]
                assert lead.real > 0 and abs(lead.imag) < 1e-12


class TestMaxEig:
    def test_simple_diagonal(self):
        value, vector = max_eig(np.diag([0.2, 0.8]).astype(complex))
        assert value == pytest.approx(0.8)
        np.testing.assert_allclose(vector, [0.0, 1.0], atol=1e-14)

    def test_fully_degenerate_is_deterministic(self):
        value, vector = max_eig(0.5 * np.eye(2, dtype=complex))
        assert value == pytest.approx(0.5)
        _, again = max_eig(0.5 * np.eye(2, dtype=complex))
        assert np.array_equal(vector, again)

    def test_intercepted_state_average(self):
        # measuring |0><0| against the Z and X bases leaves the average
        # post-measurement state (1/2)(diag(1,0) + I/2) = diag(3/4, 1/4)
        rho = 0.5 * (np.diag([1.0, 0.0]) + np.eye(2) / 2)
        value, vector = max_eig(rho.astype(complex))
        assert value == pytest.approx(0.75, abs=1e-14)
        np.testing.assert_allclose(vector, [1.0, 0.0], atol=1e-14)

    def test_matches_herm_eig_exactly(self, rng):
        h = random_hermitian(6, rng)
        value, _ = max_eig(h)
        assert value == float(np.max(herm_eig(h).eigenvalues))


class TestProjector:
    def test_standard_basis(self):
        np.testing.assert_allclose(projector(np.array([1.0, 0.0])), np.diag([1.0, 0.0]))

    def test_superposition(self):
        p = projector(np.array([1.0, 1.0]) / np.sqrt(2))
        np.testing.assert_allclose(p, np.full((2, 2), 0.5), atol=1e-15)

    def test_unit_trace(self, rng):
        v = random_unit_vector(5, rng)
        assert abs(np.trace(projector(v)) - 1.0) < 1e-12

    def test_idempotent_hermitian(self, rng):
        p = projector(random_unit_vector(4, rng))
        assert np.linalg.norm(p @ p - p) < 1e-10
        assert np.linalg.norm(p - p.conj().T) < 1e-12

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            projector(np.array([1.0, 1.0]))


class TestTraceProduct:
    def test_identity_pair(self):
        assert trace_product(np.eye(3), np.eye(3)) == pytest.approx(3.0)

    def test_orthogonal_projectors(self):
        assert trace_product(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx(0.0)

    def test_two_random_projectors(self, rng):
        u, v = random_unit_vector(3, rng), random_unit_vector(3, rng)
        value = trace_product(projector(u), projector(v))
        assert abs(value.imag) < 1e-12
        assert value.real == pytest.approx(abs(np.vdot(u, v)) ** 2, abs=1e-12)
        assert -1e-12 <= value.real <= 1.0 + 1e-12

    def test_conjugation_symmetry(self, rng):
        for _ in range(20):
            a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            lhs = trace_product(a, b)
            rhs = np.conj(trace_product(b.conj().T, a.conj().T))
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            trace_product(np.eye(2), np.eye(3))


class TestCommutatorNorm:
    def test_diagonal_matrices(self):
        assert commutator_norm(np.diag([1.0, 2.0]), np.diag([3.0, -1.0])) == 0.0

    def test_pauli_pair(self):
        assert commutator_norm(PAULI_Z, PAULI_X) == pytest.approx(2 * np.sqrt(2), abs=1e-14)

    def test_self_commutes(self, rng):
        h = random_hermitian(4, rng)
        assert commutator_norm(h, h) == 0.0


class TestRandomUnitVector:
    def test_one_dimensional_is_a_phase(self):
        v = random_unit_vector(1, np.random.default_rng(0))
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12

    def test_seed_reproducibility(self):
        a = random_unit_vector(4, np.random.default_rng(123))
        b = random_unit_vector(4, np.random.default_rng(123))
        assert np.array_equal(a, b)

    def test_haar_average_overlap(self):
        # Haar average of |<0|v>|^2 in d=2 is 1/2
        rng = np.random.default_rng(99)
        samples = [abs(random_unit_vector(2, rng)[0]) ** 2 for _ in range(10_000)]
        assert np.mean(samples) == pytest.approx(0.5, abs=0.02)

    def test_rejects_bad_dim(self):
        with pytest.raises(ValueError):
            random_unit_vector(0, np.random.default_rng(0))
