import math

import numpy as np
import pytest

from manyworlds import (
    BipartiteSplit,
    CapacityError,
    DegenerateStateError,
    DensityMatrix,
    ShapeError,
    UnitaryOperator,
    apply_unitary,
    basis_state,
    density_of,
    eig_hermitian,
    haar_random_state,
    haar_random_unitary,
    make_state,
    partial_trace,
    tensor,
)
from manyworlds.hilbert import EPS_EIG, EPS_NORM, EPS_RANK


def reduced_by_outer_product(psi, d_left, d_right, keep):
    """Independent partial trace: full projector, then axis-summed."""
    full = np.outer(psi.amplitudes, psi.amplitudes.conj())
    full = full.reshape(d_left, d_right, d_left, d_right)
    if keep == "left":
        return np.trace(full, axis1=1, axis2=3)
    return np.trace(full, axis1=0, axis2=2)


class TestMakeState:
    def test_basis_qubit(self):
        psi = make_state([1, 0], [2])
        assert np.allclose(psi.amplitudes, [1, 0])
        assert psi.dims == (2,)

    def test_normalization_forced(self):
        psi = make_state([1, 1], [2])
        assert np.allclose(psi.amplitudes, [1 / math.sqrt(2)] * 2)
        assert abs(np.linalg.norm(psi.amplitudes) - 1.0) < EPS_NORM

    def test_zero_vector_rejected(self):
        with pytest.raises(DegenerateStateError, match="degenerate"):
            make_state([0, 0], [2])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            make_state([1, 0, 0], [2])

    def test_bad_dims_rejected(self):
        with pytest.raises(ShapeError):
            make_state([1], [0])

    def test_dimension_cap(self):
        with pytest.raises(CapacityError):
            make_state(np.ones(2**15), [2**15])


class TestTensor:
    def test_basis_product(self):
        prod = tensor(basis_state(0, 2), basis_state(1, 2))
        assert np.allclose(prod.amplitudes, [0, 1, 0, 0])
        assert prod.dims == (2, 2)

    def test_distributes_over_superposition(self):
        plus = make_state([1, 1], [2])
        prod = tensor(plus, basis_state(0, 2))
        assert np.allclose(prod.amplitudes, [1 / math.sqrt(2), 0, 1 / math.sqrt(2), 0])

    @pytest.mark.parametrize("seed", range(20))
    def test_norm_multiplicative(self, seed):
        a = haar_random_state(5, seed)
        b = haar_random_state(7, seed + 1000)
        assert abs(np.linalg.norm(tensor(a, b).amplitudes) - 1.0) < EPS_NORM


class TestApplyUnitary:
    def test_identity(self):
        psi = haar_random_state(6, 42)
        out = apply_unitary(UnitaryOperator(np.eye(6), 6), psi)
        assert np.allclose(out.amplitudes, psi.amplitudes, atol=1e-15)

    def test_cnot_truth_table(self):
        cnot = np.eye(4)[[0, 1, 3, 2]]
        u = UnitaryOperator(cnot, 4)
        ten = tensor(basis_state(1, 2), basis_state(0, 2))  # |10>
        out = apply_unitary(u, ten)
        assert np.allclose(out.amplitudes, [0, 0, 0, 1])

    @pytest.mark.parametrize("seed", range(100))
    def test_norm_preserved_for_haar_unitaries(self, seed):
        dim = 3 + seed % 14
        u = haar_random_unitary(dim, seed)
        psi = haar_random_state(dim, seed + 7)
        out = apply_unitary(u, psi)
        assert abs(np.linalg.norm(out.amplitudes) - 1.0) < EPS_NORM

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            apply_unitary(UnitaryOperator(np.eye(3), 3), basis_state(0, 2))

    def test_non_unitary_rejected(self):
        with pytest.raises(ShapeError, match="unitary"):
            UnitaryOperator(np.ones((2, 2)), 2)


class TestDensityOf:
    def test_ground_projector(self):
        rho = density_of(basis_state(0, 2))
        assert np.allclose(rho.entries, [[1, 0], [0, 0]])

    def test_plus_projector(self):
        rho = density_of(make_state([1, 1], [2]))
        assert np.allclose(rho.entries, 0.5 * np.ones((2, 2)))

    @pytest.mark.parametrize("seed", range(10))
    def test_purity(self, seed):
        rho = density_of(haar_random_state(9, seed))
        assert abs(np.trace(rho.entries @ rho.entries).real - 1.0) < 1e-10

    def test_idempotent(self):
        rho = density_of(haar_random_state(12, 31))
        assert np.max(np.abs(rho.entries @ rho.entries - rho.entries)) < 1e-10


class TestPartialTrace:
    def test_product_state_left(self):
        psi = tensor(basis_state(0, 2), basis_state(1, 2))
        rho = partial_trace(psi, BipartiteSplit(2, 2), "left")
        assert np.allclose(rho.entries, [[1, 0], [0, 0]])

    def test_bell_state_both_sides(self):
        bell = make_state([1, 0, 0, 1], [2, 2])
        for side in ("left", "right"):
            rho = partial_trace(bell, BipartiteSplit(2, 2), side)
            assert np.allclose(rho.entries, 0.5 * np.eye(2), atol=1e-12)

    def test_trace_one(self):
        psi = haar_random_state(24, 5)
        rho = partial_trace(psi, BipartiteSplit(4, 6), "right")
        assert abs(np.trace(rho.entries).real - 1.0) < EPS_NORM

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_outer_product_trace(self, seed):
        psi = haar_random_state(24, seed)
        for side in ("left", "right"):
            got = partial_trace(psi, BipartiteSplit(4, 6), side).entries
            want = reduced_by_outer_product(psi, 4, 6, side)
            assert np.max(np.abs(got - want)) < 1e-12

    @pytest.mark.parametrize("seed", range(30))
    def test_spectra_coincide_across_sides(self, seed):
        psi = haar_random_state(24, seed)
        w_left = np.linalg.eigvalsh(partial_trace(psi, BipartiteSplit(4, 6), "left").entries)
        w_right = np.linalg.eigvalsh(partial_trace(psi, BipartiteSplit(4, 6), "right").entries)
        nz_left = np.sort(w_left[w_left > EPS_RANK])[::-1]
        nz_right = np.sort(w_right[w_right > EPS_RANK])[::-1]
        assert nz_left.size == nz_right.size
        assert np.max(np.abs(nz_left - nz_right)) < 1e-10

    def test_inconsistent_split(self):
        with pytest.raises(ShapeError):
            partial_trace(haar_random_state(6, 0), BipartiteSplit(4, 2), "left")


class TestEigHermitian:
    def test_maximally_mixed(self):
        rho = DensityMatrix(0.5 * np.eye(2), 2)
        values, vectors = eig_hermitian(rho)
        assert np.allclose(values, [0.5, 0.5])
        # degenerate cluster falls back to the standard basis, in order
        assert np.allclose(vectors, np.eye(2))

    def test_diagonal_spectrum(self):
        rho = DensityMatrix(np.diag([0.7, 0.3]), 2)
        values, vectors = eig_hermitian(rho)
        assert np.allclose(values, [0.7, 0.3])
        assert np.allclose(np.abs(vectors), np.eye(2))

    @pytest.mark.parametrize("seed", range(50))
    def test_residual_is_small(self, seed):
        psi = haar_random_state(36, seed)
        rho = partial_trace(psi, BipartiteSplit(6, 6), "left")
        values, vectors = eig_hermitian(rho)
        residual = rho.entries @ vectors - vectors * values
        assert np.max(np.linalg.norm(residual, axis=0)) < EPS_EIG

    @pytest.mark.parametrize("seed", range(20))
    def test_descending_and_orthonormal(self, seed):
        psi = haar_random_state(16, seed)
        rho = partial_trace(psi, BipartiteSplit(4, 4), "left")
        values, vectors = eig_hermitian(rho)
        assert np.all(np.diff(values) <= 0)
        gram = vectors.conj().T @ vectors
        assert np.max(np.abs(gram - np.eye(4))) < EPS_EIG

    def test_phase_convention(self):
        psi = haar_random_state(15, 11)
        rho = partial_trace(psi, BipartiteSplit(3, 5), "left")
        _, vectors = eig_hermitian(rho)
        for col in vectors.T:
            pivot = col[np.abs(col) > 1e-9][0]
            assert pivot.real > 0 and abs(pivot.imag) < 1e-12

    def test_deterministic_on_repeat(self):
        rho = partial_trace(haar_random_state(16, 3), BipartiteSplit(4, 4), "left")
        first = eig_hermitian(rho)
        second = eig_hermitian(rho)
        assert np.array_equal(first[0], second[0])
        assert np.array_equal(first[1], second[1])

    def test_non_hermitian_rejected(self):
        with pytest.raises(ShapeError, match="Hermitian"):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]), 2)


class TestHaarRandomState:
    def test_dim_one_has_unit_modulus(self):
        psi = haar_random_state(1, 99)
        assert abs(abs(psi.amplitudes[0]) - 1.0) < 1e-12

    def test_same_seed_bit_identical(self):
        a = haar_random_state(8, 2**63 + 17)
        b = haar_random_state(8, 2**63 + 17)
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_different_seeds_differ(self):
        a = haar_random_state(8, 1)
        b = haar_random_state(8, 2)
        assert not np.allclose(a.amplitudes, b.amplitudes)

    def test_zero_dim_rejected(self):
        with pytest.raises(ShapeError):
            haar_random_state(0, 1)

    def test_ground_overlap_mean_is_one_over_dim(self):
        # squared overlap with |0> follows Beta(1, dim-1): mean 1/2, var 1/12
        n = 100_000
        samples = np.array(
            [abs(haar_random_state(2, s).amplitudes[0]) ** 2 for s in range(n)]
        )
        tolerance = 5 * math.sqrt(1 / 12 / n)
        assert abs(samples.mean() - 0.5) < tolerance


class TestInvariantSweep:
    def test_spectra_coincidence_small_sweep(self):
        # the full 1000-state sweep runs in the acceptance suite
        splits = [(2, 2), (2, 8), (4, 4), (4, 6), (8, 8)]
        for seed in range(40):
            d_left, d_right = splits[seed % len(splits)]
            psi = haar_random_state(d_left * d_right, seed)
            left = np.linalg.eigvalsh(
                partial_trace(psi, BipartiteSplit(d_left, d_right), "left").entries
            )[::-1]
            right = np.linalg.eigvalsh(
                partial_trace(psi, BipartiteSplit(d_left, d_right), "right").entries
            )[::-1]
            n = min(left.size, right.size)
            assert np.max(np.abs(left[:n] - right[:n])) < 1e-10
            assert int(np.sum(left > EPS_RANK)) == int(np.sum(right > EPS_RANK))
