import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    expectation_oracle,
    kron_oracle,
    partial_trace_oracle,
    random_density_matrix,
    random_hermitian,
    random_unit_vector,
    random_unitary,
)
from qthermo.errors import InputValidationError, InvariantViolationError
from qthermo.qcore import (
    DensityMatrix,
    HermitianOperator,
    PureState,
    SpaceLayout,
    check_density_matrix,
    dm_from_pure,
    expectation,
    partial_trace,
    purity,
    reduced_state,
    tensor_product,
    trace_distance,
    vn_entropy,
)

QB = SpaceLayout.single(2, "a")
QB_B = SpaceLayout.single(2, "b")
AB = SpaceLayout.of(("a", 2), ("b", 2))

# ln 4 - (3/4) ln 3, evaluated with mpmath at 30 digits
ENTROPY_3_1 = 0.56233514461880835


def dm(matrix, layout):
    return DensityMatrix(matrix, layout)


class TestLayout:
    def test_total_dim(self):
        layout = SpaceLayout.of(("s", 2), ("e", 3), ("w", 5))
        assert layout.total_dim == 30
        assert layout.labels == ("s", "e", "w")

    def test_duplicate_labels_rejected(self):
        with pytest.raises(InputValidationError):
            SpaceLayout.of(("a", 2), ("a", 2))

    def test_zero_dim_rejected(self):
        with pytest.raises(InputValidationError):
            SpaceLayout.of(("a", 0))

    def test_restrict_keeps_order(self):
        layout = SpaceLayout.of(("x", 2), ("y", 3), ("z", 4))
        assert layout.restrict(["z", "x"]).labels == ("x", "z")


class TestTensorProduct:
    def test_identities(self):
        out = tensor_product(HermitianOperator.identity(QB), HermitianOperator.identity(QB_B))
        np.testing.assert_array_equal(out.matrix, np.eye(4))
        assert out.layout == AB

    def test_basis_states(self):
        out = tensor_product(PureState.basis(0, QB), PureState.basis(1, QB_B))
        np.testing.assert_array_equal(out.amplitudes, [0, 1, 0, 0])

    def test_against_elementwise_oracle(self):
        rng = np.random.default_rng(11)
        a, b = random_hermitian(rng, 2), random_hermitian(rng, 2)
        x, y = random_unit_vector(rng, 2), random_unit_vector(rng, 2)
        ab = tensor_product(HermitianOperator(a, QB), HermitianOperator(b, QB_B)).matrix
        np.testing.assert_allclose(ab, kron_oracle(a, b), atol=1e-12)
        xy = tensor_product(PureState(x, QB), PureState(y, QB_B)).amplitudes
        np.testing.assert_allclose(ab @ xy, kron_oracle((a @ x)[:, None], (b @ y)[:, None])[:, 0], atol=1e-12)

    def test_label_clash(self):
        with pytest.raises(InputValidationError):
            tensor_product(PureState.basis(0, QB), PureState.basis(0, QB))

    def test_mixed_kinds_rejected(self):
        with pytest.raises(InputValidationError):
            tensor_product(PureState.basis(0, QB), DensityMatrix.maximally_mixed(QB_B))


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(1)
        rho, sigma = random_density_matrix(rng, 2), random_density_matrix(rng, 3)
        joint = tensor_product(dm(rho, QB), dm(sigma, SpaceLayout.single(3, "b")))
        np.testing.assert_allclose(partial_trace(joint, ["a"]).matrix, rho, atol=1e-12)
        np.testing.assert_allclose(partial_trace(joint, ["b"]).matrix, sigma, atol=1e-12)

    def test_bell_state(self):
        bell = PureState(np.array([1, 0, 0, 1]) / math.sqrt(2), AB)
        np.testing.assert_allclose(partial_trace(dm_from_pure(bell), ["a"]).matrix, np.eye(2) / 2, atol=1e-15)

    @pytest.mark.parametrize("keep", [[0], [1]])
    def test_two_qubit_oracle(self, keep):
        rng = np.random.default_rng(5)
        rho = random_density_matrix(rng, 4)
        labels = [AB.labels[i] for i in keep]
        got = partial_trace(dm(rho, AB), labels).matrix
        np.testing.assert_allclose(got, partial_trace_oracle(rho, [2, 2], keep), atol=1e-12)

    def test_unknown_label(self):
        with pytest.raises(InputValidationError):
            partial_trace(DensityMatrix.maximally_mixed(AB), ["c"])

    def test_empty_keep(self):
        with pytest.raises(InputValidationError):
            partial_trace(DensityMatrix.maximally_mixed(AB), [])

    def test_reduced_state_matches_partial_trace(self):
        rng = np.random.default_rng(8)
        layout = SpaceLayout.of(("x", 2), ("y", 3), ("z", 2))
        psi = PureState(random_unit_vector(rng, 12), layout)
        for keep in (["x"], ["y"], ["x", "z"], ["y", "z"]):
            np.testing.assert_allclose(
                reduced_state(psi, keep).matrix, partial_trace(dm_from_pure(psi), keep).matrix, atol=1e-14
            )

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), dims=st.lists(st.integers(1, 3), min_size=2, max_size=3))
    def test_trace_and_hermiticity_preserved(self, seed, dims):
        rng = np.random.default_rng(seed)
        layout = SpaceLayout(tuple((f"f{i}", d) for i, d in enumerate(dims)))
        rho = dm(random_density_matrix(rng, layout.total_dim), layout)
        keep = [layout.labels[int(rng.integers(len(dims)))]]
        out = partial_trace(rho, keep).matrix
        assert abs(np.trace(out) - 1) < 1e-12
        assert np.max(np.abs(out - out.conj().T)) < 1e-12


class TestEntropy:
    def test_pure(self):
        assert vn_entropy(dm(np.diag([1.0, 0.0]), QB)) == 0.0

    def test_maximally_mixed(self):
        assert vn_entropy(DensityMatrix.maximally_mixed(QB)) == pytest.approx(math.log(2), abs=1e-12)
        d8 = SpaceLayout.single(8)
        assert abs(vn_entropy(DensityMatrix.maximally_mixed(d8)) - math.log(8)) < 1e-10

    def test_three_to_one(self):
        assert vn_entropy(dm(np.diag([0.75, 0.25]), QB)) == pytest.approx(ENTROPY_3_1, abs=1e-14)

    def test_negative_eigenvalue_is_error(self):
        with pytest.raises(InvariantViolationError):
            vn_entropy(dm(np.diag([1.1, -0.1]), QB))

    def test_noise_tolerated(self):
        assert vn_entropy(dm(np.diag([1 + 1e-11, -1e-11]), QB)) == pytest.approx(0.0, abs=1e-9)

    def test_unitary_invariance(self):
        rng = np.random.default_rng(3)
        layout = SpaceLayout.single(6)
        for _ in range(10):
            rho = random_density_matrix(rng, 6, rank=3)
            u = random_unitary(rng, 6)
            assert abs(vn_entropy(dm(u @ rho @ u.conj().T, layout)) - vn_entropy(dm(rho, layout))) < 1e-9

    def test_random_pure_states(self):
        rng = np.random.default_rng(4)
        for d in (2, 5, 16):
            psi = PureState(random_unit_vector(rng, d), SpaceLayout.single(d))
            assert vn_entropy(dm_from_pure(psi)) < 1e-9

    def test_schmidt_symmetry(self):
        rng = np.random.default_rng(9)
        layout = SpaceLayout.of(("a", 3), ("b", 5))
        for _ in range(5):
            psi = PureState(random_unit_vector(rng, 15), layout)
            assert abs(vn_entropy(reduced_state(psi, ["a"])) - vn_entropy(reduced_state(psi, ["b"]))) < 1e-9

    def test_bounds(self):
        rng = np.random.default_rng(10)
        layout = SpaceLayout.single(7)
        s = vn_entropy(dm(random_density_matrix(rng, 7), layout))
        assert 0 <= s <= math.log(7)


class TestTraceDistance:
    def test_identical(self):
        rho = DensityMatrix.maximally_mixed(QB)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal(self):
        assert trace_distance(dm(np.diag([1.0, 0]), QB), dm(np.diag([0, 1.0]), QB)) == pytest.approx(1.0)

    def test_pure_vs_mixed(self):
        assert trace_distance(dm(np.diag([1.0, 0]), QB), DensityMatrix.maximally_mixed(QB)) == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        with pytest.raises(InputValidationError):
            trace_distance(DensityMatrix.maximally_mixed(QB), DensityMatrix.maximally_mixed(AB))

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 5))
    def test_metric_properties(self, seed, d):
        rng = np.random.default_rng(seed)
        layout = SpaceLayout.single(d)
        r, s, t = (dm(random_density_matrix(rng, d), layout) for _ in range(3))
        assert abs(trace_distance(r, s) - trace_distance(s, r)) < 1e-10
        assert trace_distance(r, t) <= trace_distance(r, s) + trace_distance(s, t) + 1e-10
        assert -1e-12 <= trace_distance(r, s) <= 1 + 1e-12


class TestPureAndPurity:
    def test_basis_projector(self):
        np.testing.assert_array_equal(dm_from_pure(PureState.basis(0, QB)).matrix, np.diag([1, 0]))

    def test_plus_state(self):
        plus = PureState(np.array([1, 1]) / math.sqrt(2), QB)
        np.testing.assert_allclose(dm_from_pure(plus).matrix, np.full((2, 2), 0.5), atol=1e-15)

    def test_random_purity(self):
        rng = np.random.default_rng(2)
        psi = PureState(random_unit_vector(rng, 9), SpaceLayout.single(9))
        assert abs(purity(dm_from_pure(psi)) - 1) < 1e-12

    def test_unnormalized_state_rejected(self):
        with pytest.raises(InputValidationError):
            PureState(np.array([1.0, 1.0]), QB)

    def test_purity_values(self):
        assert purity(DensityMatrix.maximally_mixed(SpaceLayout.single(4))) == pytest.approx(0.25)
        assert purity(dm(np.diag([0.75, 0.25]), QB)) == pytest.approx(0.625)


class TestExpectation:
    def test_identity(self):
        rng = np.random.default_rng(6)
        rho = dm(random_density_matrix(rng, 3), SpaceLayout.single(3))
        assert expectation(HermitianOperator.identity(SpaceLayout.single(3)), rho) == pytest.approx(1.0)

    def test_weighted_average(self):
        op = HermitianOperator(np.diag([0.0, 1.0]), QB)
        assert expectation(op, dm(np.diag([0.75, 0.25]), QB)) == pytest.approx(0.25)

    def test_oracle(self):
        rng = np.random.default_rng(7)
        layout = SpaceLayout.single(5)
        h, rho = random_hermitian(rng, 5), random_density_matrix(rng, 5)
        got = expectation(HermitianOperator(h, layout), dm(rho, layout))
        assert abs(got - expectation_oracle(h, rho).real) < 1e-12

    def test_mismatch(self):
        with pytest.raises(InputValidationError):
            expectation(HermitianOperator.identity(AB), DensityMatrix.maximally_mixed(QB))


class TestValidation:
    def test_non_hermitian_rejected(self):
        with pytest.raises(InputValidationError):
            dm(np.array([[0.5, 0.1], [0.0, 0.5]]), QB)

    def test_bad_trace_rejected(self):
        with pytest.raises(InputValidationError):
            dm(np.eye(2), QB)

    def test_layout_mismatch(self):
        with pytest.raises(InputValidationError):
            dm(np.eye(3) / 3, QB)

    def test_check_psd(self):
        check_density_matrix(DensityMatrix.maximally_mixed(QB))
        with pytest.raises(InvariantViolationError):
            check_density_matrix(dm(np.diag([1.5, -0.5]), QB))

    def test_immutable(self):
        rho = DensityMatrix.maximally_mixed(QB)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0
