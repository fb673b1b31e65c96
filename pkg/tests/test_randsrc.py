from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from scipy.stats import ks_2samp

from oracles import random_unitary
from qthermo.errors import InputValidationError
from qthermo.qcore import HermitianOperator, PureState, SpaceLayout, is_unitary
from qthermo.randsrc import (
    SeedSpec,
    apply_block_haar,
    block_haar_unitary,
    derive_stream,
    group_eigenvalues,
    gue_hermitian,
    haar_state_in_subspace,
    haar_unit_vector,
    haar_unitary,
)
from qthermo.typicality import ConstraintSubspace, full_space_subspace

SEED = SeedSpec(20260401)


class TestStreams:
    def test_deterministic(self):
        a = derive_stream(SEED, 3).generator().random(5)
        b = derive_stream(SEED, 3).generator().random(5)
        np.testing.assert_array_equal(a, b)

    def test_sibling_streams_uncorrelated(self):
        x = derive_stream(SEED, 0).generator().random(10_000)
        y = derive_stream(SEED, 1).generator().random(10_000)
        assert abs(np.corrcoef(x, y)[0, 1]) < 0.05

    def test_masters_do_not_collide(self):
        firsts = {derive_stream(SeedSpec(m), 0).generator().random() for m in range(1000)}
        assert len(firsts) == 1000

    def test_nested_derivations_distinct(self):
        indices = set()
        for i in range(50):
            child = derive_stream(SEED, i)
            indices.add(child.stream_index)
            for j in range(50):
                indices.add(derive_stream(child, j).stream_index)
        assert len(indices) == 50 * 51

    def test_seed_range(self):
        with pytest.raises(InputValidationError):
            SeedSpec(-1)
        with pytest.raises(InputValidationError):
            SeedSpec(2**64)

    def test_order_independent(self):
        streams = [derive_stream(SEED, i) for i in range(16)]
        serial = [haar_unit_vector(32, s).amplitudes for s in streams]
        with ThreadPoolExecutor(4) as pool:
            parallel = list(pool.map(lambda s: haar_unit_vector(32, s).amplitudes, reversed(streams)))
        for a, b in zip(serial, reversed(parallel)):
            np.testing.assert_array_equal(a, b)


class TestHaarVector:
    def test_dim_one(self):
        psi = haar_unit_vector(1, SEED)
        assert abs(np.linalg.norm(psi.amplitudes) - 1) < 1e-15

    def test_dim_zero(self):
        with pytest.raises(InputValidationError):
            haar_unit_vector(0, SEED)

    def test_deterministic(self):
        np.testing.assert_array_equal(haar_unit_vector(7, SEED).amplitudes, haar_unit_vector(7, SEED).amplitudes)

    def test_first_moment(self):
        n, d = 10_000, 16
        w = np.array([abs(haar_unit_vector(d, derive_stream(SEED, i)).amplitudes[0]) ** 2 for i in range(n)])
        se = w.std(ddof=1) / np.sqrt(n)
        assert abs(w.mean() - 1 / d) < 3 * se

    def test_rotation_invariance_ks(self):
        n, d = 10_000, 4
        rot = random_unitary(np.random.default_rng(0), d)
        plain, rotated = [], []
        for i in range(n):
            v = haar_unit_vector(d, derive_stream(SEED, i)).amplitudes
            plain.append(v[0])
            rotated.append((rot @ haar_unit_vector(d, derive_stream(SEED, n + i)).amplitudes)[0])
        plain, rotated = np.array(plain), np.array(rotated)
        for f in (np.real, np.imag, np.abs):
            assert ks_2samp(f(plain), f(rotated)).pvalue > 0.01


class TestSubspaceSampling:
    def test_full_space_matches_unit_vector(self):
        layout = SpaceLayout.single(6)
        psi = haar_state_in_subspace(full_space_subspace(layout), SEED)
        np.testing.assert_allclose(psi.amplitudes, haar_unit_vector(6, SEED).amplitudes, atol=1e-15)

    def test_one_dimensional(self):
        v = np.array([0, 1, 1j, 0]) / np.sqrt(2)
        sub = ConstraintSubspace(v[:, None], SpaceLayout.single(4))
        for i in range(5):
            psi = haar_state_in_subspace(sub, derive_stream(SEED, i)).amplitudes
            assert abs(abs(np.vdot(v, psi)) - 1) < 1e-12

    def test_mean_projector(self):
        rng = np.random.default_rng(12)
        q, _ = np.linalg.qr(rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2)))
        sub = ConstraintSubspace(q, SpaceLayout.single(4))
        n = 10_000
        samples = []
        for i in range(n):
            psi = haar_state_in_subspace(sub, derive_stream(SEED, i)).amplitudes
            assert np.linalg.norm(psi - q @ (q.conj().T @ psi)) < 1e-10
            samples.append(np.outer(psi, psi.conj()))
        samples = np.array(samples)
        expected = q @ q.conj().T / 2
        for part in (np.real, np.imag):
            mean = part(samples).mean(axis=0)
            se = part(samples).std(axis=0, ddof=1) / np.sqrt(n)
            assert np.all(np.abs(mean - part(expected)) <= 3 * se + 1e-12)

    def test_non_isometry_rejected(self):
        class Fake:
            isometry = np.array([[1.0], [1.0]])
            layout = SpaceLayout.single(2)

        with pytest.raises(InputValidationError):
            haar_state_in_subspace(Fake(), SEED)


class TestGUE:
    def test_hermitian_and_deterministic(self):
        h = gue_hermitian(9, 0.5, SEED)
        np.testing.assert_array_equal(h.matrix, h.matrix.conj().T)
        np.testing.assert_array_equal(h.matrix, gue_hermitian(9, 0.5, SEED).matrix)

    def test_mean_eigenvalue(self):
        n, d = 1000, 32
        means = np.array([np.trace(gue_hermitian(d, 1.0, derive_stream(SEED, i)).matrix).real / d for i in range(n)])
        assert abs(means.mean()) < 3 * means.std(ddof=1) / np.sqrt(n)

    def test_entry_variances(self):
        scale, n = 0.7, 2000
        off_re, off_im, diag = [], [], []
        for i in range(n):
            h = gue_hermitian(3, scale, derive_stream(SEED, i)).matrix
            off_re.append(h[0, 1].real)
            off_im.append(h[0, 1].imag)
            diag.append(h[1, 1].real)
        # sample variance of n normals has relative standard error sqrt(2/n) ~ 3%
        assert np.var(off_re) == pytest.approx(scale**2, rel=0.1)
        assert np.var(off_im) == pytest.approx(scale**2, rel=0.1)
        assert np.var(diag) == pytest.approx(2 * scale**2, rel=0.1)

    def test_bad_scale(self):
        with pytest.raises(InputValidationError):
            gue_hermitian(3, 0.0, SEED)


class TestHaarUnitary:
    def test_unitary(self):
        assert is_unitary(haar_unitary(12, SEED), 1e-10)

    def test_first_column_is_haar_vector(self):
        np.testing.assert_allclose(haar_unitary(8, SEED)[:, 0], haar_unit_vector(8, SEED).amplitudes, atol=1e-14)


class TestBlockHaar:
    def test_identity_single_block(self):
        layout = SpaceLayout.single(5)
        u = block_haar_unitary(HermitianOperator.identity(layout), SEED)
        assert is_unitary(u, 1e-10)
        assert np.count_nonzero(np.abs(u) > 1e-3) > 20

    def test_two_blocks(self):
        c = HermitianOperator(np.diag([0.0, 0, 1, 1]), SpaceLayout.single(4))
        u = block_haar_unitary(c, SEED)
        assert np.max(np.abs(u[:2, 2:])) == 0 and np.max(np.abs(u[2:, :2])) == 0
        assert is_unitary(u[:2, :2], 1e-12) and is_unitary(u[2:, 2:], 1e-12)
        assert np.max(np.abs(u @ c.matrix - c.matrix @ u)) < 1e-9

    def test_distinct_eigenvalues_give_phases(self):
        c = HermitianOperator(np.diag([0.0, 1, 2, 3]), SpaceLayout.single(4))
        u = block_haar_unitary(c, SEED)
        np.testing.assert_allclose(np.abs(np.diagonal(u)), 1, atol=1e-14)
        assert np.max(np.abs(u - np.diag(np.diagonal(u)))) == 0

    def test_commutes_in_rotated_basis(self):
        rng = np.random.default_rng(3)
        w = random_unitary(rng, 6)
        c = HermitianOperator(w @ np.diag([0.0, 0, 1, 1, 1, 2.5]) @ w.conj().T, SpaceLayout.single(6))
        for i in range(5):
            u = block_haar_unitary(c, derive_stream(SEED, i))
            assert is_unitary(u, 1e-10)
            assert np.max(np.abs(u @ c.matrix - c.matrix @ u)) < 1e-9

    def test_grouping_rule(self):
        groups = group_eigenvalues(np.array([0.0, 1.0, 1.0 + 1e-10, 2.0, 2.0 + 1e-6]))
        assert [g.tolist() for g in groups] == [[0], [1, 2], [3], [4]]

    def test_apply_matches_dense_on_basis_input(self):
        c = np.array([0.0, 1, 0, 1, 0, 2])
        layout = SpaceLayout.single(6)
        dense = block_haar_unitary(HermitianOperator(np.diag(c), layout), SEED)
        for idx in (0, 1, 5):
            psi = PureState.basis(idx, layout)
            fast = apply_block_haar(c, psi, SEED).amplitudes
            np.testing.assert_allclose(fast, dense[:, idx], atol=1e-12)

    def test_apply_preserves_block_weights(self):
        rng = np.random.default_rng(4)
        c = np.array([0.0, 0, 1, 1, 1, 3])
        v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        psi = PureState(v / np.linalg.norm(v), SpaceLayout.single(6))
        out = apply_block_haar(c, psi, SEED).amplitudes
        for idx in ([0, 1], [2, 3, 4], [5]):
            assert abs(np.linalg.norm(out[idx]) - np.linalg.norm(psi.amplitudes[idx])) < 1e-12

    def test_apply_distribution_matches_dense(self):
        # mean occupation of index 0 for a generic input: both paths give |P_0 psi|^2 / 2
        c = np.array([0.0, 0, 1, 1])
        layout = SpaceLayout.single(4)
        psi = PureState(np.array([0.6, 0.0, 0.0, 0.8], dtype=complex), layout)
        n = 4000
        fast = np.array([abs(apply_block_haar(c, psi, derive_stream(SEED, i)).amplitudes[0]) ** 2 for i in range(n)])
        dense = np.array([
            abs((block_haar_unitary(HermitianOperator(np.diag(c), layout), derive_stream(SEED, n + i)) @ psi.amplitudes)[0]) ** 2
            for i in range(n)
        ])
        for sample in (fast, dense):
            assert abs(sample.mean() - 0.18) < 3 * sample.std(ddof=1) / np.sqrt(n)
        assert ks_2samp(fast, dense).pvalue > 0.01

    def test_apply_needs_diagonal(self):
        c = HermitianOperator(np.array([[0, 1], [1, 0.0]]), SpaceLayout.single(2))
        with pytest.raises(InputValidationError):
            apply_block_haar(c, PureState.basis(0, SpaceLayout.single(2)), SEED)
