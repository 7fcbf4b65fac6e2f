import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from gatecap import linalg as la

X = np.array([[0, 1], [1, 0]], dtype=complex)


def bell_pair():
    return np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def random_state(rng, layout):
    v = rng.normal(size=layout.dim) + 1j * rng.normal(size=layout.dim)
    return la.StateVector(layout, v / np.linalg.norm(v))


def random_unitary(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, replaced = la.gram_schmidt_unitarize(g)
    assert not replaced
    return q


class TestSubsystemLayout:
    def test_index_is_bijective(self):
        layout = la.SubsystemLayout(2, 3, 2, 2)
        seen = [layout.index(*t) for t in itertools.product(range(2), range(3), range(2), range(2))]
        assert sorted(seen) == list(range(layout.dim))

    def test_composite_dims(self):
        layout = la.SubsystemLayout(2, 4, 2, 4)
        assert (layout.dim_A, layout.dim_B, layout.dim) == (8, 8, 64)

    def test_rejects_nonpositive(self):
        with pytest.raises(la.DimensionError):
            la.SubsystemLayout(2, 0, 2, 1)

    def test_dimension_cap(self):
        la.SubsystemLayout(8, 8, 8, 8)  # exactly 4096 is fine
        with pytest.raises(la.DimensionError):
            la.SubsystemLayout(8, 9, 8, 8)

    def test_index_range_checked(self):
        layout = la.SubsystemLayout(2, 1, 2, 1)
        with pytest.raises(la.DimensionError):
            layout.index(2, 0, 0, 0)


class TestStateVector:
    def test_norm_enforced_when_normalized(self):
        layout = la.SubsystemLayout(2, 1, 2, 1)
        with pytest.raises(la.InvalidStateError):
            la.StateVector(layout, np.array([1, 1, 0, 0], dtype=complex))

    def test_unnormalized_allows_any_positive_norm(self):
        layout = la.SubsystemLayout(2, 1, 2, 1)
        sv = la.StateVector(layout, np.array([3, 0, 0, 4], dtype=complex), normalized=False)
        assert sv.norm == pytest.approx(5.0)

    def test_zero_vector_rejected(self):
        layout = la.SubsystemLayout(2, 1, 1, 1)
        with pytest.raises(la.InvalidStateError):
            la.StateVector(layout, np.zeros(2, dtype=complex), normalized=False)

    def test_length_mismatch(self):
        layout = la.SubsystemLayout(2, 1, 2, 1)
        with pytest.raises(la.DimensionError):
            la.StateVector(layout, np.zeros(5, dtype=complex), normalized=False)

    def test_nonfinite_rejected(self):
        layout = la.SubsystemLayout(2, 1, 1, 1)
        with pytest.raises(la.InvalidStateError):
            la.StateVector(layout, np.array([np.nan, 1.0]), normalized=False)


class TestTensorProduct:
    def test_identity_matrices(self):
        out = la.tensor_product(np.eye(2, dtype=complex), np.eye(2, dtype=complex))
        assert np.array_equal(out, np.eye(4))

    def test_pauli_x_pair_flips_00_to_11(self):
        xx = la.tensor_product(X, X)
        assert xx[0][3] == 1
        e00 = np.zeros(4)
        e00[0] = 1
        out = xx @ e00
        assert out[3] == 1 and np.count_nonzero(out) == 1

    def test_product_state_expansion(self):
        plus = la.StateVector(la.SubsystemLayout(2, 1, 1, 1), np.array([1, 1]) / np.sqrt(2))
        zero = la.StateVector(la.SubsystemLayout(1, 1, 2, 1), np.array([1, 0], dtype=complex))
        joint = la.tensor_product(plus, zero)
        assert joint.layout == la.SubsystemLayout(2, 1, 2, 1)
        np.testing.assert_allclose(joint.amplitudes, np.array([1, 0, 1, 0]) / np.sqrt(2))

    def test_interleaved_layouts_rejected(self):
        bob = la.StateVector(la.SubsystemLayout(1, 1, 2, 1), np.array([1, 0], dtype=complex))
        alice = la.StateVector(la.SubsystemLayout(2, 1, 1, 1), np.array([1, 0], dtype=complex))
        with pytest.raises(la.DimensionError):
            la.tensor_product(bob, alice)

    def test_mixed_kinds_rejected(self):
        alice = la.StateVector(la.SubsystemLayout(2, 1, 1, 1), np.array([1, 0], dtype=complex))
        with pytest.raises(TypeError):
            la.tensor_product(alice, np.eye(2))

    def test_dimension_cap(self):
        big = np.eye(70, dtype=complex)
        with pytest.raises(la.DimensionError):
            la.tensor_product(big, big)

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=25)
    def test_associativity(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)) for d in (2, 3, 2))
        left = la.tensor_product(la.tensor_product(a, b), c)
        right = la.tensor_product(a, la.tensor_product(b, c))
        assert np.abs(left - right).max() < 1e-12


class TestPartialTrace:
    def test_bell_reduces_to_maximally_mixed(self):
        psi = la.StateVector(la.SubsystemLayout(2, 1, 2, 1), bell_pair())
        rho = la.partial_trace(psi, "bob")
        np.testing.assert_allclose(rho.entries, np.eye(2) / 2, atol=1e-15)

    def test_product_state_reduces_to_projector(self, rng):
        layout = la.SubsystemLayout(2, 2, 2, 1)
        a = rng.normal(size=4) + 1j * rng.normal(size=4)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        psi = la.StateVector(layout, np.kron(a, b))
        rho = la.partial_trace(psi, "bob")
        np.testing.assert_allclose(rho.entries, np.outer(b, b.conj()), atol=1e-12)

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=25)
    def test_schmidt_symmetry_against_svd(self, seed):
        rng = np.random.default_rng(seed)
        layout = la.SubsystemLayout(2, 3, 2, 2)
        psi = random_state(rng, layout)
        wa = la.hermitian_eigenvalues(la.partial_trace(psi, "alice"))
        wb = la.hermitian_eigenvalues(la.partial_trace(psi, "bob"))
        sq = np.sort(oracles.schmidt_squares(psi.amplitudes, layout.dim_A, layout.dim_B))[::-1]
        keep = min(layout.dim_A, layout.dim_B)
        assert np.abs(wa[:keep] - wb[:keep]).max() < 1e-10
        assert np.abs(wa[:keep] - sq[:keep]).max() < 1e-10

    def test_unit_trace(self, rng):
        psi = random_state(rng, la.SubsystemLayout(2, 2, 2, 3))
        for keep in ("alice", "bob"):
            assert abs(np.trace(la.partial_trace(psi, keep).entries).real - 1) < 1e-10

    def test_requires_normalized(self):
        layout = la.SubsystemLayout(2, 1, 2, 1)
        sv = la.StateVector(layout, np.array([2, 0, 0, 0], dtype=complex), normalized=False)
        with pytest.raises(la.InvalidStateError):
            la.partial_trace(sv, "bob")

    def test_bad_keep_label(self):
        psi = la.StateVector(la.SubsystemLayout(2, 1, 2, 1), bell_pair())
        with pytest.raises(ValueError):
            la.partial_trace(psi, "charlie")


class TestHermitianEigenvalues:
    def test_maximally_mixed(self):
        w = la.hermitian_eigenvalues(np.eye(2, dtype=complex) / 2)
        np.testing.assert_allclose(w, [0.5, 0.5])

    def test_diagonal_sorted_descending(self):
        w = la.hermitian_eigenvalues(np.diag([0.25, 0.75]).astype(complex))
        np.testing.assert_allclose(w, [0.75, 0.25])

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=20)
    def test_against_jacobi_oracle(self, seed):
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10))
        h = g + g.conj().T
        assert np.abs(la.hermitian_eigenvalues(h) - oracles.jacobi_eigenvalues(h)).max() < 1e-8
        assert abs(la.hermitian_eigenvalues(h).sum() - np.trace(h).real) < 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(la.NotHermitianError):
            la.hermitian_eigenvalues(np.array([[0, 1], [0, 0]], dtype=complex))


class TestVonNeumannEntropy:
    def test_pure_projector_is_zero(self, rng):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        v /= np.linalg.norm(v)
        assert la.von_neumann_entropy(np.outer(v, v.conj())) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_qubit(self):
        assert la.von_neumann_entropy(np.eye(2, dtype=complex) / 2) == pytest.approx(1.0)

    def test_binary_entropy_value(self):
        expected = -(0.25 * np.log2(0.25) + 0.75 * np.log2(0.75))
        got = la.von_neumann_entropy(np.diag([0.25, 0.75]).astype(complex))
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(0.811278, abs=1e-6)

    def test_zero_times_log_zero(self):
        assert la.von_neumann_entropy(np.diag([1.0, 0.0]).astype(complex)) == 0.0

    def test_small_negative_eigenvalue_clamped(self):
        rho = np.diag([-1e-8, 1 + 1e-8]).astype(complex)
        assert la.von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-6)

    def test_large_negative_eigenvalue_rejected(self):
        rho = np.diag([-1e-5, 1 + 1e-5]).astype(complex)
        with pytest.raises(la.InvalidStateError):
            la.von_neumann_entropy(rho)

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=20)
    def test_unitary_invariance(self, seed):
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        w = random_unitary(rng, 4)
        s0 = la.von_neumann_entropy(la.DensityMatrix(rho))
        s1 = la.von_neumann_entropy(la.DensityMatrix(w @ rho @ w.conj().T))
        assert abs(s0 - s1) < 1e-9


class TestDensityMatrix:
    def test_valid_construction(self):
        rho = la.DensityMatrix(np.eye(4, dtype=complex) / 4)
        assert rho.dim == 4

    def test_trace_checked(self):
        with pytest.raises(la.InvalidStateError):
            la.DensityMatrix(np.eye(2, dtype=complex))

    def test_hermiticity_checked(self):
        m = np.array([[0.5, 0.1], [0.0, 0.5]], dtype=complex)
        with pytest.raises(la.NotHermitianError):
            la.DensityMatrix(m)

    def test_negativity_checked(self):
        with pytest.raises(la.InvalidStateError):
            la.DensityMatrix(np.diag([-1e-8, 1 + 1e-8]).astype(complex))


class TestEntanglementEntropy:
    def test_product_state(self):
        psi = la.StateVector(la.SubsystemLayout(2, 1, 2, 1), np.array([1, 0, 0, 0], dtype=complex))
        assert la.entanglement_entropy(psi) == pytest.approx(0.0, abs=1e-12)

    def test_bell_state(self):
        psi = la.StateVector(la.SubsystemLayout(2, 1, 2, 1), bell_pair())
        assert la.entanglement_entropy(psi) == pytest.approx(1.0, abs=1e-12)

    def test_two_bell_pairs_add(self):
        layout = la.SubsystemLayout(2, 2, 2, 2)
        amps = np.zeros(16, dtype=complex)
        for i in range(2):
            for j in range(2):
                amps[layout.index(i, j, i, j)] = 0.5
        psi = la.StateVector(layout, amps)
        assert la.entanglement_entropy(psi) == pytest.approx(2.0, abs=1e-12)

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=25)
    def test_schmidt_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        psi = random_state(rng, la.SubsystemLayout(2, 2, 2, 3))
        sa = la.von_neumann_entropy(la.partial_trace(psi, "alice"))
        sb = la.von_neumann_entropy(la.partial_trace(psi, "bob"))
        assert abs(sa - sb) < 1e-9


class TestGramSchmidt:
    def test_identity_fixed(self):
        q, replaced = la.gram_schmidt_unitarize(np.eye(3, dtype=complex))
        assert np.array_equal(q, np.eye(3))
        assert replaced == ()

    def test_row_scaling_removed(self):
        q, _ = la.gram_schmidt_unitarize(np.diag([2.0, 3.0]).astype(complex))
        np.testing.assert_allclose(q, np.eye(2), atol=1e-15)

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=30)
    def test_output_unitary(self, seed):
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        q, _ = la.gram_schmidt_unitarize(g)
        assert np.abs(q @ q.conj().T - np.eye(4)).max() < 1e-10

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=20)
    def test_idempotent_on_unitaries(self, seed):
        rng = np.random.default_rng(seed)
        q = random_unitary(rng, 4)
        q2, replaced = la.gram_schmidt_unitarize(q)
        assert replaced == ()
        assert np.abs(q2 - q).max() < 1e-10

    def test_row_k_in_leading_span(self, rng):
        g = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        q, _ = la.gram_schmidt_unitarize(g)
        for k in range(5):
            # project q[k] onto an orthonormal basis for rows 0..k of g
            basis = np.linalg.qr(g[: k + 1].T)[0]
            resid = q[k] - basis @ (basis.conj().T @ q[k])
            assert np.linalg.norm(resid) < 1e-8

    def test_dependent_row_replaced(self):
        m = np.array([[1, 0, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
        q, replaced = la.gram_schmidt_unitarize(m)
        assert replaced == (1,)
        assert np.abs(q @ q.conj().T - np.eye(3)).max() < 1e-10

    def test_zero_matrix_fully_repaired(self):
        q, replaced = la.gram_schmidt_unitarize(np.zeros((3, 3), dtype=complex))
        assert replaced == (0, 1, 2)
        assert np.abs(q @ q.conj().T - np.eye(3)).max() < 1e-12


class TestNormalizeState:
    def test_simple_rescale(self):
        layout = la.SubsystemLayout(2, 1, 2, 1)
        sv = la.StateVector(layout, np.array([2, 0, 0, 0], dtype=complex), normalized=False)
        out = la.normalize_state(sv)
        np.testing.assert_allclose(out.amplitudes, [1, 0, 0, 0])
        assert out.normalized

    def test_fixed_point(self, rng):
        psi = random_state(rng, la.SubsystemLayout(2, 2, 2, 1))
        out = la.normalize_state(la.StateVector(psi.layout, psi.amplitudes, normalized=False))
        assert np.abs(out.amplitudes - psi.amplitudes).max() < 1e-15

    def test_phase_preserved(self):
        layout = la.SubsystemLayout(2, 1, 1, 1)
        sv = la.StateVector(layout, np.array([1, 1j]), normalized=False)
        np.testing.assert_allclose(la.normalize_state(sv).amplitudes,
                                   np.array([1, 1j]) / np.sqrt(2))

    def test_degenerate_raises(self):
        layout = la.SubsystemLayout(2, 1, 1, 1)
        sv = la.StateVector(layout, np.array([1e-15, 0]), normalized=False)
        with pytest.raises(la.DegenerateStateError):
            la.normalize_state(sv)
