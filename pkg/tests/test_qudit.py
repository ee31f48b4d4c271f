import itertools
import json

import numpy as np
import pytest

from eacomm import qudit as qs
from eacomm.errors import LabelMismatch, OutOfRange, RegisterTooLarge, UnknownLabel, ValidationError, ZeroNorm

DIMS = [2, 3, 4, 5]


def gram(states):
    mat = np.array([s.amps for s in states])
    return mat.conj() @ mat.T


class TestStates:
    def test_basis_index(self):
        s = qs.basis_state(4, ["s1", "s2"], [3, 1])
        assert np.flatnonzero(s.amps).tolist() == [13]
        assert s.amps[13] == 1

    def test_basis_small(self):
        assert qs.basis_state(2, ["s"], [0]).amps.tolist() == [1, 0]
        assert qs.basis_state(3, ["s"], [2]).amps.tolist() == [0, 0, 1]

    def test_basis_out_of_range(self):
        with pytest.raises(OutOfRange):
            qs.basis_state(3, ["s"], [3])

    def test_max_entangled_q2(self):
        s = qs.max_entangled(2)
        assert np.allclose(s.amps, np.array([1, 0, 0, 1]) / np.sqrt(2), atol=1e-15)

    def test_max_entangled_q3(self):
        s = qs.max_entangled(3)
        assert np.allclose(s.amps[[0, 4, 8]], 1 / np.sqrt(3))
        assert np.count_nonzero(s.amps) == 3

    @pytest.mark.parametrize("q", DIMS)
    def test_max_entangled_schmidt(self, q):
        sv = np.linalg.svd(qs.max_entangled(q).amps.reshape(q, q), compute_uv=False)
        assert np.allclose(sv, 1 / np.sqrt(q), atol=1e-12)

    def test_register_guard(self):
        with pytest.raises(RegisterTooLarge):
            qs.basis_state(4, [f"x{i}" for i in range(12)], [0] * 12)
        assert qs.basis_state(2, [f"x{i}" for i in range(22)], [0] * 22).nqudits == 22

    def test_duplicate_labels(self):
        with pytest.raises(ValidationError):
            qs.basis_state(2, ["a", "a"], [0, 0])

    def test_zero_norm(self):
        with pytest.raises(ZeroNorm):
            qs.state_from_amplitudes(2, ["a"], [0, 0])

    def test_immutable(self):
        s = qs.basis_state(2, ["a"], [0])
        with pytest.raises(ValueError):
            s.amps[0] = 2

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            qs.apply_pauli(qs.basis_state(2, ["a"], [0]), "b", 1, 0)

    def test_json_round_trip(self, rng):
        s = qs.random_state(3, ["a", "b"], rng)
        doc = json.loads(json.dumps(s.to_json()))
        assert doc["labels"] == ["a", "b"]
        assert len(doc["amps"]) == 18
        back = qs.QuditState.from_json(doc)
        assert np.array_equal(back.amps, s.amps)

    def test_product_and_reorder(self):
        s = qs.product(qs.basis_state(3, ["a"], [1]), qs.basis_state(3, ["b"], [2]))
        assert s.labels == ("a", "b")
        assert np.flatnonzero(s.amps).tolist() == [5]
        r = qs.reorder(s, ["b", "a"])
        assert np.flatnonzero(r.amps).tolist() == [7]
        assert qs.fidelity(s, r) == 1.0


class TestPauli:
    def test_x_on_zero(self):
        s = qs.apply_pauli(qs.basis_state(2, ["s"], [0]), "s", 1, 0)
        assert s.amps.tolist() == [0, 1]

    def test_z_on_one(self):
        s = qs.apply_pauli(qs.basis_state(2, ["s"], [1]), "s", 0, 1)
        assert np.allclose(s.amps, [0, -1], atol=1e-15)

    def test_q3_xz_on_two(self):
        # Z first: |2> -> w^2 |2>, then X: -> w^2 |0>
        s = qs.apply_pauli(qs.basis_state(3, ["s"], [2]), "s", 1, 1)
        w = np.exp(2j * np.pi / 3)
        assert np.allclose(s.amps, [w**2, 0, 0], atol=1e-15)

    @pytest.mark.parametrize("q", DIMS)
    def test_order_q(self, q):
        eye = np.eye(q)
        X, Z = qs.pauli_matrix(q, 1, 0), qs.pauli_matrix(q, 0, 1)
        assert np.allclose(np.linalg.matrix_power(X, q), eye, atol=1e-12)
        assert np.allclose(np.linalg.matrix_power(Z, q), eye, atol=1e-12)

    @pytest.mark.parametrize("q", DIMS)
    def test_commutation_on_basis(self, q):
        w = qs.omega(q)
        for j in range(q):
            s = qs.basis_state(q, ["s"], [j])
            zx = qs.apply_pauli(qs.apply_pauli(s, "s", 1, 0), "s", 0, 1)
            xz = qs.apply_pauli(qs.apply_pauli(s, "s", 0, 1), "s", 1, 0)
            assert np.allclose(zx.amps, w * xz.amps, atol=1e-12)

    @pytest.mark.parametrize("q", DIMS)
    def test_matrix_matches_apply(self, q, rng):
        s = qs.random_state(q, ["a", "b"], rng)
        for a, b in itertools.product(range(q), repeat=2):
            via_matrix = qs.apply_unitary(s, "b", qs.pauli_matrix(q, a, b))
            direct = qs.apply_pauli(s, "b", a, b)
            assert np.allclose(via_matrix.amps, direct.amps, atol=1e-12)
            assert abs(direct.norm() - 1) < 1e-12

    def test_diagonal(self):
        s = qs.state_from_amplitudes(2, ["a"], [1, 1])
        t = qs.apply_diagonal(s, "a", [1, 1j])
        assert np.allclose(t.amps, np.array([1, 1j]) / np.sqrt(2))

    def test_unitary_shape_check(self):
        with pytest.raises(ValidationError):
            qs.apply_unitary(qs.basis_state(3, ["a"], [0]), "a", np.eye(2))


class TestBell:
    def test_first_is_phi(self):
        basis = qs.bell_basis(3)
        assert np.allclose(basis[0].amps, qs.max_entangled(3, ("A", "B")).amps)

    def test_q2_standard_states(self):
        r = 1 / np.sqrt(2)
        expected = [[r, 0, 0, r], [r, 0, 0, -r], [0, r, r, 0], [0, r, -r, 0]]  # (I x XZ)|Phi> = (|01> - |10>)/sqrt2
        for state, amps in zip(qs.bell_basis(2), expected):
            assert np.allclose(state.amps, amps, atol=1e-15)

    @pytest.mark.parametrize("q", DIMS)
    def test_gram_identity(self, q):
        g = gram(qs.bell_basis(q))
        assert np.max(np.abs(g - np.eye(q * q))) < 1e-12

    @pytest.mark.parametrize("q", DIMS)
    def test_measure_bell_state(self, q, rng):
        for idx, state in enumerate(qs.bell_basis(q)):
            probs = qs.bell_probabilities(state, ("A", "B"))
            assert abs(probs[divmod(idx, q)] - 1) < 1e-12
            outcome, rest = qs.bell_measure(state, ("A", "B"), rng)
            assert tuple(outcome) == divmod(idx, q)
            assert rest.labels == ()

    @pytest.mark.parametrize("q", DIMS)
    def test_teleport_input_uniform(self, q, rng):
        psi = qs.random_state(q, ["P"], rng)
        joint = qs.product(psi, qs.max_entangled(q, ("S", "R")))
        probs = qs.bell_probabilities(joint, ("P", "S"))
        assert np.allclose(probs, 1 / q**2, atol=1e-12)

    def test_product_zero_zero(self):
        probs = qs.bell_probabilities(qs.basis_state(2, ["A", "B"], [0, 0]), ("A", "B"))
        assert np.allclose(probs, [[0.5, 0.5], [0, 0]], atol=1e-15)

    def test_forced_zero_branch(self, rng):
        with pytest.raises(ZeroNorm):
            qs.bell_measure(qs.basis_state(2, ["A", "B"], [0, 0]), ("A", "B"), rng, outcome=(1, 0))

    @pytest.mark.parametrize("q", DIMS)
    def test_probabilities_sum_and_norm(self, q, rng):
        s = qs.random_state(q, ["a", "b", "c"], rng)
        assert abs(qs.bell_probabilities(s, ("c", "a")).sum() - 1) < 1e-12
        outcome, rest = qs.bell_measure(s, ("c", "a"), rng)
        assert rest.labels == ("b",)
        assert abs(rest.norm() - 1) < 1e-12

    @pytest.mark.parametrize("q", [2, 3])
    def test_transform_maps_bell_to_basis(self, q):
        for idx, state in enumerate(qs.bell_basis(q)):
            out = qs.bell_transform(state, ("A", "B"))
            assert abs(out.amps[idx] - 1) < 1e-12

    def test_transform_is_unitary(self, rng):
        s = qs.random_state(3, ["a", "b", "c"], rng)
        assert abs(qs.bell_transform(s, ("b", "c")).norm() - 1) < 1e-12


class TestMeasurement:
    def test_marginal(self):
        s = qs.state_from_amplitudes(2, ["a", "b"], [1, 0, 0, 1])
        assert np.allclose(qs.marginal_probabilities(s, "b"), [0.5, 0.5])

    def test_measure_collapses(self, rng):
        s = qs.max_entangled(3)
        outcome, rest = qs.measure(s, ["S"], rng)
        assert rest.labels == ("R",)
        assert abs(rest.amps[outcome[0]]) == pytest.approx(1)

    def test_project_symbol(self):
        s = qs.state_from_amplitudes(2, ["a"], [1, 1])
        prob, t = qs.project_symbol(s, "a", 1)
        assert prob == pytest.approx(0.5)
        assert np.allclose(t.amps, [0, 1])


class TestFidelity:
    def test_self(self, rng):
        s = qs.random_state(4, ["a"], rng)
        assert qs.fidelity(s, s) == pytest.approx(1, abs=1e-12)

    def test_orthogonal(self):
        assert qs.fidelity(qs.basis_state(2, ["a"], [0]), qs.basis_state(2, ["a"], [1])) == 0

    def test_global_phase(self, rng):
        s = qs.random_state(3, ["a"], rng)
        t = qs.state_from_amplitudes(3, ["a"], np.exp(0.7j) * s.amps, normalize=False)
        assert qs.fidelity(s, t) == pytest.approx(1, abs=1e-12)

    def test_label_mismatch(self):
        with pytest.raises(LabelMismatch):
            qs.fidelity(qs.basis_state(2, ["a"], [0]), qs.basis_state(2, ["b"], [0]))

    def test_reduced(self):
        joint = qs.product(qs.basis_state(2, ["a"], [1]), qs.max_entangled(2, ("x", "y")))
        assert qs.reduced_fidelity(joint, qs.basis_state(2, ["a"], [1])) == pytest.approx(1)
        # half of a Bell pair is maximally mixed
        assert qs.reduced_fidelity(joint, qs.basis_state(2, ["x"], [0])) == pytest.approx(0.5)

    @pytest.mark.parametrize("q", DIMS)
    def test_haar_unitary(self, q, rng):
        u = qs.haar_unitary(q, rng)
        assert np.allclose(u.conj().T @ u, np.eye(q), atol=1e-12)
