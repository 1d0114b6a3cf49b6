import numpy as np
import pytest

from partel.bell_projection import (
    ConditionalMap,
    apply_conditional,
    build_projector,
    check_pair_action,
    failure_complement,
)
from partel.hilbert import basis_state, expectation, haar_random_qubit, singlet, tensor

from oracles import p_success

R_GRID = [0.0, 0.1, 1 / 3, 0.5]


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / abs(np.diag(r)))


def test_zero_reflectivity_is_identity():
    np.testing.assert_array_equal(build_projector(0).matrix, np.eye(4))


def test_half_reflectivity_is_singlet_projector():
    s = singlet().amplitudes
    np.testing.assert_allclose(build_projector(0.5).matrix, np.outer(s, s.conj()), atol=1e-15)


def test_symmetric_point_spectrum():
    # eigenvalues from numerical diagonalization, sorted ascending
    ev = np.linalg.eigvalsh(build_projector(1 / 3).matrix)
    np.testing.assert_allclose(ev, [1 / 3, 1 / 3, 1 / 3, 1], atol=1e-12)


@pytest.mark.parametrize("r", np.linspace(0, 0.5, 11))
def test_hermitian_with_singlet_eigenvalue_one(r):
    m = build_projector(r).matrix
    np.testing.assert_allclose(m, m.conj().T)
    np.testing.assert_allclose(np.linalg.eigvalsh(m), [1 - 2 * r] * 3 + [1], atol=1e-12)
    s = singlet().amplitudes
    np.testing.assert_allclose(m @ s, s, atol=1e-15)


@pytest.mark.parametrize("bad", [-1e-3, 0.5001, float("nan"), 2])
def test_domain(bad):
    with pytest.raises(ValueError, match="reflectivity"):
        build_projector(bad)


def test_pair_action_on_V():
    pi = build_projector(1 / 3).matrix
    vv, vh, hv = (basis_state(b).amplitudes for b in ("00", "01", "10"))
    np.testing.assert_allclose(pi @ vv, vv / 3, atol=1e-15)
    np.testing.assert_allclose(pi @ vh, 2 / 3 * vh - 1 / 3 * hv, atol=1e-15)


@pytest.mark.parametrize("r", R_GRID)
def test_pair_action_haar(r, haar_states):
    assert all(check_pair_action(r, psi) for psi in haar_states)


def test_twirl_invariance():
    rng = np.random.default_rng(11)
    for r in (0.1, 0.25, 1 / 3, 0.45):
        m = build_projector(r).matrix
        for _ in range(50):
            u = random_unitary(rng)
            uu = np.kron(u, u)
            assert np.linalg.norm(uu @ m @ uu.conj().T - m) < 1e-10


class TestApplyConditional:
    @pytest.mark.parametrize("r", np.linspace(0, 0.5, 21))
    def test_probability_matches_closed_form(self, r):
        state = tensor(haar_random_qubit(5), singlet())
        _, p = apply_conditional(state, (0, 1), r)
        assert p == pytest.approx(p_success(r), abs=1e-12)

    def test_symmetric_point(self):
        _, p = apply_conditional(tensor(haar_random_qubit(5), singlet()), (0, 1), 1 / 3)
        assert p == pytest.approx(1 / 3, abs=1e-12)

    def test_half(self):
        _, p = apply_conditional(tensor(haar_random_qubit(5), singlet()), (0, 1), 0.5)
        assert p == pytest.approx(0.25, abs=1e-12)

    def test_zero_reflectivity_keeps_state(self):
        state = tensor(haar_random_qubit(5), singlet())
        branch, p = apply_conditional(state, (0, 1), 0.0)
        assert p == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(branch.amplitudes, state.amplitudes)

    @pytest.mark.parametrize("r", R_GRID)
    def test_singlet_on_pair_always_passes(self, r):
        state = tensor(singlet(), haar_random_qubit(2))
        _, p = apply_conditional(state, (0, 1), r)
        assert p == pytest.approx(1.0, abs=1e-12)

    def test_probability_is_state_independent(self, haar_states):
        ps = [apply_conditional(tensor(psi, singlet()), (0, 1), 0.27)[1] for psi in haar_states]
        assert max(ps) - min(ps) < 1e-10

    def test_invalid_pair(self):
        with pytest.raises(ValueError):
            apply_conditional(tensor(haar_random_qubit(5), singlet()), (0, 5), 0.2)


class TestFailure:
    def test_zero(self):
        np.testing.assert_allclose(failure_complement(0).matrix, 0, atol=1e-15)

    def test_triplet_projector(self):
        s = singlet().amplitudes
        np.testing.assert_allclose(
            failure_complement(0.5).matrix, np.eye(4) - np.outer(s, s.conj()), atol=1e-15
        )

    @pytest.mark.parametrize("r", [0.1, 1 / 3, 0.5])
    def test_completeness(self, r):
        state = tensor(haar_random_qubit(9), singlet())
        _, p_ok = apply_conditional(state, (0, 1), r)
        p_fail = expectation(state, failure_complement(r), (0, 1))
        assert p_ok + p_fail == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(failure_complement(r).matrix).min() > -1e-12


def test_conditional_map_rejects_amplifying_operator():
    with pytest.raises(ValueError, match="norm"):
        ConditionalMap(2 * np.eye(4))
