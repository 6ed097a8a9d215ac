import numpy as np
import pytest
from scipy import sparse

from stepfreeze.errors import EmptySupport, StartNotInSupport, WindowTooShort
from stepfreeze.grid import PolarGrid, box_center
from stepfreeze.markov import (
    TransitionModel,
    count_transitions,
    surrogate,
    transition_matrix,
)
from stepfreeze.signal import EmbeddedSignal


def embed_from_values(values, dt=0.01):
    values = np.asarray(values, dtype=complex)
    return EmbeddedSignal(
        values=values,
        amplitude=np.abs(values),
        phase=np.mod(np.angle(values), 2 * np.pi),
        dt=dt,
    )


def model_from_matrix(A, grid=None):
    """Wrap an explicit row-stochastic matrix as a TransitionModel."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    grid = grid or PolarGrid(1, max(n, 1))
    states = np.arange(1, n + 1)
    return TransitionModel(
        grid=grid,
        counts=sparse.csr_matrix((grid.n_boxes, grid.n_boxes), dtype=np.int64),
        support=states,
        states=states,
        A=A,
    )


class TestCountTransitions:
    def test_constant_trajectory_self_transitions(self):
        g = PolarGrid(2, 6)
        c = box_center(g, 5)
        emb = embed_from_values([c] * 10)
        ct = count_transitions(g, emb, (0, 9))
        assert ct[4, 4] == 9
        assert ct.sum() == 9

    def test_alternating_trajectory(self):
        g = PolarGrid(2, 6)
        a, b = box_center(g, 1), box_center(g, 4)
        emb = embed_from_values([a, b, a, b])
        ct = count_transitions(g, emb, (0, 3))
        assert ct[0, 3] == 2
        assert ct[3, 0] == 1
        assert ct.sum() == 3

    def test_count_conservation(self):
        rng = np.random.default_rng(9)
        z = 0.9 * np.exp(1j * rng.uniform(0, 2 * np.pi, 500)) * rng.uniform(
            0.1, 1.0, 500)
        emb = embed_from_values(z)
        g = PolarGrid(10, 72)
        ct = count_transitions(g, emb, (20, 400))
        assert ct.sum() == 380

    def test_window_too_short(self):
        g = PolarGrid(2, 6)
        emb = embed_from_values([box_center(g, 1)] * 5)
        with pytest.raises(WindowTooShort):
            count_transitions(g, emb, (2, 2))
        with pytest.raises(WindowTooShort):
            count_transitions(g, emb, (0, 5))


class TestTransitionMatrix:
    def test_dangling_target_becomes_self_loop(self):
        g = PolarGrid(1, 2)
        ct = sparse.csr_matrix(np.array([[3, 1], [0, 0]]))
        model = transition_matrix(g, ct)
        np.testing.assert_array_equal(model.support, [1])
        np.testing.assert_array_equal(model.states, [1, 2])
        np.testing.assert_allclose(model.A, [[0.75, 0.25], [0.0, 1.0]])

    def test_diagonal_counts_give_identity(self):
        g = PolarGrid(1, 4)
        ct = sparse.csr_matrix(np.diag([5, 0, 2, 0]))
        model = transition_matrix(g, ct)
        np.testing.assert_array_equal(model.states, [1, 3])
        np.testing.assert_allclose(model.A, np.eye(2))

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(17)
        ct = sparse.csr_matrix(rng.integers(0, 5, size=(12, 12)))
        model = transition_matrix(PolarGrid(2, 6), ct)
        np.testing.assert_allclose(model.A.sum(axis=1), 1.0, atol=1e-12)

    def test_empty_support(self):
        with pytest.raises(EmptySupport):
            transition_matrix(PolarGrid(1, 3),
                              sparse.csr_matrix((3, 3), dtype=np.int64))

    def test_json_round_trip_fields(self):
        g = PolarGrid(1, 2)
        ct = sparse.csr_matrix(np.array([[3, 1], [2, 0]]))
        d = transition_matrix(g, ct).to_json_dict()
        assert d["grid"] == {"P": 1, "Q": 2}
        assert d["support"] == [1, 2]
        assert sorted(d["counts"]) == [[1, 1, 3], [1, 2, 1], [2, 1, 2]]


class TestSurrogate:
    def test_identity_chain_stays_put(self):
        model = model_from_matrix(np.eye(3))
        walk = surrogate(model, start=2, steps=5, seed=0)
        np.testing.assert_array_equal(walk, [2] * 6)

    def test_deterministic_alternation(self):
        model = model_from_matrix([[0, 1], [1, 0]])
        walk = surrogate(model, start=1, steps=3, seed=4)
        np.testing.assert_array_equal(walk, [1, 2, 1, 2])

    def test_seed_reproducibility(self):
        rng = np.random.default_rng(0)
        A = rng.dirichlet(np.ones(4), size=4)
        model = model_from_matrix(A)
        w1 = surrogate(model, 1, 200, seed=99)
        w2 = surrogate(model, 1, 200, seed=99)
        np.testing.assert_array_equal(w1, w2)
        assert not np.array_equal(w1, surrogate(model, 1, 200, seed=100))

    def test_start_not_in_support(self):
        model = model_from_matrix(np.eye(2))
        with pytest.raises(StartNotInSupport):
            surrogate(model, start=5, steps=3, seed=0)

    def test_walk_stays_in_state_space(self):
        rng = np.random.default_rng(1)
        A = rng.dirichlet(np.ones(5), size=5)
        model = model_from_matrix(A)
        walk = surrogate(model, 3, 1000, seed=5)
        assert set(walk.tolist()) <= set(model.states.tolist())

    def test_reestimation_converges(self):
        # long-surrogate frequencies converge to the generating matrix
        rng = np.random.default_rng(2)
        A = rng.dirichlet(np.ones(6) * 2, size=6)
        model = model_from_matrix(A)
        walk = surrogate(model, 1, 1_000_000, seed=11)
        pos = walk - 1
        counts = np.zeros((6, 6))
        np.add.at(counts, (pos[:-1], pos[1:]), 1)
        est = counts / counts.sum(axis=1, keepdims=True)
        assert np.max(np.abs(est - A)) < 0.05
