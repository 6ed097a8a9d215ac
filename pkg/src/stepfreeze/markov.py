"""Empirical Markov chain on the polar grid: transition counts,
row-stochastic transition matrix on the empirical support, and surrogate
time series."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from . import _kernels
from .errors import EmptySupport, StartNotInSupport, WindowTooShort
from .grid import PolarGrid, ind_array
from .signal import EmbeddedSignal


@dataclass(frozen=True)
class TransitionModel:
    """Row-stochastic chain restricted to the boxes the trajectory visits.

    Attributes
    ----------
    grid : PolarGrid
        Subdivision the counts were taken on.
    counts : scipy.sparse.csr_matrix
        Transition counts CT on the full P*Q state space.
    support : ndarray
        Ascending box indices with positive row sums (J_emp).
    states : ndarray
        Ascending box indices of the working state space: the support plus
        any box that is only ever a transition target (the trajectory ends
        there).  Such dangling states get a probability-1 self-loop so A
        stays row-stochastic.
    A : ndarray
        Dense row-stochastic matrix over ``states``.
    """

    grid: PolarGrid
    counts: sparse.csr_matrix
    support: np.ndarray
    states: np.ndarray
    A: np.ndarray

    @property
    def n_emp(self) -> int:
        return self.support.size

    def state_position(self, box_index: int) -> int:
        """0-based position of a box index within ``states``."""
        pos = int(np.searchsorted(self.states, box_index))
        if pos >= self.states.size or self.states[pos] != box_index:
            raise StartNotInSupport(f"box {box_index} not in state space")
        return pos

    def to_json_dict(self) -> dict:
        coo = self.counts.tocoo()
        return {
            "grid": {"P": self.grid.P, "Q": self.grid.Q},
            "support": [int(i) for i in self.support],
            "counts": [
                [int(i) + 1, int(j) + 1, int(c)]
                for i, j, c in zip(coo.row, coo.col, coo.data)
            ],
        }


def count_transitions(
    grid: PolarGrid, emb: EmbeddedSignal, window: tuple[int, int]
) -> sparse.csr_matrix:
    """Count one-step box transitions of the embedded trajectory.

    ``CT[i-1, j-1]`` is the number of times ``t`` in
    ``[window[0], window[1] - 1]`` with the trajectory in box ``i`` at ``t``
    and box ``j`` at ``t + 1``; the total mass is the window length minus 1.

    Raises
    ------
    WindowTooShort
        Fewer than 2 samples in the window.
    """
    t0, t1 = window
    if t0 < 0 or t1 >= len(emb):
        raise WindowTooShort(f"window [{t0}, {t1}] outside embedding")
    if t1 - t0 < 1:
        raise WindowTooShort("need at least 2 samples to count a transition")
    idx = ind_array(grid, emb.values[t0 : t1 + 1]) - 1
    n = grid.n_boxes
    data = np.ones(idx.size - 1, dtype=np.int64)
    ct = sparse.coo_matrix((data, (idx[:-1], idx[1:])), shape=(n, n))
    return ct.tocsr()


def transition_matrix(grid: PolarGrid, counts: sparse.csr_matrix) -> TransitionModel:
    """Row-normalize the counts on the empirical support.

    Boxes that only appear as targets are kept as absorbing states with a
    self-loop, which preserves row-stochasticity.

    Raises
    ------
    EmptySupport
        No row has positive mass.
    """
    counts = counts.tocsr()
    row_sums = np.asarray(counts.sum(axis=1)).ravel()
    col_sums = np.asarray(counts.sum(axis=0)).ravel()
    support0 = np.flatnonzero(row_sums > 0)
    if support0.size == 0:
        raise EmptySupport("no transitions counted")
    states0 = np.union1d(support0, np.flatnonzero(col_sums > 0))
    sub = counts[states0][:, states0].toarray().astype(float)
    rs = sub.sum(axis=1)
    A = np.zeros_like(sub)
    visited = rs > 0
    A[visited] = sub[visited] / rs[visited, None]
    # dangling rows become self-loops
    for k in np.flatnonzero(~visited):
        A[k, k] = 1.0
    return TransitionModel(
        grid=grid,
        counts=counts,
        support=support0 + 1,
        states=states0 + 1,
        A=A,
    )


def estimate(
    grid: PolarGrid, emb: EmbeddedSignal, window: tuple[int, int]
) -> TransitionModel:
    """Convenience: counts followed by row normalization."""
    return transition_matrix(grid, count_transitions(grid, emb, window))


def surrogate(
    model: TransitionModel, start: int, steps: int, seed: int
) -> np.ndarray:
    """Sample a box-index sequence of length ``steps + 1`` from the chain.

    Successive states are drawn from the row distribution of the current
    state using a PCG64 generator, so runs are reproducible given
    ``(seed, model)``.

    Raises
    ------
    StartNotInSupport
        ``start`` is not a visited box.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    pos = model.state_position(start)
    cum = np.cumsum(model.A, axis=1)
    cum = np.ascontiguousarray(cum)
    u = np.random.default_rng(seed).random(steps)
    walk = _kernels.surrogate_walk(cum, pos, u)
    return model.states[walk]
