"""Decomposition of the empirical chain into communicating classes and the
split into transition set F (stepping plus anything feeding it) and
absorbing set E (anything the stepping class leaks into)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DecompositionFailure, EmptyAbsorbingSet
from .grid import box_center, box_center_phase_deg
from .markov import TransitionModel
from .signal import EmbeddedSignal


@dataclass
class ClassDecomposition:
    """Communicating classes of a chain over ``model.states`` positions.

    All state sets hold 0-based positions into the model's ``states``
    vector; ``order`` holds class-id pairs (a, b) meaning class b is
    reachable from class a (one-way).
    """

    classes: list[np.ndarray]
    class_of: np.ndarray
    order: set[tuple[int, int]]
    stepping_class_id: int | None = None
    F: np.ndarray | None = None
    E: np.ndarray | None = None
    entry_states: np.ndarray | None = None
    X_tr: complex | list[complex] | None = None
    psi_tr: float | None = None
    stepping_has_self_loop: bool = True

    @property
    def n_classes(self) -> int:
        return len(self.classes)


def reachability(A: np.ndarray) -> np.ndarray:
    """Boolean matrix of directed reachability with paths of length >= 1.

    Computed by condensing onto strongly connected components and closing
    the component DAG, so a state reaches itself only when it sits on a
    cycle (or has a self-loop).
    """
    labels, R = _component_reachability(A)
    return R[np.ix_(labels, labels)]


def _component_reachability(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(SCC labels, component-level closed reachability).

    An internal edge marks a component as cyclic, which is what gives the
    path-length >= 1 semantics on the diagonal.
    """
    Z = np.asarray(A) > 0
    labels_n, labels = connected_components(
        csr_matrix(Z), directed=True, connection="strong"
    )
    C = np.zeros((labels_n, labels_n), dtype=bool)
    src, dst = np.nonzero(Z)
    C[labels[src], labels[dst]] = True
    R = C.copy()
    while True:
        R_next = R | (R @ R)
        if np.array_equal(R_next, R):
            break
        R = R_next
    return labels, R


def communicating_classes(A: np.ndarray) -> ClassDecomposition:
    """Equivalence classes of mutual reachability plus their partial order.

    Every state communicates with itself by convention, so isolated states
    form singleton classes.
    """
    labels, R = _component_reachability(A)
    n_cc = R.shape[0]
    classes = [np.flatnonzero(labels == k) for k in range(n_cc)]
    order = {
        (a, b)
        for a in range(n_cc)
        for b in range(n_cc)
        if a != b and R[a, b]
    }
    return ClassDecomposition(classes=classes, class_of=labels, order=order)


def split_F_E(dec: ClassDecomposition, model: TransitionModel) -> ClassDecomposition:
    """Complete the decomposition: stepping class, F/E split, entry states.

    The stepping class is the class of maximal cardinality.  Classes that
    reach it join the transition set F; classes it reaches form the
    absorbing set E.

    Raises
    ------
    DecompositionFailure
        Two classes tie for maximal cardinality, or some class is
        incomparable to the stepping class.
    EmptyAbsorbingSet
        Nothing is reachable from the stepping class (the window never
        reaches freezing).
    """
    A = model.A
    sizes = np.array([c.size for c in dec.classes])
    largest = int(np.max(sizes))
    candidates = np.flatnonzero(sizes == largest)
    if candidates.size > 1:
        raise DecompositionFailure(
            f"classes {candidates.tolist()} tie for maximal size {largest}"
        )
    k_step = int(candidates[0])

    f_classes, e_classes = [], []
    for k in range(dec.n_classes):
        if k == k_step:
            continue
        to_step = (k, k_step) in dec.order
        from_step = (k_step, k) in dec.order
        if to_step and not from_step:
            f_classes.append(k)
        elif from_step and not to_step:
            e_classes.append(k)
        else:
            raise DecompositionFailure(
                f"class {k} is incomparable to the stepping class {k_step}"
            )
    if not e_classes:
        raise EmptyAbsorbingSet("no class reachable from the stepping class")

    F = np.sort(np.concatenate([dec.classes[k_step]]
                               + [dec.classes[k] for k in f_classes]))
    E = np.sort(np.concatenate([dec.classes[k] for k in e_classes]))

    inbound = A[np.ix_(F, E)]
    entry_mask = inbound.sum(axis=0) > 0
    entry = E[entry_mask]

    grid = model.grid
    entry_boxes = model.states[entry]
    if entry.size == 1:
        X_tr = box_center(grid, int(entry_boxes[0]))
        psi_tr = box_center_phase_deg(grid, int(entry_boxes[0]))
    elif entry.size > 1:
        X_tr = [box_center(grid, int(b)) for b in entry_boxes]
        best = int(np.argmax(inbound[:, entry_mask].sum(axis=0)))
        psi_tr = box_center_phase_deg(grid, int(entry_boxes[best]))
    else:
        X_tr, psi_tr = None, None

    step_states = dec.classes[k_step]
    has_loop = bool(np.any(np.diag(A)[step_states] > 0))
    if not has_loop:
        warnings.warn(
            "no stepping-class state has a self-loop; the chain may not be "
            "aperiodic (boxes may be too small for the sampling step)",
            stacklevel=2,
        )

    dec.stepping_class_id = k_step
    dec.F = F
    dec.E = E
    dec.entry_states = entry
    dec.X_tr = X_tr
    dec.psi_tr = psi_tr
    dec.stepping_has_self_loop = has_loop
    return dec


def decompose(model: TransitionModel) -> ClassDecomposition:
    """Classes plus F/E split in one call."""
    return split_F_E(communicating_classes(model.A), model)


def label_samples(
    dec: ClassDecomposition,
    model: TransitionModel,
    emb: EmbeddedSignal,
    window: tuple[int, int],
) -> np.ndarray:
    """Tag each sample of the window True when its box lies in F.

    The F-count times dt is the empirical transition time of the window.
    """
    from .grid import ind_array

    t0, t1 = window
    boxes = ind_array(model.grid, emb.values[t0 : t1 + 1])
    f_boxes = set(model.states[dec.F].tolist())
    return np.fromiter((b in f_boxes for b in boxes.tolist()),
                       dtype=bool, count=boxes.size)


def to_json_dict(dec: ClassDecomposition, model: TransitionModel) -> dict:
    """Serializable view with 1-based box indices and polar entry coords."""
    states = model.states
    out = {
        "classes": [[int(b) for b in states[c]] for c in dec.classes],
        "order": sorted([list(p) for p in dec.order]),
        "stepping_class_id": dec.stepping_class_id,
    }
    if dec.F is not None:
        out["F"] = [int(b) for b in states[dec.F]]
        out["E"] = [int(b) for b in states[dec.E]]
        entries = []
        for pos in dec.entry_states:
            b = int(states[pos])
            c = box_center(model.grid, b)
            entries.append({
                "box": b,
                "R": abs(c),
                "psi_deg": box_center_phase_deg(model.grid, b),
            })
        out["entry_states"] = entries
        out["psi_tr_deg"] = dec.psi_tr
    return out
