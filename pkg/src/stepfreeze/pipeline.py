"""Per-event orchestration of the six-step method, sensitivity sweeps over
box sizes and windows, multi-event count merging, and cohort tables."""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import classes as classes_mod
from . import escape as escape_mod
from . import markov
from .errors import (
    DecompositionFailure,
    EmptyAbsorbingSet,
    NoSuccessfulRecords,
    StepfreezeError,
)
from .grid import PolarGrid
from .signal import TimeSeries, hilbert_embed, power_spectrum

SCHEMA_VERSION = 1

#: Appendix-style default sensitivity grids.
DEFAULT_P_VALUES = [0.05, 0.1, 0.15, 0.2]
DEFAULT_Q_VALUES = [3.0, 5.0, 10.0, 15.0, 20.0, 30.0]


@dataclass(frozen=True)
class EventSpec:
    """One expert-labeled transition interval within a record."""

    subject: str
    dataset: str
    t_start: int
    t_end: int
    label: str = ""

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ValueError("t_end must exceed t_start")

    @property
    def window(self) -> tuple[int, int]:
        return (self.t_start, self.t_end)


@dataclass(frozen=True)
class SweepSpec:
    """Grid of box sizes and window variants for the sensitivity sweep."""

    p_values: list[float] = field(default_factory=lambda: list(DEFAULT_P_VALUES))
    q_values: list[float] = field(default_factory=lambda: list(DEFAULT_Q_VALUES))
    interval_variants: list[tuple[int, int]] | None = None

    def __post_init__(self):
        for p in self.p_values:
            if not 0 < p <= 1:
                raise ValueError(f"p value {p} outside (0, 1]")
        for q in self.q_values:
            if abs(round(360.0 / q) * q - 360.0) > 1e-9:
                warnings.warn(f"q = {q} does not divide 360 exactly",
                              stacklevel=2)


@dataclass
class AnalysisRecord:
    """Outcome of one analysis cell; failures are statuses, not exceptions."""

    event: EventSpec
    p: float
    q: float
    status: str
    message: str = ""
    escape: escape_mod.EscapeReport | None = None
    decomposition: dict | None = None
    model: markov.TransitionModel | None = None
    f_count: int = 0
    n_emp: int = 0
    stepping_fraction: float = 0.0
    psi_tr: float | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_json_dict(self, include_model: bool = False) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "event": {
                "subject": self.event.subject,
                "dataset": self.event.dataset,
                "t_start": self.event.t_start,
                "t_end": self.event.t_end,
                "label": self.event.label,
            },
            "grid": {"p": self.p, "q": self.q},
            "status": self.status,
            "message": self.message,
            "n_emp": self.n_emp,
            "f_count": self.f_count,
            "stepping_fraction": self.stepping_fraction,
            "psi_tr_deg": self.psi_tr,
            "decomposition": self.decomposition,
            "escape": None,
        }
        if self.escape is not None and self.model is not None:
            f_boxes = np.array(self.decomposition["F"])
            out["escape"] = self.escape.to_json_dict(f_boxes)
        if include_model and self.model is not None:
            out["model"] = self.model.to_json_dict()
        return out


def oscillation_advisory(ts: TimeSeries, event: EventSpec) -> float:
    """Warn when the window holds fewer than ~4 stepping oscillations.

    Returns the estimated oscillation count.
    """
    window_ts = TimeSeries(
        samples=ts.samples[event.t_start : event.t_end + 1], dt=ts.dt
    )
    f_dom = power_spectrum(window_ts).dominant_frequency
    n_osc = (event.t_end - event.t_start) * ts.dt * f_dom
    if n_osc < 2:
        warnings.warn(
            f"window contains only ~{n_osc:.1f} oscillations; the state "
            "space is unlikely to split into classes", stacklevel=2)
    elif n_osc < 4:
        warnings.warn(
            f"window contains ~{n_osc:.1f} oscillations; at least 4 are "
            "recommended for a robust phase estimate", stacklevel=2)
    return n_osc


def _analyze_model(
    model: markov.TransitionModel,
    emb_windows: list,
    event: EventSpec,
    p: float,
    q: float,
    dt: float,
) -> AnalysisRecord:
    """Shared tail of analyze/merge: classes, split, escape report."""
    record = AnalysisRecord(event=event, p=p, q=q, status="ok",
                            n_emp=model.n_emp)
    try:
        dec = classes_mod.decompose(model)
    except DecompositionFailure as exc:
        record.status = "DecompositionFailure"
        record.message = str(exc)
        return record
    except EmptyAbsorbingSet as exc:
        record.status = "EmptyAbsorbingSet"
        record.message = str(exc)
        return record

    A = model.A
    A_F = A[np.ix_(dec.F, dec.F)]
    f_boxes = model.states[dec.F]
    try:
        report = escape_mod.escape_report(A_F, model.grid, f_boxes, dt)
    except StepfreezeError as exc:
        record.status = type(exc).__name__
        record.message = str(exc)
        return record

    f_count = 0
    for emb, window in emb_windows:
        f_count += int(np.sum(classes_mod.label_samples(dec, model, emb, window)))
    step_states = dec.classes[dec.stepping_class_id]
    record.escape = report
    record.model = model
    record.decomposition = classes_mod.to_json_dict(dec, model)
    record.f_count = f_count
    record.stepping_fraction = step_states.size / model.states.size
    record.psi_tr = dec.psi_tr
    return record


def analyze_event(
    ts: TimeSeries, event: EventSpec, p: float, q: float
) -> AnalysisRecord:
    """Run the full method on one transition interval.

    Embed the window, subdivide the disk, estimate the chain, decompose it
    and compute the escape report.  Expected failures are captured in the
    record status so batch runs never abort.
    """
    try:
        emb = hilbert_embed(ts.samples, event.window, dt=ts.dt)
        grid = PolarGrid.from_box_sizes(p, q)
        window = (0, len(emb) - 1)
        model = markov.estimate(grid, emb, window)
    except StepfreezeError as exc:
        return AnalysisRecord(event=event, p=p, q=q,
                              status=type(exc).__name__, message=str(exc))
    return _analyze_model(model, [(emb, window)], event, p, q, ts.dt)


def merge_events(
    ts_list: list[TimeSeries],
    events: list[EventSpec],
    p: float,
    q: float,
) -> AnalysisRecord:
    """Analyze several events as one chain by summing their box counts
    before normalization.  A single-event merge equals analyze_event."""
    if not events:
        raise ValueError("need at least one event")
    if len(ts_list) != len(events):
        raise ValueError("ts_list and events must align")
    grid = PolarGrid.from_box_sizes(p, q)
    total = None
    emb_windows = []
    merged_event = EventSpec(
        subject=events[0].subject,
        dataset=",".join(dict.fromkeys(ev.dataset for ev in events)),
        t_start=events[0].t_start,
        t_end=events[0].t_end,
        label="merged" if len(events) > 1 else events[0].label,
    )
    try:
        for ts, ev in zip(ts_list, events):
            emb = hilbert_embed(ts.samples, ev.window, dt=ts.dt)
            window = (0, len(emb) - 1)
            counts = markov.count_transitions(grid, emb, window)
            total = counts if total is None else total + counts
            emb_windows.append((emb, window))
        model = markov.transition_matrix(grid, total)
    except StepfreezeError as exc:
        return AnalysisRecord(event=merged_event, p=p, q=q,
                              status=type(exc).__name__, message=str(exc))
    return _analyze_model(model, emb_windows, merged_event, p, q,
                          ts_list[0].dt)


def sweep(
    ts: TimeSeries, event: EventSpec, spec: SweepSpec
) -> list[AnalysisRecord]:
    """One record per (p, q, interval) cell, computed on a thread pool
    sized by the STEPFREEZE_WORKERS environment variable."""
    intervals = spec.interval_variants or [event.window]
    cells = [
        (p, q, iv)
        for iv in intervals
        for p in spec.p_values
        for q in spec.q_values
    ]
    if not cells:
        raise ValueError("empty sweep specification")

    def run(cell):
        p, q, (t0, t1) = cell
        ev = EventSpec(subject=event.subject, dataset=event.dataset,
                       t_start=t0, t_end=t1, label=event.label)
        return analyze_event(ts, ev, p, q)

    workers = int(os.environ.get("STEPFREEZE_WORKERS", "0")) or None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, cells))


def circular_mean_deg(phases_deg) -> float:
    """Circular mean of angles in degrees, in [0, 360)."""
    rad = np.deg2rad(np.asarray(phases_deg, dtype=float))
    mean = math.atan2(np.mean(np.sin(rad)), np.mean(np.cos(rad)))
    deg = math.degrees(mean) % 360.0
    return 0.0 if deg >= 360.0 else deg


def circular_std_deg(phases_deg) -> float:
    """Circular standard deviation sqrt(-2 ln Rbar) in degrees."""
    rad = np.deg2rad(np.asarray(phases_deg, dtype=float))
    rbar = float(np.hypot(np.mean(np.sin(rad)), np.mean(np.cos(rad))))
    if rbar <= 0:
        return float("inf")
    rbar = min(rbar, 1.0)
    return math.degrees(math.sqrt(max(0.0, -2.0 * math.log(rbar))))


def rayleigh_p_value(phases_deg) -> float:
    """Rayleigh uniformity test p-value (goes beyond the source analysis;
    reported as an optional extra in the cohort table)."""
    rad = np.deg2rad(np.asarray(phases_deg, dtype=float))
    n = rad.size
    rbar = float(np.hypot(np.mean(np.sin(rad)), np.mean(np.cos(rad))))
    z = n * rbar * rbar
    p = math.exp(-z) * (1.0 + (2.0 * z - z * z) / (4.0 * n)
                        - (24.0 * z - 132.0 * z**2 + 76.0 * z**3 - 9.0 * z**4)
                        / (288.0 * n * n))
    return min(max(p, 0.0), 1.0)


def cohort_summary(records: list[AnalysisRecord]) -> dict:
    """Per-subject table of preferred phases with circular statistics.

    Raises
    ------
    NoSuccessfulRecords
        No record has status ok.
    """
    ok = [r for r in records if r.ok]
    if not ok:
        raise NoSuccessfulRecords("no successful analysis records")
    rows = []
    for r in records:
        rows.append({
            "subject": r.event.subject,
            "dataset": r.event.dataset,
            "label": r.event.label,
            "status": r.status,
            "psi_min_deg": None if r.escape is None else r.escape.psi_min,
            "met_F_seconds": None if r.escape is None else r.escape.met_F,
            "mix_F_seconds": None if r.escape is None else r.escape.mix_F,
        })
    per_subject = {}
    for r in ok:
        per_subject.setdefault(r.event.subject, []).append(r.escape.psi_min)
    subjects = {
        subject: {
            "n_events": len(phases),
            "circular_mean_deg": circular_mean_deg(phases),
            "circular_std_deg": circular_std_deg(phases),
            "rayleigh_p": rayleigh_p_value(phases),
        }
        for subject, phases in sorted(per_subject.items())
    }
    return {"schema_version": SCHEMA_VERSION, "rows": rows,
            "subjects": subjects}
