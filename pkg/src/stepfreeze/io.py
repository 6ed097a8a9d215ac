"""CSV record loading and annotation-file parsing."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .signal import TimeSeries


def load_timeseries(
    path,
    dt: float | None = None,
    subject_id: str = "",
    dataset_id: str = "",
) -> TimeSeries:
    """Load a force record from CSV.

    Accepts either a ``t,force`` file (dt inferred from the first two time
    stamps) or a single ``force`` column with ``dt`` supplied explicitly.
    A header row is required.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip().lower() for h in next(reader)]
        rows = [r for r in reader if r and any(c.strip() for c in r)]
    if header == ["t", "force"]:
        t = np.array([float(r[0]) for r in rows])
        force = np.array([float(r[1]) for r in rows])
        if dt is None:
            if t.size < 2:
                raise ValueError("need at least 2 samples to infer dt")
            dt = float(t[1] - t[0])
    elif header == ["force"]:
        if dt is None:
            raise ValueError("single-column CSV requires dt")
        force = np.array([float(r[0]) for r in rows])
    else:
        raise ValueError(f"unrecognized CSV header {header!r}; "
                         "expected 't,force' or 'force'")
    return TimeSeries(samples=force, dt=dt, subject_id=subject_id,
                      dataset_id=dataset_id)


def load_annotations(path) -> list[dict]:
    """Parse an annotation file: a JSON list of events with keys
    ``subject``, ``dataset``, ``t_start``, ``t_end`` (integer sample
    indices) and an optional ``label``."""
    with open(path) as fh:
        events = json.load(fh)
    if not isinstance(events, list):
        raise ValueError("annotation file must contain a JSON list")
    for ev in events:
        for key in ("subject", "dataset", "t_start", "t_end"):
            if key not in ev:
                raise ValueError(f"event missing key {key!r}: {ev}")
        if ev["t_end"] <= ev["t_start"]:
            raise ValueError(f"event has t_end <= t_start: {ev}")
    return events
