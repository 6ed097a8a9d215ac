"""Detection, timing and phase location of transitions from oscillatory
stepping into freezing in scalar force time series, via Hilbert embedding,
polar-grid Markov chains and mean escape times."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .grid import PolarGrid
from .pipeline import (
    AnalysisRecord,
    EventSpec,
    SweepSpec,
    analyze_event,
    cohort_summary,
    merge_events,
    sweep,
)
from .signal import TimeSeries

__all__ = [
    "KERNEL_BACKEND",
    "PolarGrid",
    "AnalysisRecord",
    "EventSpec",
    "SweepSpec",
    "analyze_event",
    "cohort_summary",
    "merge_events",
    "sweep",
    "TimeSeries",
]

__version__ = "0.1.0"
