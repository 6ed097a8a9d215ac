"""Exception hierarchy shared by all analysis modules."""


class StepfreezeError(Exception):
    """Base class for all errors raised by this package."""


class ConstantSignal(StepfreezeError):
    """Signal has zero deviation from its mean and cannot be scaled."""


class WindowTooShort(StepfreezeError):
    """Requested window has too few samples for the operation."""


class InsufficientLength(StepfreezeError):
    """Signal too short for the requested delay embedding."""


class OutOfDisk(StepfreezeError):
    """Point lies outside the unit disk beyond the floating-point tolerance."""


class IndexOutOfRange(StepfreezeError):
    """Linear box index outside {1, ..., P*Q}."""


class EmptySupport(StepfreezeError):
    """Transition-count matrix has no row with positive mass."""


class StartNotInSupport(StepfreezeError):
    """Surrogate start state is not part of the empirical support."""


class DecompositionFailure(StepfreezeError):
    """Communicating classes cannot be ordered against a unique stepping class."""


class EmptyAbsorbingSet(StepfreezeError):
    """No class is reachable from the stepping class; window never freezes."""


class SingularSystem(StepfreezeError):
    """I - A_F is numerically singular; absorbing set unreachable somewhere."""


class ConvergenceFailure(StepfreezeError):
    """Iterative eigensolver did not reach tolerance within its budget."""


class NoEscape(StepfreezeError):
    """A simulated path exhausted its time budget without escaping."""


class NoSuccessfulRecords(StepfreezeError):
    """Cohort summary requested but no record has status ok."""
