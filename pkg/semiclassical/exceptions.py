class WKBError(Exception):
    """Base class for every error raised by the simulation suite."""


class GridError(WKBError, ValueError):
    pass


class FieldError(WKBError, ValueError):
    """Malformed field: wrong length, non-finite or non-real coefficients."""


class ScheduleError(WKBError, ValueError):
    pass


class NonlinearityError(WKBError, ValueError):
    pass


class AlignmentError(WKBError, ValueError):
    """Trajectories compared on different grids or time samples."""


class RateFitError(WKBError, ValueError):
    pass


class ConfigError(WKBError, ValueError):
    """Invalid experiment file. ``key`` and ``line`` locate the problem."""

    def __init__(self, message, key=None, line=None):
        self.detail = message
        self.key = key
        self.line = line
        prefix = ""
        if line is not None:
            prefix = f"line {line}: "
        if key is not None:
            prefix += f"{key}: "
        super().__init__(prefix + message)


class SolverAbort(WKBError, RuntimeError):
    """A time integration stopped early. ``time`` is the failing time."""

    def __init__(self, message, time=None):
        self.time = time
        if time is not None:
            message = f"{message} (t={time:.6g})"
        super().__init__(message)


class NonFiniteError(SolverAbort):
    pass


class InstabilityError(SolverAbort):
    pass


class ResolutionError(SolverAbort):
    """Spectral tail mass above the guard threshold."""


class ReportError(WKBError):
    """Report could not be written or read back."""
