"""Exception hierarchy shared across the library.

Two failure families matter downstream: bad inputs (rejected before any
numerics run) and numerical invariant violations (detected while running).
The command line tool maps them to distinct exit codes.
"""


class StrongcoupleError(Exception):
    """Base class for all library errors."""


class InputError(StrongcoupleError, ValueError):
    """Invalid argument, configuration field, or malformed input file."""


class NumericalError(StrongcoupleError, RuntimeError):
    """A numerical invariant failed at runtime."""


class ConvergenceError(NumericalError):
    """An iterative solver did not reach its tolerance within its budget."""


class TrackingError(NumericalError):
    """Eigenbranch continuity could not be established along a trajectory."""
