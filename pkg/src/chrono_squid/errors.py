"""Exception hierarchy for chrono_squid."""


class ChronoSquidError(Exception):
    """Base class for all package errors."""


class CriticalFluxError(ChronoSquidError, ValueError):
    """Flux sits at (or within the floor of) half a flux quantum: infinite inductance."""


class FluxDomainError(ChronoSquidError, ValueError):
    """Requested speed cannot be realized by any flux on the chosen branch."""


class OutOfDomainError(ChronoSquidError, ValueError):
    """Profile queried outside its tabulated range."""


class HorizonSingularityError(ChronoSquidError, ZeroDivisionError):
    """Closed-form coordinate time evaluated on the horizon."""


class HorizonInPathError(ChronoSquidError, ValueError):
    """The integration interval contains a zero of the metric speed."""

    def __init__(self, message, horizon=None):
        super().__init__(message)
        self.horizon = horizon


class EmptyDesignError(ChronoSquidError):
    """Every cell of a requested design is infeasible."""


class EmptyWindowError(ChronoSquidError):
    """No point of the profile satisfies the requested flux margin."""


class CriticalCellError(ChronoSquidError):
    """Design cells whose inductance exceeds the lattice cap."""

    def __init__(self, message, cells=()):
        super().__init__(message)
        self.cells = list(cells)


class NumericalBlowupError(ChronoSquidError, ArithmeticError):
    """Lattice state diverged (usually a CFL violation)."""

    def __init__(self, message, step_index=None):
        super().__init__(message)
        self.step_index = step_index


class NoArrivalError(ChronoSquidError):
    """The downstream probe recorded essentially no pulse energy."""
