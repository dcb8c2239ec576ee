"""Exception types shared across the package."""


class QpcDephError(Exception):
    """Base class for every package-specific error."""


class UnknownUnitError(QpcDephError):
    """An energy conversion was asked for an unrecognized unit tag."""


class PerturbationError(QpcDephError):
    """The linear-response transmission shift left its validity range."""


class StepSizeError(QpcDephError):
    """Requested integrator step exceeds the stability guard.

    ``dt_max`` carries the largest admissible step for the offending call.
    """

    def __init__(self, message: str, dt_max: float):
        super().__init__(message)
        self.dt_max = dt_max


class TruncationError(QpcDephError):
    """The count-sector truncation is too small for the requested run.

    ``suggested_n_max`` carries a truncation bound expected to be adequate.
    """

    def __init__(self, message: str, suggested_n_max: int):
        super().__init__(message)
        self.suggested_n_max = suggested_n_max


class NoDecayError(QpcDephError):
    """The generator has no decaying mode ("no-decay")."""


class InvariantError(QpcDephError):
    """A structural state invariant was violated during integration."""


class ConfigError(QpcDephError):
    """A scenario configuration (file or CLI override) is invalid."""
