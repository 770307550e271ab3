"""Exception types shared across the package.

Exceptions that originate from a named configuration field carry a
``field`` attribute (dotted ``section.key`` path) so the config loader and
CLI can report which entry was rejected.
"""


class NemflowError(Exception):
    """Base class for all package errors."""


class InvalidFieldError(NemflowError):
    """A field contains non-finite samples or malformed data."""


class RepresentationError(NemflowError):
    """Operation applied to a field in the wrong representation."""


class RankError(NemflowError):
    """Operation applied to a field of the wrong rank (scalar vs vector)."""


class ValidationError(NemflowError):
    """A domain-type invariant was violated at construction time."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class PerturbationTooLargeError(ValidationError):
    """Director perturbation leaves |w0 + phi| < 1/2 somewhere."""


class BlowUpError(NemflowError):
    """Integration produced non-finite values.

    Carries the simulation time of failure and a small diagnostics
    snapshot (max magnitudes, non-finite counts) taken at detection.
    """

    def __init__(self, message, t, snapshot=None):
        super().__init__(message)
        self.t = t
        self.snapshot = dict(snapshot or {})


class FitDomainError(NemflowError):
    """Decay fit requested on nonpositive values."""


class InsufficientDataError(NemflowError):
    """Too few samples inside the fit window."""


class ConfigError(NemflowError):
    """Config file could not be parsed or validated.

    ``line`` is the 1-based line number for parse errors, ``field`` the
    dotted key path for validation errors; either may be None.
    """

    def __init__(self, message, field=None, line=None):
        super().__init__(message)
        self.field = field
        self.line = line


class StudySetupError(NemflowError):
    """Truncation study with inconsistent box ladder or non-nested data."""
