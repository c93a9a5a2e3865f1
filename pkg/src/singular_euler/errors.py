"""Exception hierarchy shared by every module of the package."""


class SingularEulerError(Exception):
    """Base class for all errors raised by this package."""


class NonPhysicalStateError(SingularEulerError, ValueError):
    """Density or pressure is not strictly positive (or not finite)."""


class DomainError(SingularEulerError, ValueError):
    """A wave-curve parameter lies outside the branch it was requested on."""


class InconsistentStatesError(SingularEulerError):
    """Two states do not satisfy the jump relation they are claimed to satisfy."""


class VacuumError(SingularEulerError):
    """The Riemann data would generate a vacuum."""


class ConvergenceError(SingularEulerError):
    """A root finder exhausted its iteration budget."""


class NoSolutionError(SingularEulerError):
    """No admissible stationary wave exists for the given upstream Mach number."""


class BranchUndefinedError(NoSolutionError):
    """The supersonic branch is undefined because gamma * I > 1."""


class NegativeVelocityError(SingularEulerError, ValueError):
    """Stationary-wave curves are only defined for positive upstream velocity."""


class OutsideAdmissibleError(SingularEulerError, ValueError):
    """A Mach pair lies outside the admissible quadrants of the criterion."""


class NoAdmissibleStructureError(SingularEulerError):
    """Neither flow direction produced a verified global solution.

    ``attempts`` holds one human-readable diagnostic per regime attempt.
    """

    def __init__(self, message, attempts=()):
        super().__init__(message)
        self.attempts = tuple(attempts)


class ClassificationConflictError(SingularEulerError):
    """Wave-pattern classification and Mach-range classification disagree."""

    def __init__(self, message, pattern_verdict=None, table_verdict=None):
        super().__init__(message)
        self.pattern_verdict = pattern_verdict
        self.table_verdict = table_verdict


class ConfigError(SingularEulerError, ValueError):
    """Base class for problems with a configuration document."""


class ParseError(ConfigError):
    """The configuration document is malformed; ``path`` names the field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ValidationError(ConfigError):
    """A configuration value violates a named constraint."""

    def __init__(self, message, constraint=""):
        super().__init__(message)
        self.constraint = constraint or message
