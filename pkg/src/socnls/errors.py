"""Exception types shared across the package."""


class SocnlsError(Exception):
    """Base class for all package errors."""


class InvalidFieldError(SocnlsError):
    """A field array contains NaN/Inf entries or does not conform to its grid."""


class UndefinedQuotientError(SocnlsError):
    """The Gagliardo-Nirenberg quotient is undefined (zero pair)."""


class EstimationFailedError(SocnlsError):
    """Constant estimation did not converge; carries the best value found."""

    def __init__(self, message, best_value):
        super().__init__(message)
        self.best_value = best_value


class IterationLimitError(SocnlsError):
    """A solver hit its iteration limit; carries the iteration trace."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


class StepControlError(SocnlsError):
    """Line search could not find an energy-decreasing step."""


class DegenerateFrequencyError(SocnlsError):
    """Symbol diagonalization requested at the degenerate frequency xi = 0."""


class OffLatticeError(SocnlsError):
    """A wave vector does not lie on the grid's frequency lattice."""


class DomainError(SocnlsError):
    """Argument outside the supported range of a special function."""


class GridTooSmallError(SocnlsError):
    """The radial grid does not cover the support of the requested construction."""


class BlowupSuspectedError(SocnlsError):
    """The homogeneous-H1 norm exceeded the blow-up guard during evolution."""

    def __init__(self, message, t, h1_norm):
        super().__init__(message)
        self.t = t
        self.h1_norm = h1_norm


class UnequalLambdaError(SocnlsError):
    """Mixed-mode construction requires lambda_plus = lambda_minus = lambda_zero."""


class ConfigError(SocnlsError):
    """Invalid configuration file or flag value."""
