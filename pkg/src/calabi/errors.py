"""Exception hierarchy; the CLI maps these onto exit codes."""


class CalabiError(Exception):
    """Base class."""


class ParameterError(CalabiError, ValueError):
    """Input outside the documented preconditions (CLI exit 2)."""


class DomainError(CalabiError):
    """Singular locus, degenerate polytope, vanishing scalar curvature (CLI exit 3)."""


class DegeneratePolytopeError(DomainError):
    pass


class SingularLocusError(DomainError):
    pass


class DegenerateProfileError(DomainError):
    """p_poly vanishes identically, the metric is undefined."""


class ConvexityError(DomainError):
    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


class NoSolutionError(DomainError):
    pass


class UnsupportedError(DomainError):
    pass


class DefectError(CalabiError):
    """Two independent formulas disagree where they must agree (CLI exit 1)."""
