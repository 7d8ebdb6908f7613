"""Exception hierarchy shared by all solver modules."""


class SturmianError(Exception):
    """Base class for every failure raised by this package."""


class DomainError(SturmianError, ValueError):
    """An input lies outside the domain of the requested operation."""


class QuadratureError(SturmianError):
    """Successive quadrature refinements failed to agree."""


class DegenerateOverlapError(SturmianError):
    """Two basis functions are (numerically) linearly dependent."""


class SingularOverlapError(SturmianError):
    """The overlap matrix is too close to singular to solve the pencil."""


class ComplexRootError(SturmianError):
    """A secular polynomial produced complex roots."""


class NoPositiveMinimum(SturmianError):
    """E(script_e) has no bracketed local minimum with script_e > 0."""


class MultipleMinima(SturmianError):
    """E(script_e) has more than one local minimum.

    ``candidates`` holds one record (script_e, energy, bracket, ...) per minimum found.
    """

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class NoPositiveSolution(SturmianError):
    """A self-consistency equation for script_e has no positive root."""


class NoFixedPoint(NoPositiveSolution):
    """The conventional choice script_e = E has no solution."""


class BoundaryLeak(SturmianError):
    """An oracle eigenfunction does not decay before the grid boundary."""


class PoleError(SturmianError, ZeroDivisionError):
    """A potential was evaluated at (or next to) one of its poles."""


class UnsupportedPotential(SturmianError, TypeError):
    """The operation is not defined for this kind of potential."""
