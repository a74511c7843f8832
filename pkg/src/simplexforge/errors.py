"""Exception hierarchy shared by all simplexforge modules."""


class SimplexForgeError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(SimplexForgeError, ValueError):
    pass


class NonFiniteInput(SimplexForgeError, ValueError):
    pass


class ZeroDirection(SimplexForgeError, ValueError):
    pass


class InvalidProfile(SimplexForgeError, ValueError):
    pass


class MissingProjection(SimplexForgeError, ValueError):
    """Smoothing needs a Euclidean projection onto the core body."""


class IterationCapExceeded(SimplexForgeError, RuntimeError):
    pass


class NoRootFound(SimplexForgeError, RuntimeError):
    pass


class SolverStall(SimplexForgeError, RuntimeError):
    """An inner optimizer stopped without certifying its answer.

    ``best`` holds whatever certificate was reached.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DegenerateSimplex(SimplexForgeError, ValueError):
    pass


class PreconditionViolated(SimplexForgeError):
    """A step of the inductive construction cannot be carried out.

    ``level`` is the ambient dimension of the step that failed, ``margin``
    the measured slack of the violated inequality (negative means the
    inequality fails outright) and ``degenerate`` marks failures that sit
    inside the tolerance band rather than clearly on the wrong side.
    """

    def __init__(self, level, detail, margin=None, degenerate=False):
        self.level = level
        self.detail = detail
        self.margin = margin
        self.degenerate = degenerate
        super().__init__(f"level {level}: {detail}")


class BodySpecError(SimplexForgeError, ValueError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class UnsupportedExport(SimplexForgeError, ValueError):
    pass
