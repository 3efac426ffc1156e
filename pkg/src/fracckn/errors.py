"""Exception hierarchy shared by every module of the package."""


class CKNError(Exception):
    """Base class for all library errors."""

    #: short machine-readable tag used in CLI error reports
    kind = "error"

    def report(self):
        out = {"error": self.kind, "message": str(self)}
        out.update(getattr(self, "details", {}) or {})
        return out


class ComputationError(CKNError):
    """A numerical procedure failed (CLI exit status 1)."""


class ConfigError(CKNError):
    """Invalid input configuration (CLI exit status 2)."""


# special functions
class PoleError(ComputationError):
    kind = "PoleError"


class ParameterPole(ComputationError):
    kind = "ParameterPole"


class NonConvergence(ComputationError):
    kind = "NonConvergence"


class OverflowFailure(ComputationError):
    kind = "OverflowFailure"


# constants
class DivergentIntegral(ComputationError):
    kind = "DivergentIntegral"


class QuadratureBudgetExceeded(ComputationError):
    kind = "QuadratureBudgetExceeded"


# spectral
class BoundaryLeak(ComputationError):
    kind = "BoundaryLeak"


class RootNotBracketed(ComputationError):
    kind = "RootNotBracketed"


class NewtonDivergence(ComputationError):
    kind = "NewtonDivergence"

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.details = {"last_iterate": repr(last_iterate)}


class NonPositiveField(ComputationError):
    kind = "NonPositiveField"


# solver
class ZeroField(ComputationError):
    kind = "ZeroField"


class NewtonStall(ComputationError):
    kind = "NewtonStall"

    def __init__(self, message, best=None, residual=None, iterations=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.iterations = iterations
        self.details = {"residual": residual, "iterations": iterations}


class PositivityLoss(ComputationError):
    kind = "PositivityLoss"


class FlowStall(ComputationError):
    kind = "FlowStall"


class StepFailure(ComputationError):
    kind = "StepFailure"

    def __init__(self, message, gamma=None):
        super().__init__(message)
        self.gamma = gamma
        self.details = {"gamma": gamma}


# stability
class EigDivergence(ComputationError):
    kind = "EigDivergence"


# cli
class ParseError(ConfigError):
    kind = "ParseError"

    def __init__(self, message, line=None, column=None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column
        self.details = {"line": line, "column": column}


class ValidationError(ConfigError, ValueError):
    kind = "ValidationError"


class IoError(ComputationError):
    kind = "IoError"
