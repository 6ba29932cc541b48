"""Exception hierarchy shared by every stage of the pipeline."""


class ExflowError(Exception):
    """Base class for all errors raised by exflow."""


class ValidationError(ExflowError, ValueError):
    """A graph or configuration violates a structural invariant."""


class SourceCellWithoutPredecessor(ValidationError):
    """Transposing the dynamics would leave a cell without successors."""

    def __init__(self, cells):
        self.cells = list(cells)
        super().__init__(
            f"F-totality: cells without predecessor cannot be reversed: {self.cells[:10]}"
        )


class NestingViolation(ExflowError):
    """A fine recurrent component does not project into a single coarse one."""


class ComponentCycle(ExflowError):
    """Two recurrent components reach each other dynamically."""


class UnknownSystem(ExflowError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown system"


class NonFiniteState(ExflowError, ArithmeticError):
    """Integration produced a NaN or infinite state (usually tau too large)."""

    def __init__(self, message, cell=None):
        self.cell = cell
        super().__init__(message if cell is None else f"{message} (cell {cell})")


class ParseError(ExflowError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class StageError(ExflowError):
    """Wraps a failure inside :func:`exflow.report.analyze_pipeline` with its stage tag."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
