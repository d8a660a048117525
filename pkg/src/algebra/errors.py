"""
Domain errors raised by the algebra and geometry layers.

Every error carries a stable `code` string; the CLI prints it and maps
syntax errors to exit code 2 and every other error to exit code 1.
"""

from typing import Optional


class ToolkitError(Exception):
    """Base class of every domain error of the toolkit."""

    code = "error"

    def __init__(self, message: Optional[str] = None) -> None:
        self.message = message or self.code
        super().__init__(self.message)


class InvalidArgument(ToolkitError):
    code = "InvalidArgument"


class RingMismatch(ToolkitError):
    code = "RingMismatch"


class PolySyntaxError(ToolkitError):
    code = "PolySyntaxError"


class MissingUniformizer(ToolkitError):
    code = "MissingUniformizer"


class IllDefined(ToolkitError):
    """A ring map sends a relation of its source to a non-zero element."""

    code = "IllDefined"

    def __init__(self, relation: str, message: Optional[str] = None) -> None:
        self.relation = relation
        super().__init__(message or f"relation {relation} is not respected")


class TorsionInput(ToolkitError):
    code = "TorsionInput"


class NotAdmissible(ToolkitError):
    code = "NotAdmissible"


class NotAGenerator(ToolkitError):
    code = "NotAGenerator"


class EmptyOverlap(ToolkitError):
    code = "EmptyOverlap"


class NotOpenLocally(ToolkitError):
    code = "NotOpenLocally"


class ExtensionBoundExceeded(ToolkitError):
    code = "ExtensionBoundExceeded"

    def __init__(self, bound: int) -> None:
        self.bound = bound
        super().__init__(f"no exponent k <= {bound} extends the local ideal")


class NotIntegral(ToolkitError):
    """`subject` is an index into a fraction list or a variable name."""

    code = "NotIntegral"

    def __init__(self, subject, message: Optional[str] = None) -> None:
        self.subject = subject
        super().__init__(message or f"not integral: {subject}")


class NotContainingIdealOfDefinition(ToolkitError):
    code = "NotContainingIdealOfDefinition"


class RelationViolated(ToolkitError):
    code = "RelationViolated"

    def __init__(self, relation: str) -> None:
        self.relation = relation
        super().__init__(f"relation {relation} does not vanish at the point")


class NotContinuous(ToolkitError):
    code = "NotContinuous"

    def __init__(self, generator: str) -> None:
        self.generator = generator
        super().__init__(
            f"ideal-of-definition generator {generator} has order <= 0"
        )


class NoFiniteOrder(ToolkitError):
    code = "NoFiniteOrder"


class IncompleteNormalization(ToolkitError):
    code = "IncompleteNormalization"

    def __init__(self, chart: int) -> None:
        self.chart = chart
        super().__init__(f"normalization of chart {chart} hit the search bound")


class NotPrincipal(ToolkitError):
    code = "NotPrincipal"

    def __init__(self, index: int, message: Optional[str] = None) -> None:
        self.index = index
        super().__init__(
            message or f"the ideal does not become principal on generator {index}"
        )


class GenericFiberChanged(ToolkitError):
    """An adjunction changed A[1/w]; the closure is not birational to A."""

    code = "GenericFiberChanged"
