"""Exception hierarchy shared by every cwp-verifier component."""

from dataclasses import dataclass
from typing import Optional


class VerifierError(Exception):
    """Base exception for tool failures.

    Findings about the verified model (violations, deadlocks, lint notes) are
    reported as values. Exceptions are reserved for inputs the tool cannot
    process at all.
    """

    code = "VERIFIER_ERROR"

    def __init__(
        self,
        message: str,
        subject: str = "",
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        super().__init__(message)
        self.message = message
        self.subject = subject
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line is not None:
            return f"{self.line}:{self.column or 0}: {self.message}"
        return self.message


class VariableInData(VerifierError):
    """A variable term was offered to a triple store."""

    code = "VARIABLE_IN_DATA"


class UnboundFilterVariable(VerifierError):
    """A FILTER references a variable that no pattern can bind."""

    code = "UNBOUND_FILTER_VARIABLE"


class UnboundTemplateVariable(VerifierError):
    """A CONSTRUCT/INSERT template uses a variable its WHERE never binds."""

    code = "UNBOUND_TEMPLATE_VARIABLE"


class DoubleConstruction(VerifierError):
    """Constructors were requested twice for the same instance."""

    code = "DOUBLE_CONSTRUCTION"


class UnknownClass(VerifierError):
    code = "UNKNOWN_CLASS"


class UnknownDatatype(VerifierError):
    code = "UNKNOWN_DATATYPE"


class DuplicateProperty(VerifierError):
    code = "DUPLICATE_PROPERTY"


class EmptyPartition(VerifierError):
    code = "EMPTY_PARTITION"


class SubPartitionNotSupported(VerifierError):
    """Sub-partitioning requested under the disjoint-individuals strategy."""

    code = "SUB_PARTITION_NOT_SUPPORTED"


class MalformedRule(VerifierError):
    code = "MALFORMED_RULE"


class UnclassifiedProperty(VerifierError):
    code = "UNCLASSIFIED_PROPERTY"


class UnknownObject(VerifierError):
    code = "UNKNOWN_OBJECT"


class AbstractInstantiation(VerifierError):
    code = "ABSTRACT_INSTANCE"


class ClockRegression(VerifierError):
    """The scenario clock was moved backwards."""

    code = "CLOCK_REGRESSION"


class UnknownPrefix(VerifierError):
    code = "UNKNOWN_PREFIX"


class ExpectationFailed(VerifierError):
    """A scenario expectation did not hold."""

    code = "EXPECTATION_FAILED"

    def __init__(self, message: str, subject: str = "", diff: str = ""):
        super().__init__(message, subject=subject)
        self.diff = diff


@dataclass(frozen=True)
class SyntaxIssue:
    """One positioned syntax problem."""

    line: int
    column: int
    expected: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: expected {self.expected}"


class ModelSyntaxError(VerifierError):
    """The model, scenario or triple text could not be parsed."""

    code = "SYNTAX_ERROR"

    def __init__(self, issues: list[SyntaxIssue]):
        first = issues[0]
        super().__init__(
            f"expected {first.expected}", line=first.line, column=first.column
        )
        self.issues = issues


class InvalidModel(VerifierError):
    """The class model breaks a structural rule (duplicate class, cyclic generalization)."""

    code = "INVALID_MODEL"
