"""Exception hierarchy shared across the package.

Contract violations (bad inputs, schema breaks) derive from ContractError;
the CLI maps them to exit code 1 and IO failures to exit code 2.
"""


class ContractError(Exception):
    """Base for all input-contract violations."""

    code = "ContractError"

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.message = message
        self.detail = detail


class MissingColumn(ContractError):
    code = "MissingColumn"


class DimMismatch(ContractError):
    code = "DimMismatch"


class MalformedLine(ContractError):
    code = "MalformedLine"


class NonFiniteValue(ContractError):
    code = "NonFiniteValue"


class ZeroVector(ContractError):
    code = "ZeroVector"


class EmptyInput(ContractError):
    code = "EmptyInput"


class MissingVector(ContractError):
    code = "MissingVector"


class TooFewPoints(ContractError):
    code = "TooFewPoints"


class KTooLarge(ContractError):
    code = "KTooLarge"


class NotNormalized(ContractError):
    code = "NotNormalized"


class EmptyCluster(ContractError):
    code = "EmptyCluster"


class UnknownTerm(ContractError):
    code = "UnknownTerm"


class UnknownGroup(ContractError):
    code = "UnknownGroup"


class LabelMismatch(ContractError):
    code = "LabelMismatch"


class DegenerateInput(ContractError):
    code = "DegenerateInput"


class DimTooSmall(ContractError):
    code = "DimTooSmall"
