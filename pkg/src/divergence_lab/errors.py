"""Exception hierarchy shared by every module."""


class DivergenceLabError(Exception):
    """Base class for all library errors."""


class ContractError(DivergenceLabError, ValueError):
    """An operation was called with arguments violating its precondition."""


class UnknownIdentifierError(ContractError, KeyError):
    """A hypothesis, symbol, action, agent or regime id is not declared."""

    def __init__(self, kind: str, identifier: str):
        self.kind = kind
        self.identifier = identifier
        super().__init__(f"unknown {kind}: {identifier!r}")

    def __str__(self) -> str:
        # KeyError.__str__ would repr() the message
        return f"unknown {self.kind}: {self.identifier!r}"


class ScenarioValidationError(DivergenceLabError, ValueError):
    """A scenario file failed to parse or validate.

    Attributes:
        path: Dotted key path of the offending field (``"<root>"`` for the
            document itself).
        message: Human-readable reason.
    """

    def __init__(self, path: str, message: str):
        self.path = path or "<root>"
        self.message = message
        super().__init__(f"{self.path}: {message}")
