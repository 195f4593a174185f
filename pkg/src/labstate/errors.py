"""Exception hierarchy shared across the package."""


class LabstateError(Exception):
    """Base class for model errors (bad networks, bad states, bad input)."""


class IrrationalProbability(LabstateError):
    """A probability landed outside the rationals (nonzero sqrt(2) part)."""


class NonNormalState(LabstateError):
    """A register site is faulty or empty where only ground/signal is allowed."""


class UnmatchedMonomial(LabstateError):
    """A stage map has no rule for a creation monomial present in the state."""


class WiringError(LabstateError):
    """An optical network is wired inconsistently or compiles to a non-isometry."""


class ScenarioParseError(LabstateError):
    """Malformed scenario text. Carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", col {column}"
            where += ": "
        super().__init__(where + message)
