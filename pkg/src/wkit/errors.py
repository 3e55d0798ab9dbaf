"""Exception hierarchy shared by the library and the CLI."""


class WkitError(Exception):
    """Base class for all errors raised by wkit."""


class DimensionError(WkitError, ValueError):
    """Two classes (or a class and a lattice) have different rank."""


class ParseError(WkitError, ValueError):
    """A class string, vector string or descriptor could not be parsed."""


class CapabilityError(WkitError):
    """The requested computation is outside what the loaded data supports."""


class ConfigurationError(WkitError):
    """Missing or inconsistent user-supplied data (bh tables, rule files)."""


class WrongRegimeError(WkitError, ValueError):
    """A closed formula was asked for outside the genus regime it covers."""


class UnsupportedError(WkitError):
    """A parameter combination for which no formula is available."""


class IntegralityError(WkitError, ArithmeticError):
    """An exact halving met an odd integer."""


class MissingEntryError(WkitError, KeyError):
    """A backend table has no value for a class it was asked about."""

    def __str__(self):
        return str(self.args[0]) if self.args else "missing entry"


class RuleSetError(WkitError):
    """A rule document is malformed or violates a structural guard."""


class IncompleteRuleSetError(WkitError):
    """A state is neither a base case nor reducible by the loaded rules."""

    def __init__(self, state_key: str):
        super().__init__(f"incomplete ruleset: no base case or rule applies to {state_key}")
        self.state_key = state_key


class ConservationError(WkitError, ValueError):
    """A w-number state with I(alpha + beta) != D.E."""
