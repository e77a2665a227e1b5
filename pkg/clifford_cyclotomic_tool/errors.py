"""Exception hierarchy for ccg-tool.

Every domain error derives from CcgError; the CLI turns those into exit
status 1. InvariantViolation stays outside that hierarchy: it means a bug or a
counterexample to a theorem the code relies on, and maps to exit status 2.
"""


class CcgError(Exception):
    pass


class ConfigError(CcgError):
    pass


class PayloadError(CcgError):
    pass


# --- Cyclotomic arithmetic ---

class DivisionByZeroError(CcgError, ZeroDivisionError):
    pass


class LevelMismatchError(CcgError):
    pass


class NotAutomorphismError(CcgError):
    pass


class NotTwoLocalError(CcgError):
    pass


class NotRealError(CcgError):
    pass


class UndecidedError(CcgError):
    """Residue tests all passed but no square root could be reconstructed."""


# --- Matrix groups ---

class LevelLacksIError(CcgError):
    pass


class NotUnitaryError(CcgError):
    pass


class NotSpecialUnitaryError(CcgError):
    pass


class NotSpecialOrthogonalError(CcgError):
    pass


class UnsupportedLevelError(CcgError):
    pass


# --- Words and synthesis ---

class NotSpecialError(CcgError):
    pass


class NotInGroupError(CcgError):
    pass


class NotAGeneratorError(CcgError):
    pass


class UnsynthesizedError(CcgError):
    pass


class InvariantViolation(Exception):
    pass
