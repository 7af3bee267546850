"""Exception hierarchy.

Everything a user can trigger with bad input derives from ValidationError
(CLI exit code 2); combinatorial guard trips derive from GuardError (exit 3).
"""


class ValidationError(ValueError):
    pass


class NegativeWeight(ValidationError):
    pass


class ZeroAnchor(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class ParseError(ValidationError):
    pass


class InvalidParam(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class RoleMismatch(ValidationError):
    pass


class SingularSystem(ArithmeticError):
    pass


class NoConvergence(RuntimeError):
    pass


class GuardError(RuntimeError):
    pass


class TooLarge(GuardError):
    pass
