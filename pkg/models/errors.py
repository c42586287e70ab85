class InvariantViolation(ValueError):
    """A value broke one of its type invariants (Hermiticity, completeness, ...)."""


class DimensionMismatch(ValueError):
    pass


class BitLengthError(ValueError):
    pass


class BudgetExceeded(ValueError):
    """Exact enumeration would exceed the configured budget; use Monte Carlo."""


class KeyDecodeError(ValueError):
    pass


class GarbledEvaluationError(ValueError):
    pass


class PkeDecryptionError(ValueError):
    pass


class SingleKeyViolation(ValueError):
    pass


class UsageError(ValueError):
    pass
