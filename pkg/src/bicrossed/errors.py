"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Base class for all errors raised by this package."""


class FieldMismatch(AlgebraError, TypeError):
    pass


class ParseError(AlgebraError, ValueError):
    pass


class DimensionMismatch(AlgebraError, ValueError):
    pass


class BudgetExceeded(AlgebraError):
    """An exhaustive search would need more candidates than allowed."""

    def __init__(self, what, required, budget):
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(f"{what}: {required} candidates required, budget is {budget}")


class FieldNotFinite(AlgebraError):
    pass


class NotAssociative(AlgebraError):
    pass


class NotASubalgebra(AlgebraError):
    pass


class NotAnIdeal(AlgebraError):
    pass


class NotAFactorization(AlgebraError):
    pass


class NotAComplement(AlgebraError):
    pass


class InvalidMatchedPair(AlgebraError):
    pass


class NotABimodule(AlgebraError):
    pass


class NotMultiplicativeBimodule(AlgebraError):
    pass


class NotADeformationMap(AlgebraError):
    pass


class UnresolvedPair(AlgebraError):
    """Neither invariants nor a bounded search could decide an equivalence."""

    def __init__(self, r, s, reason=""):
        self.r = r
        self.s = s
        super().__init__(f"cannot decide equivalence of {r} and {s}" + (f": {reason}" if reason else ""))


class UnknownEntry(AlgebraError, KeyError):
    pass


# the name callers of the scalar layer expect for division by zero
DivisionByZero = ZeroDivisionError
