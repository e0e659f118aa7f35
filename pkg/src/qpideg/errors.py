"""Exception types raised across the package.

Each error carries the minimum context needed to report it; the CLI maps
them to exit codes.
"""


class QpiError(Exception):
    """Base class for all package errors."""


class DivisionByZero(QpiError, ZeroDivisionError):
    pass


class EllMismatch(QpiError, ValueError):
    def __init__(self, a, b):
        super().__init__(f"root-of-unity orders differ: {a} != {b}")
        self.orders = (a, b)


class DenominatorVanishes(QpiError, ZeroDivisionError):
    def __init__(self, ell, what="denominator"):
        super().__init__(f"{what} vanishes at a primitive {ell}-th root of unity")
        self.ell = ell


class DimensionMismatch(QpiError, ValueError):
    pass


class Singular(QpiError, ValueError):
    pass


class NotSkewSymmetric(QpiError, ValueError):
    pass


class IndexOutOfRange(QpiError, IndexError):
    pass


class NotPerfectSquare(QpiError, ArithmeticError):
    pass


class OddExponent(QpiError, ValueError):
    pass


class EvenEll(QpiError, ValueError):
    pass


class BudgetExceeded(QpiError, RuntimeError):
    pass


class DegenerateParams(QpiError, ValueError):
    pass


class NotScalarPower(QpiError, ValueError):
    pass


class NonInvertibleLocalizer(QpiError, ValueError):
    def __init__(self, j):
        super().__init__(f"image of generator {j + 1} is singular but its derivation is nonzero")
        self.step = j


class RelationResidual(QpiError, ArithmeticError):
    def __init__(self, step, pair):
        i, l = pair
        super().__init__(f"relation ({i + 1},{l + 1}) fails after step {step + 1}")
        self.step = step
        self.pair = pair


class PullbackDiverged(QpiError, ArithmeticError):
    def __init__(self, j):
        super().__init__(f"fixed-point inversion of step {j + 1} did not stabilise")
        self.step = j


class RoundTripFailed(QpiError, ArithmeticError):
    def __init__(self, j):
        super().__init__(f"re-applying step {j + 1} does not reproduce its input")
        self.step = j
