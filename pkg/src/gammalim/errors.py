"""Exception types raised across the package."""


class GammaLimError(Exception):
    """Base class for every error raised by gammalim."""


class PoleArgument(GammaLimError, ValueError):
    """Argument sits exactly on a pole (an integer <= 0)."""

    def __init__(self, x, order=1):
        self.x = x
        self.order = order
        super().__init__(f"pole of order {order} at {x}")


class NonPositiveArgument(GammaLimError, ValueError):
    pass


class CotPole(GammaLimError, ValueError):
    pass


class ZeroConstantTerm(GammaLimError, ZeroDivisionError):
    pass


class DegreeZero(GammaLimError, ValueError):
    pass


class ExactPole(PoleArgument):
    pass


class OutOfRadius(GammaLimError, ValueError):
    pass


class ScheduleOutOfRadius(GammaLimError, ValueError):
    pass


class PrecisionExhausted(GammaLimError, ArithmeticError):
    pass
