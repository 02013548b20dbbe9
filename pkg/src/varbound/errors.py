"""Exception types raised by the library."""


class UncertaintyError(Exception):
    """Base class for all errors raised by varbound."""


class NotHermitian(UncertaintyError, ValueError):
    def __init__(self, deviation: float):
        super().__init__(f"matrix is not Hermitian (max deviation {deviation:.3e})")
        self.deviation = deviation


class NotUnitTrace(UncertaintyError, ValueError):
    def __init__(self, trace: complex):
        super().__init__(f"density matrix trace is {trace}, expected 1")
        self.trace = trace


class NotPSD(UncertaintyError, ValueError):
    def __init__(self, min_eigenvalue: float):
        super().__init__(f"matrix has negative eigenvalue {min_eigenvalue:.3e}")
        self.min_eigenvalue = min_eigenvalue


class NotSquare(UncertaintyError, ValueError):
    pass


class NotNormalized(UncertaintyError, ValueError):
    pass


class DimensionMismatch(UncertaintyError, ValueError):
    pass


class IndexOutOfRange(UncertaintyError, IndexError):
    pass


class LengthMismatch(UncertaintyError, ValueError):
    pass


class ConvergenceFailure(UncertaintyError, ArithmeticError):
    pass


class ConsistencyError(UncertaintyError, ArithmeticError):
    """A numerical result fell outside what rounding alone can explain."""


class NegativeAlpha(UncertaintyError, ValueError):
    pass


class NonPositiveParameter(UncertaintyError, ValueError):
    pass


class TooManyObservables(UncertaintyError, ValueError):
    pass


class InvalidGrid(UncertaintyError, ValueError):
    pass


class BlochVectorTooLong(UncertaintyError, ValueError):
    pass


class InvalidParameter(UncertaintyError, ValueError):
    """A state parameter lies outside the documented range."""


class UnknownExample(UncertaintyError, ValueError):
    pass


class OutOfSupportedRange(UncertaintyError, ValueError):
    pass
