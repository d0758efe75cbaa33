"""Exception types shared across the package."""


class FFGroupError(Exception):
    pass


class NonPrimeCharacteristic(FFGroupError, ValueError):
    pass


class BudgetExceeded(FFGroupError):
    pass


class ScanTooLarge(BudgetExceeded):
    pass


class DivisionByZero(FFGroupError, ZeroDivisionError):
    pass


class ZeroElement(FFGroupError, ValueError):
    pass


class MixedFields(FFGroupError, ValueError):
    pass


class InvalidSubfield(FFGroupError, ValueError):
    pass


class ConstantPolynomial(FFGroupError, ValueError):
    pass


class NotMonic(FFGroupError, ValueError):
    pass


class ZeroConstantTerm(FFGroupError, ValueError):
    pass


class ZeroPolynomial(FFGroupError, ValueError):
    pass


class DegreeZero(FFGroupError, ValueError):
    pass


class SingularMatrix(FFGroupError, ValueError):
    pass


class DimensionMismatch(FFGroupError, ValueError):
    pass


class FrameMismatch(FFGroupError, ValueError):
    pass


class EmptyGeneratorList(FFGroupError, ValueError):
    pass
