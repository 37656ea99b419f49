class QVoltageError(Exception):
    pass


class StructureError(QVoltageError, ValueError):
    """Malformed input: wrong shapes, broken algebra axioms, bad schema."""


class VerificationError(QVoltageError):
    """A numerical check failed; ``report`` carries the residuals."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NotClassicalError(QVoltageError, ValueError):
    pass


class ToleranceError(QVoltageError):
    """Eigenvalue clusters could not be separated at the requested tolerance."""


class SizeLimitError(QVoltageError, ValueError):
    pass
