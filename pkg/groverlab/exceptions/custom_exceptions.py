"""
Custom exceptions for GroverLab
Every exception carries the exit code the command line reports for it
"""

from typing import Optional


EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_VERIFICATION_FAILED = 2


class GroverLabException(Exception):
    """Base exception for GroverLab"""
    def __init__(self, message: str, exit_code: int = EXIT_DOMAIN_ERROR):
        self.message = message
        self.exit_code = exit_code
        super().__init__(message)


class ValidationException(GroverLabException):
    """Validation exception"""
    def __init__(self, message: str = "Validation error"):
        super().__init__(message, EXIT_DOMAIN_ERROR)


class ParameterOutOfRangeException(ValidationException):
    """A numeric parameter lies outside its admissible range"""
    def __init__(self, parameter_name: str, message: Optional[str] = None):
        self.parameter_name = parameter_name
        super().__init__(message or f"{parameter_name} out of range")


class SizeLimitException(ValidationException):
    """Problem size exceeds what an engine or check can handle"""
    def __init__(self, message: str = "Size limit exceeded"):
        super().__init__(message)


class DimensionMismatchException(GroverLabException):
    """Operands live in Hilbert spaces of different dimension"""
    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Dimension mismatch: expected {expected}, got {actual}")


class NonUnitaryException(GroverLabException):
    """Operator or phase factor is not unitary"""
    def __init__(self, message: str = "Operator is not unitary"):
        super().__init__(message)


class NonFiniteAmplitudeException(GroverLabException):
    """NaN or infinity in a state or matrix"""
    def __init__(self, message: str = "Amplitudes must be finite"):
        super().__init__(message)


class CircuitSyntaxException(GroverLabException):
    """Malformed circuit text"""
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class InvalidGateException(GroverLabException):
    """Gate record violates its kind's constraints"""
    def __init__(self, message: str = "Invalid gate"):
        super().__init__(message)


class InsufficientWorkQubitsException(GroverLabException):
    """Decomposition needs more work qubits than were provided"""
    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(f"Insufficient work qubits: {required} required, {available} available")


class VerificationFailedException(GroverLabException):
    """One or more equivalence checks failed"""
    def __init__(self, failed_checks: list[str]):
        self.failed_checks = failed_checks
        super().__init__(
            "Verification failed: " + ", ".join(failed_checks),
            EXIT_VERIFICATION_FAILED,
        )


def to_exit_code(exc: BaseException) -> int:
    """Convert any exception to a command-line exit code"""
    if isinstance(exc, GroverLabException):
        return exc.exit_code
    return EXIT_DOMAIN_ERROR
