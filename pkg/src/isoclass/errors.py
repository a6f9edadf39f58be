"""Exception types shared across the package."""


class IsoclassError(Exception):
    pass


class CapacityError(IsoclassError):
    """A closure or enumeration grew past its configured cap."""


class DomainError(IsoclassError, ValueError):
    """Input lies outside the domain an operation is defined on."""


class PreconditionError(IsoclassError, ValueError):
    pass


class InvariantViolation(IsoclassError):
    """A structural claim that must hold for the input was found to fail."""


class ClassificationError(IsoclassError):
    pass


class CertificateError(IsoclassError):
    def __init__(self, message, relator=None):
        super().__init__(message)
        self.relator = relator
