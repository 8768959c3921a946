"""Exception hierarchy shared by every module."""


class LabError(Exception):
    """Base class for all errors raised by laxcyl."""


class ValidationError(LabError):
    """An object failed an invariant check; ``witness`` says where."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CycleError(ValidationError):
    pass


class DuplicateId(ValidationError):
    pass


class UnknownElement(LabError):
    pass


class SizeCapExceeded(LabError):
    pass


class ShapeMismatch(LabError):
    pass


class EmptyIndex(LabError):
    pass


class NonFunctorialTransitions(ValidationError):
    pass


class NonFunctorial(ValidationError):
    pass


class NotAHomomorphism(ValidationError):
    pass


class RingAxiomError(ValidationError):
    pass


class UnknownPreset(LabError):
    pass


class NoLimitsProvider(LabError):
    pass


class NoColimitsProvider(LabError):
    pass


class NotUpClosed(LabError):
    pass


class NotPseudoSchematic(LabError):
    pass


class LocalRingMismatch(ValidationError):
    pass


class NotAFlatImmersion(LabError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotConnected(LabError):
    pass


class DisconnectedFiber(LabError):
    pass


class SchemaError(LabError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


class UnknownSuite(LabError):
    pass
