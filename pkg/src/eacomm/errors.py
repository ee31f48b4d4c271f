"""Exception hierarchy shared by all eacomm modules."""


class EacommError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(EacommError, ValueError):
    """Input rejected before any work was done."""


class ResourceLimit(EacommError):
    """Requested computation exceeds a documented size guard."""


# finite fields
class NotPrime(ValidationError):
    pass


class NotIrreducible(ValidationError):
    pass


class UnsupportedSize(ValidationError, ResourceLimit):
    pass


class FieldMismatch(ValidationError):
    pass


class DivisionByZero(EacommError, ZeroDivisionError):
    pass


# classical codes
class LengthOutOfRange(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class TooLarge(ResourceLimit):
    pass


class DecodeFailure(EacommError):
    """No unique codeword is consistent with the received word."""


# qudit simulation
class OutOfRange(ValidationError):
    pass


class UnknownLabel(ValidationError, KeyError):
    pass


class LabelMismatch(ValidationError):
    pass


class ZeroNorm(EacommError):
    pass


class RegisterTooLarge(ResourceLimit):
    pass


# protocol / bounds
class OddKappa(ValidationError):
    pass


class KTooLarge(ValidationError):
    pass


class UnknownVariant(ValidationError):
    pass
