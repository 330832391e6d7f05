class CodingError(ValueError):
    """Base class for every error raised by the coding library."""


class InvalidSpecError(CodingError):
    pass


class PositionError(CodingError):
    pass


class EmptyInputError(CodingError):
    pass


class UnderflowError(CodingError):
    """A forward weight would go negative: corrupted model or mismatched g."""


class UnknownSymbolError(CodingError):
    pass


class EmptyModelError(CodingError):
    pass


class ModelDesyncError(CodingError):
    """Decoder trajectory diverged from the encoder's."""


class TruncatedStreamError(CodingError):
    pass


class HeaderError(CodingError):
    pass


class BadMagicError(HeaderError):
    pass


class NonCanonicalError(HeaderError):
    pass


class SupportMismatchError(CodingError):
    pass


class InvalidDistributionError(CodingError):
    pass


class ParameterError(CodingError):
    """Invalid combination of command or API parameters."""
