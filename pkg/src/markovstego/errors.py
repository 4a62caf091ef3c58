"""Exception hierarchy shared by the model, partition and codec layers."""


class StegoError(Exception):
    """Base class for every error raised by this package."""


class DegenerateModel(StegoError, ValueError):
    """The corpus yields a chain whose start state cannot branch."""


class MalformedModelFile(StegoError, ValueError):
    """A serialized model failed validation."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at byte {position})"
        super().__init__(message)
        self.position = position


class NoOutboundState(StegoError):
    """Partitioning was requested for a state without outbound edges."""


class NumberOutOfRange(StegoError, ValueError):
    pass


class PayloadTooLarge(StegoError, ValueError):
    pass


class ConfigMismatch(StegoError):
    """Encoder and decoder configuration (or model) disagree."""


class DecodeError(StegoError):
    """The text is not something this model/configuration could have produced."""


class StateNotInPartition(DecodeError):
    pass


class TextExhausted(DecodeError):
    """The text ended before the range converged to a single number."""


class BadHeader(DecodeError):
    pass


class UnknownWord(DecodeError):
    pass
