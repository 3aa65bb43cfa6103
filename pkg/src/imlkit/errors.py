class ImlError(Exception):
    """Base class for every error raised by imlkit."""


class NotPreorder(ImlError):
    pass


class NotUpClosed(ImlError):
    pass


class UnknownPredicate(ImlError):
    pass


class PreconditionFailed(ImlError):
    pass


class NotReflexive(PreconditionFailed):
    pass


class SigmaNotClosed(ImlError):
    pass


class WrongCarrier(ImlError):
    pass


class UnknownSchema(ImlError):
    pass


class ScriptError(ImlError):
    """Malformed proof script (not a failed check)."""


class FormatError(ImlError):
    """Malformed model or frame file."""
