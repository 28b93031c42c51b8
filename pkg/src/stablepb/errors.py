class StablePBError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(StablePBError, ValueError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class SizeError(StablePBError, ValueError):
    """An exhaustive procedure was asked to scan a domain that is too large."""


class NotAModelError(StablePBError, ValueError):
    pass


class NormalizationError(StablePBError, ValueError):
    pass
