"""Exception hierarchy shared by the library and the CLI."""


class FreeCatError(Exception):
    """Base class for all library errors."""


class SignatureError(FreeCatError):
    """Malformed signature or model file, or a missing declaration."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TypeMismatch(FreeCatError):
    """Two boundaries that should agree do not."""


class LevelError(TypeMismatch):
    """A constructor was used below the level that provides it."""


class ParseError(FreeCatError):
    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"position {pos}: {message}")


class NoDaggerError(FreeCatError):
    """The signature declares no dagger pairing."""


class ScalarMonoidError(FreeCatError):
    """A registered scalar monoid or loop evaluation failed its self-test."""


class ModelError(FreeCatError):
    """Missing interpretation or inconsistent matrix shapes."""
