from typing import Optional


class MoatwalkError(Exception):
    """Base class for domain errors; the CLI maps these to exit code 1."""


class CapacityError(MoatwalkError):
    pass


class InvalidStartError(MoatwalkError):
    pass


class RegionError(MoatwalkError):
    pass


class DegenerateInputError(MoatwalkError):
    pass


class SpecMismatchError(MoatwalkError):
    pass


class CacheFormatError(MoatwalkError):
    pass


class ParseError(MoatwalkError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
