from __future__ import annotations


class LtsdError(ValueError):
    """Base class for every error raised by the package."""


class InvalidArgumentError(LtsdError):
    pass


class AutParseError(LtsdError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ResourceLimitError(LtsdError):
    pass


class ShapeError(LtsdError):
    """A composed product does not have the shape its decomposition guarantees."""


def raise_collected(errors: list[str], error_type: type[LtsdError] = InvalidArgumentError) -> None:
    unique = tuple(dict.fromkeys(errors))
    if unique:
        raise error_type("; ".join(unique))
