from __future__ import annotations


class FracDecompError(Exception):
    """Base class for all package errors."""


class InputError(FracDecompError):
    """Malformed input: bad file, bad arguments, invalid clique."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeLimitError(FracDecompError):
    """A clique family or LP would exceed the configured size cap."""


class StageError(FracDecompError):
    """A construction could not be carried out on this instance.

    ``stage`` names the pipeline stage, ``construction`` the object that
    could not be built, and ``witness`` carries the offending edge, vertex
    or value so the failure can be reproduced.
    """

    def __init__(
        self,
        stage: str,
        construction: str,
        message: str,
        witness: object = None,
    ) -> None:
        self.stage = stage
        self.construction = construction
        self.witness = witness
        text = f"[{stage}] {construction}: {message}"
        if witness is not None:
            text += f" (witness: {witness!r})"
        super().__init__(text)

    def as_dict(self) -> dict[str, object]:
        return {
            "stage": self.stage,
            "construction": self.construction,
            "message": str(self),
            "witness": _jsonable(self.witness),
        }


def _jsonable(value: object) -> object:
    if isinstance(value, (tuple, list, set, frozenset)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)
