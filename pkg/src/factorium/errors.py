"""Error types shared by the engines and mapped to CLI exit codes."""

from .exactnum import MagnitudeOverflow, PrecisionCapExceeded
from .qlinear.registry import RegistryError


class SpecError(ValueError):
    """A construction spec is malformed; `pointer` is a JSON pointer to the offending node."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(message)
        self.pointer = pointer


class MissingFactError(LookupError):
    """A rule needs an independence fact the registry cannot supply."""

    def __init__(self, message: str, fact: str = ""):
        super().__init__(message)
        self.fact = fact


class HypothesisError(ValueError):
    """A theorem's hypothesis fails for the given construction."""

    def __init__(self, hypothesis: str, detail: str):
        super().__init__(f"hypothesis {hypothesis} fails: {detail}")
        self.hypothesis = hypothesis
        self.detail = detail


class UndecidedError(ValueError):
    pass


__all__ = [
    "HypothesisError", "MagnitudeOverflow", "MissingFactError", "PrecisionCapExceeded",
    "RegistryError", "SpecError", "UndecidedError",
]
