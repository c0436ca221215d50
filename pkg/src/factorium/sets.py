"""Small value types shared by several engines."""

from __future__ import annotations

from dataclasses import dataclass

from .qlinear import MultClosure


@dataclass(frozen=True)
class Undetermined:
    reason: str

    def __str__(self):
        return "undetermined"

    def to_json(self):
        return {"undetermined": self.reason}


@dataclass(frozen=True)
class ClosedMultSet:
    """A closed subset of [0, inf) of the form ({0} or nothing) ∪ (closed subgroup of R_+)."""

    zero: bool
    closure: MultClosure

    @property
    def kind(self) -> str:
        return self.closure.kind

    @property
    def generator(self):
        return self.closure.generator

    def normal_form(self) -> str:
        k = self.closure.kind
        if k == "cyclic":
            body = f"({self.closure.generator})^ℤ"
            return f"{{0}} ∪ {body}" if self.zero else body
        if k == "dense":
            return "ℝ≥0" if self.zero else "ℝ>0"
        if k == "trivial":
            return "{0,1}" if self.zero else "{1}"
        return "undetermined"

    __str__ = normal_form

    def to_json(self):
        out = {"normal_form": self.normal_form(), "form": self.closure.kind, "zero": self.zero}
        if self.closure.kind == "cyclic":
            out["generator"] = str(self.closure.generator)
        if self.closure.missing:
            out["missing_facts"] = list(self.closure.missing)
        return out
