"""Symbolic reals, independence facts and subgroup arithmetic."""

from .parse import ParseError, parse_expr, parse_positive
from .registry import (
    Answer, BUILTIN_FACTS, Certificate, ConstantDecl, ConstantRegistry, Fact, RegistryError,
)
from .subgroups import (
    AdditiveSubgroup, Closure, Decided, MultClosure, closure_classify_additive, equal,
    includes, intersect, intersect_all, member, mult_closure, replay, subgroup_sum,
)
from .symbolic import Atom, Monomial, PosReal, SymbolicReal, fmt_rational, log_rational

__all__ = [
    "AdditiveSubgroup", "Answer", "Atom", "BUILTIN_FACTS", "Certificate", "Closure",
    "ConstantDecl", "ConstantRegistry", "Decided", "Fact", "Monomial", "MultClosure",
    "ParseError", "PosReal", "RegistryError", "SymbolicReal", "closure_classify_additive",
    "equal", "fmt_rational", "includes", "intersect", "intersect_all", "log_rational",
    "member", "mult_closure", "parse_expr", "parse_positive", "replay", "subgroup_sum",
]
