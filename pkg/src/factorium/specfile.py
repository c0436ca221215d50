"""JSON construction files: schema, validation and conversion to ProductSpec."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .blocks import make_block, parse_q
from .errors import SpecError
from .products import Accumulation, Entry, ProductSpec
from .qlinear import AdditiveSubgroup, ConstantRegistry, ParseError
from .scaling import INF, GammaLayer
from .type3zero import III0Family

_EXPR = {"type": ["string", "integer"]}
_Q = {"type": "string", "minLength": 1}

BLOCK_SCHEMA = {
    "oneOf": [
        {"type": "object", "additionalProperties": False, "required": ["kind", "q"],
         "properties": {"kind": {"const": "SUq2"}, "q": _Q}},
        {"type": "object", "additionalProperties": False, "required": ["kind", "nu", "q"],
         "properties": {"kind": {"const": "Hnuq"}, "nu": _EXPR, "q": _Q}},
        {"type": "object", "additionalProperties": False, "required": ["kind", "F"],
         "properties": {"kind": {"const": "FreeUnitary"},
                        "F": {"type": "array", "minItems": 2, "items": _EXPR}}},
        {"type": "object", "additionalProperties": False, "required": ["kind", "rank"],
         "properties": {"kind": {"const": "DualFreeGroup"}, "rank": {"type": "integer", "minimum": 2}}},
    ]
}

REGISTRY_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "constants": {"type": "array", "items": {
            "type": "object", "additionalProperties": False, "required": ["name", "enclosure"],
            "properties": {"name": {"type": "string", "pattern": "^[A-Za-z_][A-Za-z0-9_]*$"},
                           "description": {"type": "string"},
                           "enclosure": {"type": "array", "minItems": 2, "maxItems": 2,
                                         "items": {"type": ["string", "integer"]}}}}},
        "facts": {"type": "array", "items": {
            "type": "object", "additionalProperties": False, "required": ["id", "independent"],
            "properties": {"id": {"type": "string", "minLength": 1},
                           "independent": {"type": "array", "minItems": 1, "items": {"type": "string"}},
                           "description": {"type": "string"}}}},
    },
}

SPEC_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "anyOf": [{"required": ["entries"]}, {"required": ["family"]}, {"required": ["accumulation"]}],
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "entries": {"type": "array", "items": {
            "type": "object", "additionalProperties": False, "required": ["block", "repeat"],
            "properties": {"block": BLOCK_SCHEMA,
                           "repeat": {"oneOf": [{"const": "inf"}, {"type": "integer", "minimum": 1}]}}}},
        "family": {"type": "object", "additionalProperties": False, "required": ["kind", "s"],
                   "properties": {"kind": {"const": "iii0"},
                                  "s": {"type": "string", "pattern": r"^\s*\d+\s*(/\s*\d+\s*)?$"},
                                  "shift": {"type": "integer", "minimum": 0}}},
        "cross": {"type": "array", "items": BLOCK_SCHEMA},
        "bicrossed": {"type": "object", "additionalProperties": False, "required": ["gamma"],
                      "properties": {"gamma": {"type": "string", "minLength": 1}}},
        "accumulation": {"type": "object", "additionalProperties": False, "required": ["r1", "r2"],
                         "properties": {"r1": _Q, "r2": _Q}},
        "registry": REGISTRY_SCHEMA,
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SPEC_SCHEMA)
_REGISTRY_VALIDATOR = jsonschema.Draft202012Validator(REGISTRY_SCHEMA)


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def validate(data, validator=_VALIDATOR) -> None:
    """Raise SpecError carrying a JSON pointer for the most relevant schema violation."""
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        raise SpecError(err.message, _pointer(err.absolute_path))


def load_registry(path) -> ConstantRegistry:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from None
    validate(data, _REGISTRY_VALIDATOR)
    return ConstantRegistry.from_dict(data)


def spec_from_dict(data, registry: ConstantRegistry | None = None) -> ProductSpec:
    validate(data)
    reg = registry or ConstantRegistry()
    if "registry" in data:
        reg = reg.merged(ConstantRegistry.from_dict(data["registry"]))
    entries = []
    for i, e in enumerate(data.get("entries", ())):
        block = make_block(e["block"], reg, f"/entries/{i}/block")
        entries.append(Entry(block, INF if e["repeat"] == "inf" else e["repeat"]))
    cross = tuple(make_block(b, reg, f"/cross/{i}") for i, b in enumerate(data.get("cross", ())))
    family = None
    if "family" in data:
        fam = data["family"]
        try:
            family = III0Family(fam["s"], fam.get("shift", 0))
        except ValueError as exc:
            raise SpecError(str(exc), "/family/s") from None
    layer = None
    if "bicrossed" in data:
        try:
            gamma = AdditiveSubgroup.parse(data["bicrossed"]["gamma"])
        except (ParseError, ValueError) as exc:
            raise SpecError(f"bad subgroup: {exc}", "/bicrossed/gamma") from None
        for g in gamma.generators():
            reg.check(g)
        layer = GammaLayer(gamma)
    acc = None
    if "accumulation" in data:
        a = data["accumulation"]
        acc = Accumulation(parse_q(a["r1"], reg, "/accumulation/r1"), parse_q(a["r2"], reg, "/accumulation/r2"))
    return ProductSpec(tuple(entries), family, cross, layer, acc, reg, data.get("name", ""))


def load_spec(path, registry: ConstantRegistry | None = None) -> ProductSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from None
    return spec_from_dict(data, registry)


__all__ = ["BLOCK_SCHEMA", "REGISTRY_SCHEMA", "SPEC_SCHEMA", "load_registry", "load_spec", "spec_from_dict", "validate"]
