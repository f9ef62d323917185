"""Machine-readable JSON reports and their schema."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Dict

import jsonschema

SPEC_VERSION = "1.0"

_number = {"type": "number"}
_int = {"type": "integer"}

REPORT_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["spec_version", "command", "config", "fingerprints", "checks"],
    "properties": {
        "spec_version": {"const": SPEC_VERSION},
        "command": {"type": "string"},
        "config": {"type": "object"},
        "fingerprints": {
            "type": "object",
            "required": ["config"],
            "properties": {
                "config": {"type": "string"},
                "histogram_cache": {"type": ["string", "null"]},
            },
        },
        "model": {
            "type": "object",
            "required": ["r", "degrees"],
            "properties": {"r": _int, "degrees": {"type": "array", "items": _int}},
        },
        "invariants": {
            "type": "object",
            "required": ["a", "b", "balanced", "witness", "restrictions"],
            "properties": {
                "a": {"type": "string"},
                "b": _int,
                "balanced": {"type": "boolean"},
                "witness": {"type": ["array", "null"], "items": _int},
                "restrictions": {"type": "array"},
            },
        },
        "curve": {
            "type": "object",
            "required": ["bound", "points", "t_min", "t_max", "n_min", "n_max"],
        },
        "fit": {
            "type": "object",
            "required": ["a_hat", "b_hat", "c_hat", "residual"],
            "properties": {k: _number for k in ("a_hat", "b_hat", "c_hat", "residual")},
        },
        "well_roundedness": {
            "type": "array",
            "items": {"type": "object", "required": ["kappa", "T", "ratio"]},
        },
        "pole_probe": {"type": "object", "required": ["s", "values", "tail_bounds", "spread"]},
        "saturation_profile": {"type": "object", "required": ["witness", "T", "fractions"]},
        "local_densities": {
            "type": "array",
            "items": {"type": "object", "required": ["p", "depth", "mu", "tail", "regularized", "deviation"]},
        },
        "subgroups": {"type": "object", "required": ["group", "n", "found"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "passed"],
                "properties": {"name": {"type": "string"}, "passed": {"type": "boolean"}},
            },
        },
    },
}


def fraction_str(x) -> str:
    return str(Fraction(x))


def config_fingerprint(config: Dict[str, Any]) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def validate(report: Dict[str, Any]) -> None:
    jsonschema.validate(report, REPORT_SCHEMA)


def dumps(report: Dict[str, Any]) -> str:
    validate(report)
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def all_passed(report: Dict[str, Any]) -> bool:
    return all(c["passed"] for c in report.get("checks", []))
