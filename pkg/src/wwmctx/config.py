"""JSON construction configs: schema, semantic checks and loading."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .constructions import WitnessConstruction, construction_from_config

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_VECTOR = {"type": "array", "items": _COMPLEX, "minItems": 1}
_INDEX_LIST = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_BOUND = {"oneOf": [{"const": "enumerate"}, {"type": "number"}]}

_WITNESS = {
    "type": "object",
    "required": ["kind"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "kind": {"enum": ["sum_projectors", "sum_pair_products", "dichotomic_quadratic"]},
        "classical_bound": _BOUND,
        "parameters": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "indices": _INDEX_LIST,
                "pairs": {
                    "oneOf": [
                        {"const": "non_adjacent"},
                        {"type": "array", "minItems": 1,
                         "items": {"type": "array", "items": {"type": "integer", "minimum": 0},
                                   "minItems": 2, "maxItems": 2}},
                    ]
                },
                "basis_completeness": {"type": "boolean"},
            },
        },
    },
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name", "dimension", "rays", "witness"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "dimension": {"type": "integer", "minimum": 2},
        "labels": {"type": "array", "items": {"type": "string"}},
        "rays": {"type": "array", "items": _VECTOR, "minItems": 1},
        "adjacency": {
            "oneOf": [
                {"const": "auto"},
                {"type": "array", "items": {"type": "array", "items": {"enum": [0, 1, True, False]}}},
            ]
        },
        "primary": {"type": "string"},
        "witness": {"oneOf": [_WITNESS, {"type": "array", "items": _WITNESS, "minItems": 1}]},
        "classical_bound": _BOUND,
        "states": {
            "oneOf": [
                {"const": "stabilizer_all"},
                {"type": "array", "minItems": 1, "items": {
                    "oneOf": [
                        _VECTOR,
                        {"type": "object", "required": ["amplitudes"], "additionalProperties": False,
                         "properties": {"label": {"type": "string"}, "amplitudes": _VECTOR}},
                    ]
                }},
            ]
        },
    },
}


class ConfigError(ValueError):
    """Invalid construction config; ``errors`` lists ``path: message`` strings."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p**0.5) + 1))


def _supported_dimension(dim: int) -> bool:
    if dim & (dim - 1) == 0:
        return True
    for p in range(3, dim + 1, 2):
        if _is_prime(p) and dim % p == 0:
            while dim % p == 0:
                dim //= p
            return dim == 1
    return False


def _semantic_errors(cfg: dict) -> list[str]:
    errs = []
    dim = cfg["dimension"]
    if not _supported_dimension(dim):
        errs.append(f"$.dimension: {dim} is neither a power of 2 nor a power of an odd prime")
    rays = cfg["rays"]
    m = len(rays)
    for i, r in enumerate(rays):
        if len(r) != dim:
            errs.append(f"$.rays[{i}]: length {len(r)} does not match dimension {dim}")
        elif all(re == 0 and im == 0 for re, im in r):
            errs.append(f"$.rays[{i}]: zero vector")
    if "labels" in cfg:
        if len(cfg["labels"]) != m:
            errs.append(f"$.labels: {len(cfg['labels'])} labels for {m} rays")
        elif len(set(cfg["labels"])) != m:
            errs.append("$.labels: labels must be distinct")
    adj = cfg.get("adjacency", "auto")
    if adj != "auto":
        a = np.array(adj, dtype=int)
        if a.shape != (m, m):
            errs.append(f"$.adjacency: shape {a.shape} does not match {m} rays")
        else:
            if (a != a.T).any():
                errs.append("$.adjacency: matrix is not symmetric")
            if np.diag(a).any():
                errs.append("$.adjacency: diagonal must be zero")
    if m > 24:
        errs.append(f"$.rays: {m} rays exceed the enumeration limit of 24 variables")
    specs = cfg["witness"] if isinstance(cfg["witness"], list) else [cfg["witness"]]
    names = []
    for k, spec in enumerate(specs):
        where = f"$.witness[{k}]" if isinstance(cfg["witness"], list) else "$.witness"
        names.append(spec.get("name", spec["kind"]))
        params = spec.get("parameters", {}) or {}
        for i, idx in enumerate(params.get("indices", [])):
            if idx >= m:
                errs.append(f"{where}.parameters.indices[{i}]: index {idx} out of range for {m} rays")
        pairs = params.get("pairs")
        if isinstance(pairs, list):
            for i, (a_, b_) in enumerate(pairs):
                if a_ >= m or b_ >= m:
                    errs.append(f"{where}.parameters.pairs[{i}]: index out of range for {m} rays")
        if spec["kind"] == "sum_projectors" and "pairs" in params:
            errs.append(f"{where}.parameters.pairs: not used by sum_projectors")
        if spec["kind"] == "dichotomic_quadratic" and params:
            errs.append(f"{where}.parameters: dichotomic_quadratic takes no parameters")
    if len(set(names)) != len(names):
        errs.append("$.witness: witness names must be distinct")
    if "primary" in cfg and cfg["primary"] not in names:
        errs.append(f"$.primary: no witness named {cfg['primary']!r}")
    states = cfg.get("states", "stabilizer_all")
    if states == "stabilizer_all":
        if dim & (dim - 1) == 0 or not _is_prime(dim):
            errs.append("$.states: 'stabilizer_all' is available for odd prime dimensions only")
    else:
        for i, s in enumerate(states):
            amps = s["amplitudes"] if isinstance(s, dict) else s
            if len(amps) != dim:
                errs.append(f"$.states[{i}]: length {len(amps)} does not match dimension {dim}")
            elif all(re == 0 and im == 0 for re, im in amps):
                errs.append(f"$.states[{i}]: zero vector")
    return errs


def _specific(error):
    # For oneOf failures, descend into the branch whose top-level type matched the
    # instance and report its deepest error.
    while error.context:
        branches: dict[int, list] = {}
        for sub in error.context:
            branches.setdefault(sub.relative_schema_path[0], []).append(sub)
        viable = [errs for errs in branches.values()
                  if not any(e.validator in ("type", "const") and not e.relative_path for e in errs)]
        if len(viable) != 1:
            return error
        error = max(viable[0], key=lambda e: len(e.absolute_path))
    return error


def validate_config(cfg) -> dict:
    """Schema and semantic validation; raises :class:`ConfigError` listing every problem."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errs = sorted((_specific(e) for e in validator.iter_errors(cfg)),
                  key=lambda e: list(map(str, e.absolute_path)))
    if errs:
        raise ConfigError([f"{_path(e.absolute_path)}: {e.message}" for e in errs])
    sem = _semantic_errors(cfg)
    if sem:
        raise ConfigError(sem)
    return cfg


def load_config(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})"]) from None
    return validate_config(cfg)


def build_from_config(cfg_or_path) -> WitnessConstruction:
    cfg = load_config(cfg_or_path) if isinstance(cfg_or_path, (str, Path)) else validate_config(cfg_or_path)
    return construction_from_config(cfg)
