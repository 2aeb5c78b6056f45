"""JSON Schemas (draft 2020-12) for the file formats and CLI reports."""

_num = {"type": ["number", "null"]}
_pair = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_factors = {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1}

FUNCTION = {
    "type": "object",
    "required": ["group", "values"],
    "properties": {
        "group": _factors,
        "kind": {"enum": ["function", "spectrum"]},
        "values": {"type": "array", "items": _pair},
    },
}

PARTITION = {
    "type": "object",
    "required": ["group", "cells"],
    "properties": {
        "group": _factors,
        "cells": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
}

TENSOR = {
    "type": "object",
    "required": ["group", "k", "shape", "values"],
    "properties": {
        "group": _factors,
        "k": {"type": "integer", "minimum": 1},
        "shape": {"type": "array", "items": {"type": "integer"}},
        "values": {"type": "array", "items": _pair},
    },
}

DECOMPOSITION = {
    "type": "object",
    "required": [
        "order", "epsilon", "delta", "seed", "eigenvalues", "components",
        "residual", "residual_uk", "cross_gram",
    ],
    "properties": {
        "order": {"enum": [1, 2]},
        "epsilon": {"type": "number"},
        "delta": {"type": "number"},
        "seed": {"type": "integer"},
        "eigenvalues": {"type": "array", "items": {"type": "number"}},
        "components": {"type": "array", "items": FUNCTION},
        "residual": FUNCTION,
        "residual_uk": {"type": "number", "minimum": 0},
        "cross_gram": {"type": "number", "minimum": 0},
    },
}

_clause = {
    "type": "object",
    "required": ["name", "value", "bound", "pass"],
    "properties": {"name": {"type": "string"}, "value": _num, "bound": _num, "pass": {"type": "boolean"}},
}

COMPLEXITY = {
    "type": "object",
    "required": ["k", "n_params", "eps_params", "clauses", "cells", "pass"],
    "properties": {
        "k": {"type": "integer"},
        "clauses": {"type": "array", "items": _clause},
        "cells": {"type": "array"},
        "pass": {"type": "boolean"},
    },
}

CHARACTER_TEST = {
    "type": "object",
    "required": ["k", "epsilon", "residual_estimate", "samples", "seed", "mode", "pass"],
    "properties": {
        "residual_estimate": {"type": "number", "minimum": 0},
        "samples": {"type": "integer", "minimum": 1},
        "mode": {"enum": ["exhaustive", "sampled"]},
        "pass": {"type": "boolean"},
    },
}

RESULTS = {
    "gowers": {
        "type": "object",
        "required": ["k", "u_k"],
        "properties": {"k": {"type": "integer"}, "u_k": {"type": "number", "minimum": 0}},
    },
    "fourier": {
        "type": "object",
        "required": ["eps", "u2", "spectrum"],
        "properties": {"u2": {"type": "number"}, "spectrum": FUNCTION},
    },
    "decompose": DECOMPOSITION,
    "multilinear": {
        "type": "object",
        "required": ["k", "mean", "max_abs", "symmetry_defect", "nonvanishing"],
        "properties": {"tensor": TENSOR, "mean": _pair},
    },
    "character-test": CHARACTER_TEST,
    "complexity": COMPLEXITY,
    "pipeline": {
        "type": "object",
        "required": ["k", "decomposition", "complexity", "residual_uk", "certified"],
        "properties": {"decomposition": DECOMPOSITION, "complexity": COMPLEXITY},
    },
    "additivity": {
        "type": "object",
        "required": ["k", "lhs", "rhs", "gap"],
        "properties": {"gap": {"type": "number", "minimum": 0}},
    },
}


def report_schema(command: str) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["hofa_version", "command", "config", "group", "result"],
        "properties": {
            "hofa_version": {"type": "string"},
            "command": {"const": command},
            "config": {"type": "object", "required": ["seed", "command"]},
            "group": _factors,
            "result": RESULTS[command],
        },
    }
