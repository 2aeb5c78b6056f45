"""File formats, report serialization and the generator mini-language."""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from . import config
from .errors import BadParameter, ParseError, UnknownGenerator, ValidationError
from .functions import (
    GroupFunction,
    character,
    constant,
    gen_quadratic_phase,
    gen_random_unimodular,
)
from .groups import make_group
from .regularity import Partition


def _clean(obj: Any) -> Any:
    """JSON-ready copy: numpy scalars unwrapped, non-finite floats as null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps(doc: Any, indent: int | None = 1) -> str:
    # float repr is the shortest string that round-trips the double exactly
    return json.dumps(_clean(doc), indent=indent, allow_nan=False) + "\n"


def write_json(doc: Any, path: str | Path | None) -> str:
    text = dumps(doc)
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)
    return text


def _resolve_pointer(doc: Any, pointer: str) -> Any:
    for part in filter(None, pointer.split("/")):
        try:
            doc = doc[int(part)] if isinstance(doc, list) else doc[part]
        except (KeyError, IndexError, ValueError) as exc:
            raise ParseError(f"pointer segment {part!r} not found") from exc
    return doc


def read_document(spec: str) -> Any:
    """Load ``path`` or ``path#a/b/0`` (a slash pointer into the JSON)."""
    path, _, pointer = spec.partition("#")
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return _resolve_pointer(doc, pointer)


def load_function(spec: str, group: list[int] | None = None, cap: int = config.ORDER_CAP) -> GroupFunction:
    path = spec.partition("#")[0]
    if path.endswith(".csv"):
        if group is None:
            raise ParseError("CSV input needs --group")
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc}") from exc
        return GroupFunction.from_csv(text, make_group(group, cap=cap))
    doc = read_document(spec)
    if not isinstance(doc, dict) or "values" not in doc:
        raise ParseError(f"{spec} does not hold a function document")
    if doc.get("kind", "function") != "function":
        raise ParseError(f"{spec} holds a {doc['kind']!r}, not a function")
    return GroupFunction.from_dict(doc, cap=cap)


def load_functions(spec: str) -> list[GroupFunction]:
    """A list of functions, or a decomposition report's components."""
    doc = read_document(spec)
    if isinstance(doc, dict):
        for key in ("components",):
            if key in doc:
                doc = doc[key]
                break
        else:
            if "result" in doc and "components" in doc["result"]:
                doc = doc["result"]["components"]
    if not isinstance(doc, list):
        raise ParseError(f"{spec} does not hold a list of functions")
    return [GroupFunction.from_dict(d) for d in doc]


def load_partition(spec: str) -> Partition:
    doc = read_document(spec)
    if not isinstance(doc, dict):
        raise ParseError(f"{spec} is not a partition document")
    return Partition.from_dict(doc)


def partition_shorthand(text: str, group) -> Partition:
    """``one``, ``singleton`` or ``mod:M``."""
    if text == "one":
        return Partition.one_cell(group)
    if text in ("singleton", "singletons"):
        return Partition.singletons(group)
    if text.startswith("mod:"):
        try:
            m = int(text[4:])
        except ValueError as exc:
            raise BadParameter(f"bad modulus in {text!r}") from exc
        if m < 1:
            raise BadParameter("modulus must be >= 1")
        return Partition.by_residue(group, m)
    raise BadParameter(f"unknown partition shorthand {text!r}")


# -- generators ------------------------------------------------------------

def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in parts if p]


def _value(text: str):
    text = text.strip()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise BadParameter(f"cannot parse value {text!r}") from exc


def _int(params: dict, key: str, default=None) -> int:
    v = params.get(key, default)
    if v is None:
        raise BadParameter(f"missing parameter {key!r}")
    if isinstance(v, bool) or not isinstance(v, int):
        raise BadParameter(f"{key} must be an integer, got {v!r}")
    return v


def _num(params: dict, key: str, default=None) -> complex:
    v = params.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float, complex)):
        raise BadParameter(f"{key} must be a number, got {v!r}")
    return v


def _group(params: dict, cap: int):
    factors = params.get("group")
    if factors is None and "p" in params:
        factors = [params["p"]]
    if isinstance(factors, int):
        factors = [factors]
    if not isinstance(factors, list):
        raise BadParameter("missing or malformed group=[n1,...]")
    return make_group(factors, cap=cap)


GENERATORS = {
    "quad": {"p", "q", "l", "c"},
    "quadmix": {"p", "q", "c", "noise", "seed"},
    "char": {"group", "m", "c"},
    "noise": {"group", "seed"},
    "const": {"group", "c"},
}


def generator_parse(spec: str, seed: int = 0, cap: int = config.ORDER_CAP) -> GroupFunction:
    """Build a function from ``name:key=val,key=val``.

    quad:p=P,q=Q[,l=L][,c=C]          c * e((q x^2 + l x)/p) on Z_p
    quadmix:p=P,q=[..],c=[..][,noise=S,seed=N]  sum of quadratic phases plus scaled noise
    char:group=[..],m=M[,c=C]         c * chi_m; m is an index or a coordinate list
    noise:group=[..][,seed=N]         seeded unimodular noise
    const:group=[..][,c=C]            constant function
    """
    name, sep, rest = spec.partition(":")
    if not sep:
        rest = ""
    if name not in GENERATORS:
        raise UnknownGenerator(f"unknown generator {name!r}; known: {sorted(GENERATORS)}")
    params = {}
    for item in _split_top(rest):
        key, eq, val = item.partition("=")
        key = key.strip()
        if not eq:
            raise BadParameter(f"expected key=value, got {item!r}")
        if key not in GENERATORS[name]:
            raise BadParameter(f"generator {name!r} does not take {key!r}")
        params[key] = _value(val)
    try:
        if name == "quad":
            g = _group({"p": _int(params, "p")}, cap)
            return gen_quadratic_phase(g, _int(params, "q"), _int(params, "l", 0), _num(params, "c", 1.0))
        if name == "quadmix":
            g = _group({"p": _int(params, "p")}, cap)
            qs, cs = params.get("q"), params.get("c")
            if not isinstance(qs, list) or not isinstance(cs, list) or len(qs) != len(cs):
                raise BadParameter("quadmix needs equal-length lists q=[..] and c=[..]")
            vals = np.zeros(g.order, dtype=complex)
            for q, c in zip(qs, cs):
                vals += gen_quadratic_phase(g, int(q), 0, complex(c)).values
            s = _num(params, "noise", 0.0)
            if s:
                vals += s * gen_random_unimodular(g, _int(params, "seed", seed)).values
            return GroupFunction(g, vals)
        if name == "char":
            g = _group(params, cap)
            m = params.get("m", 0)
            if isinstance(m, int) and g.rank > 1:
                from .groups import element_of

                m = element_of(g, m % g.order)
            return _num(params, "c", 1.0) * character(g, m)
        if name == "noise":
            return gen_random_unimodular(_group(params, cap), _int(params, "seed", seed))
        return constant(_group(params, cap), _num(params, "c", 1.0))
    except BadParameter:
        raise
    except ValidationError as exc:
        raise BadParameter(f"{spec}: {exc}") from exc
