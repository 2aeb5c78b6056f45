"""Complex-valued functions on a finite abelian group.

Geometry is expectation-normalized: ``inner(f, g) = E_x f(x) conj(g(x))``.
Values are stored densely in canonical mixed-radix order and frozen.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import config
from .errors import BadSubset, GroupMismatch, InvalidP, NotPrimeFactor, ValidationError
from .groups import ElementLike, GroupElement, GroupSpec, make_group, root_table


@dataclass(frozen=True, eq=False)
class GroupFunction:
    group: GroupSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).reshape(-1)
        if v.size != self.group.order:
            raise ValidationError(
                f"{v.size} values for a group of order {self.group.order}"
            )
        if not np.all(np.isfinite(v)):
            raise ValidationError("function values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    # -- arithmetic -------------------------------------------------------
    def _other(self, other):
        if isinstance(other, GroupFunction):
            _same_group(self, other)
            return other.values
        return other

    def __add__(self, other):
        return GroupFunction(self.group, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GroupFunction(self.group, self.values - self._other(other))

    def __rsub__(self, other):
        return GroupFunction(self.group, self._other(other) - self.values)

    def __mul__(self, other):
        return GroupFunction(self.group, self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return GroupFunction(self.group, self.values / scalar)

    def __neg__(self):
        return GroupFunction(self.group, -self.values)

    def conj(self) -> "GroupFunction":
        return GroupFunction(self.group, self.values.conj())

    def __call__(self, x: ElementLike) -> complex:
        x = self.group.elem(x)
        return complex(self.values[int(np.dot(x.coords, self.group.strides))])

    def as_array(self) -> np.ndarray:
        """Values reshaped to the factor grid (read-only view)."""
        return self.values.reshape(self.group.factors)

    def allclose(self, other: "GroupFunction", atol: float = 1e-12) -> bool:
        _same_group(self, other)
        return bool(np.allclose(self.values, other.values, rtol=0, atol=atol))

    def norm(self) -> float:
        return lp_norm(self, 2)

    # -- serialization ----------------------------------------------------
    def to_dict(self, kind: str | None = None) -> dict:
        d: dict = {"group": list(self.group.factors)}
        if kind is not None:
            d["kind"] = kind
        d["values"] = [[float(z.real), float(z.imag)] for z in self.values]
        return d

    @classmethod
    def from_dict(cls, d: dict, cap: int = config.ORDER_CAP) -> "GroupFunction":
        try:
            g = make_group(d["group"], cap=cap)
            vals = np.array(d["values"], dtype=float)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed function document: {exc}") from exc
        if vals.ndim != 2 or vals.shape[1] != 2:
            raise ValidationError("values must be a list of [re, im] pairs")
        return cls(g, vals[:, 0] + 1j * vals[:, 1])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "GroupFunction":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "re", "im"])
        for i, z in enumerate(self.values):
            w.writerow([i, repr(float(z.real)), repr(float(z.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, group: GroupSpec) -> "GroupFunction":
        rows = list(csv.DictReader(io.StringIO(text)))
        vals = np.full(group.order, np.nan, dtype=complex)
        try:
            for r in rows:
                vals[int(r["index"])] = float(r["re"]) + 1j * float(r["im"])
        except (KeyError, ValueError, IndexError) as exc:
            raise ValidationError(f"malformed CSV row: {exc}") from exc
        if np.isnan(vals).any():
            raise ValidationError("CSV does not cover every group element")
        return cls(group, vals)


def _same_group(f: GroupFunction, g: GroupFunction):
    if f.group != g.group:
        raise GroupMismatch(f"{f.group} vs {g.group}")


def constant(g: GroupSpec, c: complex = 1.0) -> GroupFunction:
    return GroupFunction(g, np.full(g.order, c, dtype=complex))


def character(g: GroupSpec, m: ElementLike) -> GroupFunction:
    from .groups import character_vector

    return GroupFunction(g, character_vector(g, m))


def indicator(g: GroupSpec, mask) -> GroupFunction:
    return GroupFunction(g, np.asarray(mask, dtype=float))


def inner(f: GroupFunction, g: GroupFunction) -> complex:
    _same_group(f, g)
    return complex(np.vdot(g.values, f.values) / f.group.order)


def lp_norm(f: GroupFunction, p: float = 2) -> float:
    if p == np.inf or p == "inf":
        return float(np.max(np.abs(f.values)))
    if not isinstance(p, (int, float)) or not p >= 1:
        raise InvalidP(f"p must be >= 1 or inf, got {p!r}")
    a = np.abs(f.values)
    if p == 2:
        return float(np.sqrt(np.mean(a * a)))
    return float(np.mean(a**p) ** (1.0 / p))


def shift_values(g: GroupSpec, values: np.ndarray, a: GroupElement) -> np.ndarray:
    """x -> values(x + a) along the trailing axis."""
    lead = values.shape[:-1]
    arr = values.reshape(lead + g.factors)
    axes = tuple(range(len(lead), len(lead) + g.rank))
    arr = np.roll(arr, tuple(-c for c in a.coords), axis=axes)
    return arr.reshape(lead + (g.order,))


def shift_stack(g: GroupSpec, values: np.ndarray) -> np.ndarray:
    """S[..., t, x] = values[..., x + t] for every t."""
    if g.order <= config.TABLE_CAP:
        return values[..., g.addition_table]
    out = np.empty(values.shape[:-1] + (g.order, g.order), dtype=values.dtype)
    for i, t in enumerate(g.elements()):
        out[..., i, :] = shift_values(g, values, t)
    return out


def shift(f: GroupFunction, a: ElementLike) -> GroupFunction:
    a = f.group.elem(a)
    return GroupFunction(f.group, shift_values(f.group, f.values, a))


def delta(f: GroupFunction, t: ElementLike) -> GroupFunction:
    """x -> f(x + t) conj(f(x))."""
    t = f.group.elem(t)
    return GroupFunction(f.group, shift_values(f.group, f.values, t) * f.values.conj())


def delta_multi(f: GroupFunction, ts: Iterable[ElementLike]) -> GroupFunction:
    for t in ts:
        f = delta(f, t)
    return f


def delta_all(values: np.ndarray, g: GroupSpec) -> np.ndarray:
    """D[..., t, x] = v(x + t) conj(v(x)) for all t at once."""
    return shift_stack(g, values) * values.conj()[..., None, :]


def psi_eval(
    g: GroupSpec, x: ElementLike, ts: Sequence[ElementLike], S: Iterable[int]
) -> GroupElement:
    """x + sum of t_i over i in S; S holds 1-based positions into ts."""
    S = set(S)
    d = len(ts)
    if not S <= set(range(1, d + 1)):
        raise BadSubset(f"subset {sorted(S)} not contained in [1..{d}]")
    coords = np.array(g.elem(x).coords, dtype=np.int64)
    for i in S:
        coords = coords + np.array(g.elem(ts[i - 1]).coords)
    return g.elem(coords % np.array(g.factors))


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def gen_quadratic_phase(
    g: GroupSpec, q: int, l: int = 0, c: complex = 1.0
) -> GroupFunction:
    """x -> c * exp(2 pi i (q x^2 + l x) / p) on Z_p."""
    if g.rank != 1 or not _is_prime(g.factors[0]):
        raise NotPrimeFactor(f"quadratic phases need Z_p with p prime, got {g}")
    p = g.factors[0]
    x = np.arange(p)
    vals = c * root_table(p)[(q * x * x + l * x) % p]
    return GroupFunction(g, vals)


def gen_random_unimodular(g: GroupSpec, seed: int) -> GroupFunction:
    """Independent uniform phases from numpy's PCG64 stream seeded with ``seed``."""
    rng = np.random.default_rng(seed)
    return GroupFunction(g, np.exp(2j * np.pi * rng.random(g.order)))


def correlation(f: GroupFunction, g: GroupFunction) -> float:
    """|inner(f, g)| / (|f|_2 |g|_2); 0 if either vanishes."""
    nf, ng = lp_norm(f), lp_norm(g)
    if nf == 0 or ng == 0:
        return 0.0
    return abs(inner(f, g)) / (nf * ng)
