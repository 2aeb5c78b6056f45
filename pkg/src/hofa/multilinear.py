"""The k-linear representation ``V_k(f)(t_1..t_k) = E_x Delta_{t_1..t_k} f(x)``."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import config
from .errors import (
    EnumerationTooLarge,
    InvalidOrder,
    NotBilinear,
    NotPrimeCyclic,
    NotUnimodular,
    ValidationError,
)
from .functions import GroupFunction, _is_prime, delta_all, shift_values
from .gowers import gowers_norm
from .groups import GroupSpec, make_group, root_table

_BUDGET = 1 << 22


@dataclass(frozen=True, eq=False)
class MultilinearTensor:
    group: GroupSpec
    k: int
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.group.order,) * self.k:
            raise ValidationError(f"tensor shape {v.shape} does not match A^{self.k}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def mean(self) -> complex:
        return complex(self.values.mean())

    def to_dict(self) -> dict:
        flat = self.values.reshape(-1)
        return {
            "group": list(self.group.factors),
            "k": self.k,
            "shape": [self.group.order] * self.k,
            "values": [[float(z.real), float(z.imag)] for z in flat],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MultilinearTensor":
        g = make_group(d["group"])
        vals = np.array(d["values"], dtype=float)
        arr = (vals[:, 0] + 1j * vals[:, 1]).reshape(d["shape"])
        return cls(g, int(d["k"]), arr)


def _vt(values: np.ndarray, g: GroupSpec, k: int) -> np.ndarray:
    if k == 0:
        return values.mean(axis=-1)
    n = g.order
    if values.size * n <= _BUDGET:
        return _vt(delta_all(values, g), g, k - 1)
    if values.ndim == 1:
        conj = values.conj()
        return np.stack(
            [_vt(shift_values(g, values, t) * conj, g, k - 1) for t in g.elements()]
        )
    # peel off the leading index to bound memory
    return np.stack([_vt(values[i], g, k) for i in range(values.shape[0])])


def vtilde(f: GroupFunction, k: int, cap: int = config.EVAL_CAP) -> MultilinearTensor:
    if int(k) != k or k < 1:
        raise InvalidOrder(f"k must be >= 1, got {k!r}")
    n = f.group.order
    if n ** (k + 1) > cap:
        raise EnumerationTooLarge(f"|A|^{k + 1} = {n ** (k + 1)} exceeds cap {cap}")
    return MultilinearTensor(f.group, int(k), _vt(f.values, f.group, int(k)))


def symmetry_defect(T: MultilinearTensor) -> float:
    worst = 0.0
    for i, j in combinations(range(T.k), 2):
        worst = max(worst, float(np.max(np.abs(T.values - T.values.swapaxes(i, j)))))
    return worst


@dataclass(frozen=True)
class NonvanishingReport:
    k: int
    theta: float
    uk1: float
    max_abs: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "theta": self.theta,
            "uk1": self.uk1,
            "max_abs": self.max_abs,
            "pass": self.passed,
        }


def nonvanishing_check(
    f: GroupFunction, k: int, theta: float, cap: int = config.EVAL_CAP
) -> NonvanishingReport:
    """If U_{k+1}(f) exceeds theta, V_k(f) must have a nonzero entry."""
    T = vtilde(f, k, cap)
    uk1 = gowers_norm(f, k + 1)
    max_abs = float(np.max(np.abs(T.values)))
    return NonvanishingReport(int(k), float(theta), uk1, max_abs, uk1 <= theta or max_abs > 0)


@dataclass(frozen=True)
class BilinearForm:
    """T(t1, t2) = exp(2 pi i coefficient t1 t2 / p)."""

    p: int
    coefficient: int
    max_deviation: float
    checked_triples: int
    exhaustive: bool


UNIMODULAR_TOL = 1e-6
BILINEAR_TOL = 1e-8
EXHAUSTIVE_P = 31
SAMPLED_TRIPLES = 10**4


def extract_bilinear(T: MultilinearTensor, seed: int = 0) -> BilinearForm:
    g = T.group
    if g.rank != 1 or not _is_prime(g.factors[0]):
        raise NotPrimeCyclic(f"bilinear extraction needs Z_p, got {g}")
    if T.k != 2:
        raise ValidationError(f"bilinear extraction needs k = 2, got k = {T.k}")
    p = g.factors[0]
    V = T.values
    mod_dev = float(np.max(np.abs(np.abs(V) - 1)))
    if mod_dev > UNIMODULAR_TOL:
        raise NotUnimodular(f"entries deviate from modulus 1 by up to {mod_dev:.3g}")

    B = int(np.rint(np.angle(V[1 % p, 1 % p]) * p / (2 * np.pi))) % p
    t = np.arange(p)
    expected = root_table(p)[(B * np.outer(t, t)) % p]
    dev = float(np.max(np.abs(V - expected)))

    if p <= EXHAUSTIVE_P:
        a, b, c = np.meshgrid(t, t, t, indexing="ij")
        a, b, c = a.ravel(), b.ravel(), c.ravel()
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, p, size=(3, SAMPLED_TRIPLES))
        exhaustive = False
    lin = np.abs(V[(a + b) % p, c] - V[a, c] * V[b, c])
    dev = max(dev, float(np.max(lin)))
    if dev > BILINEAR_TOL:
        raise NotBilinear(f"bilinearity defect {dev:.3g} exceeds {BILINEAR_TOL}")
    return BilinearForm(p, B, dev, int(a.size), exhaustive)
