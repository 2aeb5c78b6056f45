"""Gowers uniformity norms.

Two independent routes: the recursion
``U_{k+1}(f)^(2^(k+1)) = E_t U_k(Delta_t f)^(2^k)`` with ``U_1(f) = |E f|``,
and exhaustive averaging of the 2^k-corner product over A^(k+1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from . import config
from .errors import (
    EnumerationTooLarge,
    GroupMismatch,
    IncompleteSystem,
    InternalConsistencyError,
    InvalidOrder,
)
from .functions import GroupFunction, delta_all, shift_values
from .groups import GroupSpec

NEG_TOL = 1e-9
# max complex entries held by one level of the recursion
_BUDGET = 1 << 22


def _check_order(k):
    if int(k) != k or k < 1:
        raise InvalidOrder(f"Gowers order must be an integer >= 1, got {k!r}")


def _uk_powers(F: np.ndarray, g: GroupSpec, k: int) -> np.ndarray:
    """Rows of F -> U_k(row)^(2^k)."""
    B, n = F.shape
    if k == 1:
        m = F.mean(axis=1)
        return (m * m.conj()).real
    if B * n * n <= _BUDGET:
        D = delta_all(F, g).reshape(B * n, n)
        return _uk_powers(D, g, k - 1).reshape(B, n).mean(axis=1)
    if B > 1:
        step = max(1, _BUDGET // (n * n))
        return np.concatenate(
            [_uk_powers(F[i : i + step], g, k) for i in range(0, B, step)]
        )
    vals = np.empty(n)
    conj = F[0].conj()
    for i, t in enumerate(g.elements()):
        D = shift_values(g, F[0], t) * conj
        vals[i] = _uk_powers(D[None, :], g, k - 1)[0]
    return np.array([vals.mean()])


def gowers_power(f: GroupFunction, k: int) -> float:
    """U_k(f)^(2^k) by the recursive route."""
    _check_order(k)
    return float(_uk_powers(f.values[None, :], f.group, int(k))[0])


def gowers_norm(f: GroupFunction, k: int) -> float:
    return gowers_power(f, k) ** (1.0 / 2**k)


def _subsets(d: int):
    for r in range(d + 1):
        yield from combinations(range(1, d + 1), r)


def _cube_sum(
    g: GroupSpec,
    corner_values: Sequence[np.ndarray],
    subsets: Sequence[tuple[int, ...]],
    conj_mask: Sequence[bool],
    d: int,
    cap: int,
) -> np.ndarray:
    """Sum over (x, t_1..t_d) of prod_S value_S(x + sum_S t)^(conj_S).

    corner_values[S] may carry leading batch dimensions; the result has them.
    """
    n = g.order
    total_evals = n ** (d + 1)
    if total_evals > cap:
        raise EnumerationTooLarge(
            f"|A|^{d + 1} = {total_evals} evaluations exceeds cap {cap}"
        )
    lead = np.asarray(corner_values[0]).shape[:-1]
    batch = int(np.prod(lead, dtype=np.int64)) if lead else 1
    table = g.addition_table if n <= config.TABLE_CAP else None
    coords = g.coords_array
    factors = np.array(g.factors)
    strides = g.strides

    def plus(a, b):
        if table is not None:
            return table[b, a]
        return ((coords[a] + coords[b]) % factors) @ strides

    # axes 0..d are (x, t_1..t_d); the first `split` axes are enumerated in
    # flat blocks, the rest are broadcast as full aranges
    split = 1
    while split <= d and batch * n ** (d + 1 - split) > config.CHUNK:
        split += 1
    tail = [
        np.arange(n).reshape((1,) * (a - split + 1) + (n,) + (1,) * (d - a))
        for a in range(split, d + 1)
    ]
    head_total = n**split
    block = max(1, config.CHUNK // (batch * n ** (d + 1 - split)))
    acc = np.zeros(lead, dtype=complex)
    for start in range(0, head_total, block):
        flat = np.arange(start, min(start + block, head_total), dtype=np.int64)
        shape = (len(flat),) + (1,) * (d + 1 - split)
        axes = [p.reshape(shape) for p in np.unravel_index(flat, (n,) * split)]
        axes += tail
        corners = {(): axes[0]}
        prod = None
        for S, vals, cj in zip(subsets, corner_values, conj_mask):
            if S not in corners:
                # subsets arrive by size, so S minus its last element is known
                corners[S] = plus(corners[S[:-1]], axes[S[-1]])
            v = vals[..., corners[S]]
            if cj:
                v = v.conj()
            prod = v if prod is None else prod * v
        prod = np.broadcast_to(prod, lead + (len(flat),) + (n,) * (d + 1 - split))
        acc = acc + prod.reshape(lead + (-1,)).sum(axis=-1)
    return acc


def _real_nonneg(avg: np.ndarray) -> np.ndarray:
    re = np.real(avg)
    if np.any(re < -NEG_TOL) or np.any(np.abs(np.imag(avg)) > NEG_TOL):
        raise InternalConsistencyError(f"cube average {avg} is not real nonnegative")
    return np.maximum(re, 0.0)


def bruteforce_powers(
    values: np.ndarray, g: GroupSpec, k: int, cap: int = config.EVAL_CAP
) -> np.ndarray:
    """Exhaustive U_k^(2^k) for a stack of functions (trailing axis = group)."""
    _check_order(k)
    subs = list(_subsets(k))
    # Delta_{t_1..t_k} f(x) conjugates the corners with k - |S| odd
    conj = [(k - len(S)) % 2 == 1 for S in subs]
    total = _cube_sum(g, [values] * len(subs), subs, conj, k, cap)
    return _real_nonneg(total / g.order ** (k + 1))


def gowers_norm_bruteforce(f: GroupFunction, k: int, cap: int = config.EVAL_CAP) -> float:
    p = bruteforce_powers(f.values, f.group, k, cap)
    return float(p) ** (1.0 / 2**k)


@dataclass
class CubeSystem:
    """Functions f_S for every S subset of [d] (1-based)."""

    d: int
    assignment: Mapping[frozenset, GroupFunction] = field(default_factory=dict)

    def __post_init__(self):
        self.assignment = {frozenset(S): f for S, f in dict(self.assignment).items()}

    @classmethod
    def uniform(cls, f: GroupFunction, d: int) -> "CubeSystem":
        return cls(d, {frozenset(S): f for S in _subsets(d)})

    @property
    def group(self) -> GroupSpec:
        return next(iter(self.assignment.values())).group


def cube_average(cs: CubeSystem, cap: int = config.EVAL_CAP) -> complex:
    """E_{x,t} prod_S (f_S o psi_S)^{c(|S|)}, conjugating |S| times."""
    if cs.d < 1:
        raise InvalidOrder("cube dimension must be >= 1")
    subs = list(_subsets(cs.d))
    missing = [S for S in subs if frozenset(S) not in cs.assignment]
    if missing:
        raise IncompleteSystem(f"no function assigned to subsets {missing[:4]}")
    fs = [cs.assignment[frozenset(S)] for S in subs]
    g = fs[0].group
    if any(f.group != g for f in fs):
        raise GroupMismatch("cube system functions live on different groups")
    conj = [len(S) % 2 == 1 for S in subs]
    total = _cube_sum(g, [f.values for f in fs], subs, conj, cs.d, cap)
    return complex(total / g.order ** (cs.d + 1))


@dataclass(frozen=True)
class AdditivityReport:
    k: int
    lhs: float
    rhs: float
    gap: float
    component_powers: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "component_powers": list(self.component_powers),
        }


def additivity_check(components: Sequence[GroupFunction], k: int) -> AdditivityReport:
    """Compare U_k(sum)^(2^k) against the sum of U_k(part)^(2^k)."""
    _check_order(k)
    if not components:
        raise IncompleteSystem("need at least one component")
    g = components[0].group
    if any(c.group != g for c in components):
        raise GroupMismatch("components live on different groups")
    total = GroupFunction(g, np.sum([c.values for c in components], axis=0))
    lhs = gowers_power(total, k)
    parts = tuple(gowers_power(c, k) for c in components)
    rhs = float(sum(parts))
    return AdditivityReport(int(k), lhs, rhs, abs(lhs - rhs), parts)
