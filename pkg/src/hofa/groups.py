"""Finite abelian groups as products of cyclic factors.

Elements are coordinate vectors; the canonical serialization is mixed
radix, row-major with the last factor varying fastest.  The dual group
is identified with the group itself: frequency ``m`` gives the character
``x -> prod_j exp(2 pi i m_j x_j / n_j)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Sequence, Union

import numpy as np

from . import config
from .errors import (
    DimensionMismatch,
    EmptyFactors,
    FactorTooSmall,
    IndexOutOfRange,
    OrderExceedsCap,
)


@dataclass(frozen=True)
class GroupElement:
    coords: tuple[int, ...]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


ElementLike = Union[GroupElement, Sequence[int], int]


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(n) for n in self.factors))

    @property
    def rank(self) -> int:
        return len(self.factors)

    @cached_property
    def order(self) -> int:
        return int(np.prod(self.factors, dtype=np.int64))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.factors

    @cached_property
    def strides(self) -> np.ndarray:
        s = np.ones(self.rank, dtype=np.int64)
        for j in range(self.rank - 2, -1, -1):
            s[j] = s[j + 1] * self.factors[j + 1]
        return s

    @cached_property
    def coords_array(self) -> np.ndarray:
        """(order, rank) integer array; row i holds element_of(i)."""
        grids = np.indices(self.factors).reshape(self.rank, -1)
        return np.ascontiguousarray(grids.T).astype(np.int64)

    @cached_property
    def addition_table(self) -> np.ndarray:
        """table[t, x] = index of x + t.  Only built for small groups."""
        if self.order > config.TABLE_CAP:
            raise OrderExceedsCap(
                f"addition table needs order <= {config.TABLE_CAP}, got {self.order}"
            )
        c = self.coords_array
        summed = (c[:, None, :] + c[None, :, :]) % np.array(self.factors)
        return (summed @ self.strides).astype(np.intp)

    @cached_property
    def negation_index(self) -> np.ndarray:
        c = (-self.coords_array) % np.array(self.factors)
        return (c @ self.strides).astype(np.intp)

    def __str__(self) -> str:
        return " x ".join(f"Z_{n}" for n in self.factors)

    def to_json(self) -> str:
        return json.dumps(list(self.factors))

    @classmethod
    def from_json(cls, text: str, cap: int = config.ORDER_CAP) -> "GroupSpec":
        return make_group(json.loads(text), cap=cap)

    def elem(self, a: ElementLike) -> GroupElement:
        """Coerce to a reduced GroupElement of this group."""
        if isinstance(a, GroupElement):
            coords = a.coords
        elif isinstance(a, (int, np.integer)):
            if self.rank != 1:
                raise DimensionMismatch(
                    f"bare integer element needs a cyclic group, got {self}"
                )
            coords = (int(a),)
        else:
            coords = tuple(int(c) for c in a)
        if len(coords) != self.rank:
            raise DimensionMismatch(
                f"element has {len(coords)} coordinates, group has {self.rank} factors"
            )
        return GroupElement(tuple(c % n for c, n in zip(coords, self.factors)))

    def elements(self):
        for coords in product(*(range(n) for n in self.factors)):
            yield GroupElement(coords)

    def zero(self) -> GroupElement:
        return GroupElement((0,) * self.rank)


def make_group(factors: Sequence[int], cap: int = config.ORDER_CAP) -> GroupSpec:
    factors = list(factors)
    if not factors:
        raise EmptyFactors("a group needs at least one cyclic factor")
    for n in factors:
        if int(n) != n or n < 2:
            raise FactorTooSmall(f"cyclic factor {n!r} must be an integer >= 2")
    g = GroupSpec(tuple(factors))
    if g.order > cap:
        raise OrderExceedsCap(f"order {g.order} exceeds cap {cap}")
    return g


def add(g: GroupSpec, a: ElementLike, b: ElementLike) -> GroupElement:
    a, b = g.elem(a), g.elem(b)
    return GroupElement(tuple((x + y) % n for x, y, n in zip(a, b, g.factors)))


def neg(g: GroupSpec, a: ElementLike) -> GroupElement:
    a = g.elem(a)
    return GroupElement(tuple((-x) % n for x, n in zip(a, g.factors)))


def index_of(g: GroupSpec, a: ElementLike) -> int:
    a = g.elem(a)
    return int(np.dot(a.coords, g.strides))


def element_of(g: GroupSpec, i: int) -> GroupElement:
    if not 0 <= i < g.order:
        raise IndexOutOfRange(f"index {i} outside [0, {g.order})")
    coords = []
    for n in reversed(g.factors):
        coords.append(i % n)
        i //= n
    return GroupElement(tuple(reversed(coords)))


@lru_cache(maxsize=None)
def root_table(n: int) -> np.ndarray:
    """exp(2 pi i j / n) for j in [0, n); exact at the quarter points."""
    j = np.arange(n)
    table = np.exp(2j * np.pi * j / n)
    # pin values that have exact representations
    for k, val in ((0, 1), (n / 4, 1j), (n / 2, -1), (3 * n / 4, -1j)):
        if float(k).is_integer():
            table[int(k)] = val
    table.setflags(write=False)
    return table


def char_eval(g: GroupSpec, m: ElementLike, x: ElementLike) -> complex:
    m, x = g.elem(m), g.elem(x)
    val = 1 + 0j
    for mj, xj, n in zip(m, x, g.factors):
        val *= root_table(n)[(mj * xj) % n]
    return complex(val)


def character_vector(g: GroupSpec, m: ElementLike) -> np.ndarray:
    """Values of chi_m at every element, in canonical order."""
    m = g.elem(m)
    out = np.ones(1, dtype=complex)
    for mj, n in zip(m, g.factors):
        out = np.multiply.outer(out, root_table(n)[(mj * np.arange(n)) % n])
    return out.reshape(-1)


def character_matrix(g: GroupSpec) -> np.ndarray:
    """C[m, x] = chi_m(x).  Dense |A| x |A|; use only for small groups."""
    out = np.ones((1, 1), dtype=complex)
    for n in g.factors:
        j = np.arange(n)
        w = root_table(n)[np.outer(j, j) % n]
        out = np.einsum("ab,cd->acbd", out, w).reshape(out.shape[0] * n, -1)
    return out


def _partitions(n: int, max_part: int | None = None):
    max_part = n if max_part is None else max_part
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def abelian_groups_of_order(n: int) -> list[GroupSpec]:
    """One representative per isomorphism class, as prime-power factors."""
    if n < 2:
        return []
    per_prime = [
        [tuple(p**e for e in part) for part in _partitions(k)]
        for p, k in sorted(_factorize(n).items())
    ]
    return [GroupSpec(sum(choice, ())) for choice in product(*per_prime)]
