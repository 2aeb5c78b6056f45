"""Regularity diagnostics: partitions, the (P, eps)-character test and the
Complexity-I checker for k <= 2.

A function is a k-th order (P, eps)-character when its (k+1)-fold
difference ``Delta_{t_1..t_{k+1}} f(x)`` is, up to L2 error eps, a function
of the *signature*: the tuple of cells containing ``x + sum_{i in S} t_i``
for every S subset of [k+1].  The best such function is the conditional
mean per signature, so the test measures the L2 distance to it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import config
from .errors import (
    CapExceeded,
    DecompositionMismatch,
    InvalidOrder,
    InvalidPartition,
    InvalidSamples,
    UnsupportedOrder,
    ValidationError,
)
from .fourier import dft
from .functions import GroupFunction, constant, lp_norm
from .gowers import gowers_norm
from .groups import GroupSpec, character_vector, make_group

EXHAUSTIVE_CAP = 4 * 10**6
SUP_TOL = 1e-9
MATCH_TOL = 1e-9
# Fourier coefficients below this are rounding noise
ZERO_COEFF = 1e-12


@dataclass(frozen=True, eq=False)
class Partition:
    group: GroupSpec
    cell_of: np.ndarray

    def __post_init__(self):
        c = np.array(self.cell_of, dtype=np.int64).reshape(-1)
        if c.size != self.group.order:
            raise InvalidPartition("one cell label per group element required")
        if c.size and (c.min() != 0 or set(np.unique(c)) != set(range(c.max() + 1))):
            raise InvalidPartition("cell labels must be contiguous from 0, no empty cells")
        c.setflags(write=False)
        object.__setattr__(self, "cell_of", c)

    @property
    def n_cells(self) -> int:
        return int(self.cell_of.max()) + 1

    @classmethod
    def from_labels(cls, group: GroupSpec, labels) -> "Partition":
        """Relabel arbitrary hashable labels to contiguous cells in first-seen order."""
        _, first, inv = np.unique(np.asarray(labels), return_index=True, return_inverse=True)
        rank = np.argsort(np.argsort(first))
        return cls(group, rank[inv])

    @classmethod
    def one_cell(cls, group: GroupSpec) -> "Partition":
        return cls(group, np.zeros(group.order, dtype=np.int64))

    @classmethod
    def singletons(cls, group: GroupSpec) -> "Partition":
        return cls(group, np.arange(group.order))

    @classmethod
    def by_residue(cls, group: GroupSpec, modulus: int) -> "Partition":
        """Cells by canonical index mod ``modulus`` (residue classes on Z_n)."""
        return cls.from_labels(group, np.arange(group.order) % modulus)

    def indicator(self, cell: int) -> GroupFunction:
        return GroupFunction(self.group, (self.cell_of == cell).astype(float))

    def refines(self, other: "Partition") -> bool:
        """True when every cell of self lies inside one cell of other."""
        pairs = np.unique(np.stack([self.cell_of, other.cell_of]), axis=1)
        return len(np.unique(pairs[0])) == pairs.shape[1]

    def to_dict(self) -> dict:
        return {"group": list(self.group.factors), "cells": self.cell_of.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Partition":
        try:
            return cls(make_group(d["group"]), d["cells"])
        except KeyError as exc:
            raise InvalidPartition(f"partition document lacks {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class CharacterTestReport:
    k: int
    epsilon: float
    residual_estimate: float
    samples: int
    seed: int
    mode: str
    n_signatures: int
    std_error: float

    @property
    def passed(self) -> bool:
        return self.residual_estimate < self.epsilon

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "epsilon": self.epsilon,
            "residual_estimate": self.residual_estimate,
            "samples": self.samples,
            "seed": self.seed,
            "mode": self.mode,
            "n_signatures": self.n_signatures,
            "std_error": self.std_error,
            "pass": self.passed,
        }


def _corners(d: int):
    for r in range(d + 1):
        yield from combinations(range(d), r)


def _cube_samples(f: GroupFunction, P: Partition, d: int, points: np.ndarray):
    """points: (N, d+1) element indices (x, t_1..t_d).

    Returns the d-fold difference at each point and its cell signature.
    """
    g = f.group
    coords = g.coords_array
    factors = np.array(g.factors)
    x = coords[points[:, 0]]
    ts = [coords[points[:, i + 1]] for i in range(d)]
    vals = np.ones(points.shape[0], dtype=complex)
    sig = []
    for S in _corners(d):
        c = x.copy()
        for i in S:
            c += ts[i]
        idx = (c % factors) @ g.strides
        v = f.values[idx]
        vals *= v.conj() if (d - len(S)) % 2 else v
        sig.append(P.cell_of[idx])
    return vals, np.stack(sig, axis=1)


def _signature_ids(sig: np.ndarray, n_cells: int) -> np.ndarray:
    """Dense ids for the distinct rows of sig."""
    width = sig.shape[1]
    if width * np.log2(max(n_cells, 2)) < 62:
        code = sig @ (n_cells ** np.arange(width, dtype=np.int64))
        _, inv = np.unique(code, return_inverse=True)
    else:
        _, inv = np.unique(sig, axis=0, return_inverse=True)
    return inv.reshape(-1)


def _group_means(vals: np.ndarray, inv: np.ndarray, n_groups: int) -> np.ndarray:
    counts = np.bincount(inv, minlength=n_groups)
    re = np.bincount(inv, weights=vals.real, minlength=n_groups)
    im = np.bincount(inv, weights=vals.imag, minlength=n_groups)
    return (re + 1j * im) / np.maximum(counts, 1)


def character_test(
    f: GroupFunction,
    P: Partition,
    k: int,
    eps: float,
    samples: int = 10**5,
    seed: int = 0,
    cap: int = EXHAUSTIVE_CAP,
    exhaustive: bool | None = None,
) -> CharacterTestReport:
    """L2 distance of Delta_{t_1..t_{k+1}} f from its best signature-measurable fit.

    Exhaustive when |A|^(k+2) <= cap (or when forced); otherwise a
    two-pass Monte Carlo estimate: pass one fits the per-signature means,
    pass two measures the residual on fresh draws.  Signatures unseen in
    pass one are fitted by the pass-one global mean.
    """
    if int(k) != k or k < 0:
        raise InvalidOrder(f"k must be >= 0, got {k!r}")
    if f.group != P.group:
        raise ValidationError("function and partition live on different groups")
    if lp_norm(f, np.inf) > 1 + SUP_TOL:
        raise ValidationError("character test needs |f| <= 1")
    if int(samples) != samples or samples < 1:
        raise InvalidSamples(f"samples must be a positive integer, got {samples!r}")
    d = int(k) + 1
    n = f.group.order
    total = n ** (d + 1)
    if exhaustive is None:
        exhaustive = total <= cap
    elif exhaustive and total > cap:
        raise CapExceeded(f"exhaustive enumeration of {total} points exceeds cap {cap}")

    if exhaustive:
        flat = np.arange(total, dtype=np.int64)
        points = np.stack(np.unravel_index(flat, (n,) * (d + 1)), axis=1)
        vals, sig = _cube_samples(f, P, d, points)
        inv = _signature_ids(sig, P.n_cells)
        means = _group_means(vals, inv, int(inv.max()) + 1)
        sq = np.abs(vals - means[inv]) ** 2
        n_sig = len(means)
        used = total
    else:
        rng = np.random.default_rng(seed)
        fit = rng.integers(0, n, size=(samples, d + 1))
        test = rng.integers(0, n, size=(samples, d + 1))
        v_fit, s_fit = _cube_samples(f, P, d, fit)
        v_test, s_test = _cube_samples(f, P, d, test)
        inv = _signature_ids(np.concatenate([s_fit, s_test]), P.n_cells)
        inv_fit, inv_test = inv[:samples], inv[samples:]
        n_groups = int(inv.max()) + 1
        means = _group_means(v_fit, inv_fit, n_groups)
        seen = np.bincount(inv_fit, minlength=n_groups) > 0
        means[~seen] = v_fit.mean()
        sq = np.abs(v_test - means[inv_test]) ** 2
        n_sig = int(seen.sum())
        used = samples

    ms = float(sq.mean())
    resid = float(np.sqrt(ms))
    if exhaustive:
        std_err = 0.0
    else:
        se_ms = float(sq.std(ddof=1) / np.sqrt(len(sq))) if len(sq) > 1 else np.inf
        std_err = se_ms / (2 * resid) if resid > 0 else se_ms
    return CharacterTestReport(
        k=int(k),
        epsilon=float(eps),
        residual_estimate=resid,
        samples=int(used),
        seed=int(seed),
        mode="exhaustive" if exhaustive else "sampled",
        n_signatures=n_sig,
        std_error=std_err,
    )


@dataclass
class Clause:
    name: str
    value: float
    bound: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"name": self.name, "value": self.value, "bound": self.bound, "pass": self.passed}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class ComplexityReport:
    k: int
    n_params: list[int]
    eps_params: list[float]
    n_cells: int
    f_sup: float
    clauses: list[Clause]
    children: list["ComplexityReport"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses) and all(ch.passed for ch in self.children)

    def failed_clauses(self) -> list[str]:
        names = [c.name for c in self.clauses if not c.passed]
        for i, ch in enumerate(self.children):
            names += [f"cell[{i}].{n}" for n in ch.failed_clauses()]
        return names

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n_params": list(self.n_params),
            "eps_params": list(self.eps_params),
            "n_cells": self.n_cells,
            "f_sup": self.f_sup,
            "clauses": [c.to_dict() for c in self.clauses],
            "cells": [ch.to_dict() for ch in self.children],
            "pass": self.passed,
        }


def fourier_split(f: GroupFunction, count: int) -> tuple[list[GroupFunction], GroupFunction]:
    """The ``count`` largest Fourier terms of f as components, plus the rest."""
    coeffs = dft(f).coeffs
    order = np.argsort(-np.abs(coeffs), kind="stable")[: max(int(count), 0)]
    comps = [
        GroupFunction(f.group, coeffs[m] * character_vector(f.group, int(m)))
        for m in order
        if abs(coeffs[m]) > ZERO_COEFF
    ]
    rest = f.values - sum((c.values for c in comps), np.zeros(f.group.order))
    return comps, GroupFunction(f.group, rest)


def complexity_check_c1(
    f: GroupFunction,
    h: GroupFunction,
    components: Sequence[GroupFunction],
    partitions: Sequence[Partition],
    n_params: Sequence[int],
    eps_params: Sequence[float],
    k: int,
    samples: int = 10**5,
    seed: int = 0,
    cap: int = EXHAUSTIVE_CAP,
) -> ComplexityReport:
    """Check one witness decomposition f = h + sum(components) against c_1(k, n, eps).

    ``partitions[0]`` is the level-k partition; ``partitions[1:]`` feed the
    recursive certification of its cell indicators (level k-1 down to 1),
    defaulting to the one-cell partition.  At level 1 every cell indicator
    must be constant, which forces the one-cell partition.  Cell indicators
    at level 1 are decomposed by their largest Fourier terms.
    """
    if int(k) != k or k < 0:
        raise InvalidOrder(f"k must be >= 0, got {k!r}")
    if k > 2:
        raise UnsupportedOrder("Complexity-I checking is implemented for k <= 2")
    k = int(k)
    n_params = [int(v) for v in n_params]
    eps_params = [float(v) for v in eps_params]
    if len(n_params) != 2 * k or len(eps_params) != 2 * k:
        raise ValidationError(f"need {2 * k} count and {2 * k} epsilon parameters")
    g = f.group
    for c in [h, *components]:
        if c.group != g:
            raise ValidationError("decomposition pieces live on different groups")
    total = h.values + sum((c.values for c in components), np.zeros(g.order))
    mismatch = float(np.max(np.abs(f.values - total)))
    if mismatch > MATCH_TOL:
        raise DecompositionMismatch(f"f differs from h + sum(components) by {mismatch:.3g}")
    f_sup = lp_norm(f, np.inf)

    if k == 0:
        # only constant functions have complexity at level 0
        dev = float(np.max(np.abs(f.values - f.values[0])))
        return ComplexityReport(0, [], [], 1, f_sup, [Clause("constant", dev, 0.0, dev <= MATCH_TOL)])

    P = partitions[0] if partitions else Partition.one_cell(g)
    if P.group != g:
        raise ValidationError("partition lives on a different group")
    eps_char, eps_err = eps_params[2 * k - 2], eps_params[2 * k - 1]
    n_count = n_params[2 * k - 1]
    clauses = [Clause("count", float(len(components)), float(n_count), len(components) <= n_count)]
    sups = [lp_norm(c, np.inf) for c in components]
    max_sup = max(sups, default=0.0)
    clauses.append(Clause("component_sup", max_sup, 1.0, max_sup <= 1 + SUP_TOL))
    h2 = lp_norm(h, 2)
    clauses.append(Clause("error_l2", h2, eps_err, h2 < eps_err))
    for i, (c, s) in enumerate(zip(components, sups)):
        if s > 1 + SUP_TOL:
            clauses.append(Clause(f"character[{i}]", float("inf"), eps_char, False,
                                  {"reason": "component exceeds sup bound"}))
            continue
        rep = character_test(c, P, k, eps_char, samples=samples, seed=seed + i, cap=cap)
        clauses.append(Clause(f"character[{i}]", rep.residual_estimate, eps_char,
                              rep.passed, {"mode": rep.mode, "samples": rep.samples}))

    children: list[ComplexityReport] = []
    if k == 1:
        clauses.append(Clause("cells_constant", float(P.n_cells), 1.0, P.n_cells == 1))
    else:
        tail_n = n_params[: 2 * k - 2][::-1]
        tail_eps = eps_params[: 2 * k - 2][::-1]
        sub_parts = list(partitions[1:]) or [Partition.one_cell(g)]
        for cell in range(P.n_cells):
            ind = P.indicator(cell)
            comps, rest = fourier_split(ind, tail_n[2 * (k - 1) - 1])
            children.append(
                complexity_check_c1(ind, rest, comps, sub_parts, tail_n, tail_eps, k - 1,
                                    samples=samples, seed=seed, cap=cap)
            )
    return ComplexityReport(k, n_params, eps_params, P.n_cells, f_sup, clauses, children)


@dataclass
class PipelineReport:
    k: int
    decomposition: object
    complexity: ComplexityReport
    residual_uk: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "decomposition": self.decomposition.to_dict(),
            "complexity": self.complexity.to_dict(),
            "residual_uk": self.residual_uk,
            "certified": self.complexity.passed,
        }


def furreg_pipeline(
    f: GroupFunction,
    k: int,
    eps: float = 0.3,
    delta: float = 0.05,
    m_max: int | None = None,
    partitions: Sequence[Partition] | None = None,
    n_params: Sequence[int] | None = None,
    eps_params: Sequence[float] | None = None,
    samples: int = 10**5,
    seed: int = 0,
    cap: int = EXHAUSTIVE_CAP,
) -> PipelineReport:
    """Decompose f = f' + g spectrally, then certify f' and measure U_{k+1}(g)."""
    from .spectral import decompose

    if k not in (1, 2):
        raise UnsupportedOrder(f"pipeline supports k in (1, 2), got {k}")
    dec = decompose(f, k, eps=eps, delta=delta, m_max=m_max, seed=seed)
    g = f.group
    f_struct = GroupFunction(g, f.values - dec.residual.values)
    if n_params is None:
        n_params = [g.order] * (2 * k)
    if eps_params is None:
        eps_params = [0.1] * (2 * k)
    comp = complexity_check_c1(
        f_struct, constant(g, 0), dec.components, partitions or [], n_params, eps_params,
        k, samples=samples, seed=seed, cap=cap,
    )
    return PipelineReport(k, dec, comp, gowers_norm(dec.residual, k + 1))
