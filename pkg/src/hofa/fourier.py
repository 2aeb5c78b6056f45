"""DFT over products of cyclic groups, and the threshold projector.

The transform is applied one cyclic factor at a time.  The default path
is direct O(n^2) summation against a table of root powers, with a fixed
summation order; ``fast=True`` switches to ``numpy.fft`` per factor.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import config
from .errors import InvalidEpsilon, ValidationError
from .functions import GroupFunction
from .groups import GroupSpec, make_group, root_table


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    """coeffs[m] = inner(f, chi_m), indexed like group elements."""

    group: GroupSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size != self.group.order:
            raise ValidationError("spectrum length must equal the group order")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coeffs)

    def to_dict(self) -> dict:
        return {
            "group": list(self.group.factors),
            "kind": "spectrum",
            "values": [[float(z.real), float(z.imag)] for z in self.coeffs],
        }

    @classmethod
    def from_dict(cls, d: dict, cap: int = config.ORDER_CAP) -> "FourierSpectrum":
        if d.get("kind") != "spectrum":
            raise ValidationError("document is not a spectrum")
        vals = np.array(d["values"], dtype=float)
        return cls(make_group(d["group"], cap=cap), vals[:, 0] + 1j * vals[:, 1])


@lru_cache(maxsize=64)
def _analysis_matrix(n: int) -> np.ndarray:
    # W[m, x] = conj(chi_m(x)) / n
    j = np.arange(n)
    w = root_table(n)[(-np.outer(j, j)) % n] / n
    w.setflags(write=False)
    return w


@lru_cache(maxsize=64)
def _synthesis_matrix(n: int) -> np.ndarray:
    j = np.arange(n)
    w = root_table(n)[np.outer(j, j) % n]
    w.setflags(write=False)
    return w


def _transform(values: np.ndarray, g: GroupSpec, inverse: bool, fast: bool) -> np.ndarray:
    lead = values.shape[:-1]
    arr = np.asarray(values, dtype=complex).reshape(lead + g.factors)
    off = len(lead)
    for j, n in enumerate(g.factors):
        ax = off + j
        if fast:
            if inverse:
                arr = np.fft.ifft(arr, axis=ax) * n
            else:
                arr = np.fft.fft(arr, axis=ax) / n
        else:
            w = _synthesis_matrix(n) if inverse else _analysis_matrix(n)
            arr = np.moveaxis(np.tensordot(arr, w, axes=([ax], [1])), -1, ax)
    return arr.reshape(lead + (g.order,))


def dft_values(values: np.ndarray, g: GroupSpec, fast: bool = False) -> np.ndarray:
    """Batched forward transform over the trailing axis."""
    return _transform(values, g, inverse=False, fast=fast)


def idft_values(coeffs: np.ndarray, g: GroupSpec, fast: bool = False) -> np.ndarray:
    return _transform(coeffs, g, inverse=True, fast=fast)


def dft(f: GroupFunction, fast: bool = False) -> FourierSpectrum:
    return FourierSpectrum(f.group, dft_values(f.values, f.group, fast))


def idft(s: FourierSpectrum, fast: bool = False) -> GroupFunction:
    return GroupFunction(s.group, idft_values(s.coeffs, s.group, fast))


# Ties are kept; the slack stops rounding in the DFT from breaking exact ties.
TIE_SLACK = 1e-12


def threshold_values(coeffs: np.ndarray, eps: float) -> np.ndarray:
    """Zero every coefficient with modulus strictly below eps."""
    return np.where(np.abs(coeffs) >= eps - TIE_SLACK, coeffs, 0)


def truncate(s: FourierSpectrum, eps: float) -> FourierSpectrum:
    if not eps >= 0:
        raise InvalidEpsilon(f"threshold must be >= 0, got {eps}")
    return FourierSpectrum(s.group, threshold_values(s.coeffs, eps))


def project(f: GroupFunction, eps: float) -> GroupFunction:
    """Keep only the Fourier terms of modulus >= eps."""
    return idft(truncate(dft(f), eps))


def u2_from_spectrum(s: FourierSpectrum) -> float:
    a = np.abs(s.coeffs) ** 2
    return float(np.sum(a * a) ** 0.25)
