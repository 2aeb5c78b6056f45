"""Spectral recovery of linear and quadratic Fourier components.

Kernels are |A| x |A| matrices acting as integral operators,
``(K v)(x) = E_y K(x, y) v(y)``, so the matrix handed to the eigensolver
is ``K / |A|`` and eigenvectors are rescaled to unit expectation norm.

Order 1 uses the shift-averaged rank-one matrix ``E_a f(x+a) conj f(y+a)``.
Order 2 uses ``Q(x, y) = P_eps(a -> f(x+a) conj f(y+a))(0)`` where P_eps
drops Fourier coefficients of modulus below eps.  Writing x = y + t the
inner function is the translate by y of ``Delta_t f``, hence
``Q(y + t, y) = P_eps(Delta_t f)(y)``: one DFT per difference class.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    InvalidEpsilon,
    InvalidOrder,
    NonHermitian,
    SeparationFailed,
    UnsupportedOrder,
    ValidationError,
)
from .fourier import dft_values, idft_values, threshold_values
from .functions import GroupFunction, delta_all, inner, shift_stack
from .gowers import gowers_norm
from .groups import GroupSpec

HERMITIAN_TOL = 1e-6
SEPARATING_BUDGET = 32
SEPARATION_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    group: GroupSpec
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        n = self.group.order
        if e.shape != (n, n):
            raise ValidationError(f"kernel must be {n} x {n}, got {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @classmethod
    def hermitian(cls, group: GroupSpec, entries: np.ndarray) -> "KernelMatrix":
        return cls(group, (entries + entries.conj().T) / 2)

    def operator(self) -> np.ndarray:
        return self.entries / self.group.order

    def symmetry_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def normalized_trace(self) -> complex:
        return complex(np.trace(self.entries) / self.group.order)

    def apply(self, v: GroupFunction) -> GroupFunction:
        return GroupFunction(self.group, self.operator() @ v.values)


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: GroupFunction


def _fill_by_difference(g: GroupSpec, R: np.ndarray) -> np.ndarray:
    """K with K(y + t, y) = R[t, y]."""
    n = g.order
    rows = shift_stack(g, np.arange(n))
    K = np.empty((n, n), dtype=complex)
    K[rows, np.broadcast_to(np.arange(n), (n, n))] = R
    return K


def shift_averaged_matrix(f: GroupFunction) -> KernelMatrix:
    g = f.group
    # E_a f(y+t+a) conj f(y+a) depends only on t
    c = delta_all(f.values, g).mean(axis=1)
    R = np.broadcast_to(c[:, None], (g.order, g.order))
    return KernelMatrix.hermitian(g, _fill_by_difference(g, R))


def quadratic_kernel(f: GroupFunction, eps: float, fast: bool = False) -> KernelMatrix:
    if not eps > 0:
        raise InvalidEpsilon(f"quadratic kernel needs eps > 0, got {eps}")
    g = f.group
    coeffs = dft_values(delta_all(f.values, g), g, fast)
    R = idft_values(threshold_values(coeffs, eps), g, fast)
    return KernelMatrix.hermitian(g, _fill_by_difference(g, R))


def jacobi_eigh(H: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100):
    """Cyclic Jacobi for a complex Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns).
    """
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(A), 1e-300)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                gamma = A[p, q]
                mag = abs(gamma)
                if mag <= 1e-300:
                    continue
                phase = gamma / mag
                alpha, beta = A[p, p].real, A[q, q].real
                tau = (beta - alpha) / (2 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1 + tau * tau))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                G = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0
                V[:, idx] = V[:, idx] @ G
    w = np.diag(A).real
    order = np.argsort(w)
    return w[order], V[:, order]


def hermitian_eig(K: KernelMatrix, method: str = "lapack") -> list[EigenPair]:
    """Full spectrum of the operator, eigenvalues descending, unit vectors."""
    defect = K.symmetry_defect()
    if defect > HERMITIAN_TOL:
        raise NonHermitian(f"symmetry defect {defect:.3g} exceeds {HERMITIAN_TOL}")
    H = K.operator()
    H = (H + H.conj().T) / 2
    if method == "lapack":
        w, U = np.linalg.eigh(H)
    elif method == "jacobi":
        w, U = jacobi_eigh(H)
    else:
        raise ValidationError(f"unknown eigensolver {method!r}")
    scale = np.sqrt(K.group.order)
    return [
        EigenPair(float(w[i]), GroupFunction(K.group, U[:, i] * scale))
        for i in range(len(w) - 1, -1, -1)
    ]


def cluster_eigenvalues(
    pairs: Sequence[EigenPair], delta: float, floor: float | None = None
) -> list[list[EigenPair]]:
    """Group runs of consecutive eigenvalues closer than delta.

    Eigenvalues below ``floor`` (default delta) are dropped first.
    """
    floor = delta if floor is None else floor
    kept = [p for p in pairs if p.value >= floor]
    clusters: list[list[EigenPair]] = []
    for p in kept:
        if clusters and clusters[-1][-1].value - p.value < delta:
            clusters[-1].append(p)
        else:
            clusters.append([p])
    return clusters


def _kernel(f: GroupFunction, order: int, eps: float) -> KernelMatrix:
    if order == 1:
        return shift_averaged_matrix(f)
    if order == 2:
        return quadratic_kernel(f, eps)
    if order < 1:
        raise InvalidOrder(f"order must be 1 or 2, got {order}")
    raise UnsupportedOrder(f"no finite kernel for order {order}")


def disambiguate_cluster(
    cluster: Sequence[EigenPair],
    f: GroupFunction,
    eps: float,
    order: int,
    seed: int = 0,
    budget: int = SEPARATING_BUDGET,
    sep_tol: float | None = None,
) -> list[GroupFunction]:
    """Split a near-degenerate eigenspace into individual components.

    Candidates v in the span are drawn from a finite family: first
    sum_i 2i b_i over the current basis, then ``budget`` seeded random
    directions.  Each v is rescaled to carry the cluster's total mass and
    its own kernel is compressed onto the span.  The candidate whose
    compression has the widest minimum eigenvalue gap supplies the
    returned basis; if that gap is not above ``sep_tol`` the call fails.
    """
    d = len(cluster)
    if d == 0:
        return []
    if d == 1:
        return [cluster[0].vector]
    g = f.group
    n = g.order
    root_n = np.sqrt(n)
    basis = np.stack([p.vector.values for p in cluster], axis=1) / root_n
    basis, _ = np.linalg.qr(basis)
    lam = float(np.mean([p.value for p in cluster]))
    sep_tol = SEPARATION_RTOL * abs(lam) if sep_tol is None else sep_tol
    mass = np.sqrt(max(d * lam, 0.0))

    rng = np.random.default_rng(seed)
    candidates = [2.0 * np.arange(1, d + 1, dtype=complex)]
    for _ in range(budget):
        candidates.append(rng.standard_normal(d) + 1j * rng.standard_normal(d))

    best_gap, best_U = -np.inf, None
    for coef in candidates:
        coef = coef / np.linalg.norm(coef)
        v = GroupFunction(g, basis @ coef * root_n * mass)
        K = _kernel(v, order, eps).operator()
        B = basis.conj().T @ K @ basis
        w, U = np.linalg.eigh((B + B.conj().T) / 2)
        gap = float(np.min(np.diff(w)))
        if gap > best_gap:
            best_gap, best_U = gap, U
    if best_gap <= sep_tol:
        raise SeparationFailed(
            f"best of {len(candidates)} candidates separates a {d}-dimensional "
            f"cluster by {best_gap:.3g} <= {sep_tol:.3g}"
        )
    rotated = basis @ best_U[:, ::-1]
    return [GroupFunction(g, rotated[:, i] * root_n) for i in range(d)]


@dataclass
class DecompositionReport:
    order: int
    epsilon: float
    delta: float
    m_max: int | None
    seed: int
    components: list[GroupFunction]
    eigenvalues: list[float]
    residual: GroupFunction
    residual_uk: float
    cross_gram: float
    cluster_sizes: list[int] = field(default_factory=list)
    trace: float = 0.0

    def structured(self) -> GroupFunction:
        g = self.residual.group
        return GroupFunction(g, sum((c.values for c in self.components), np.zeros(g.order)))

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "m_max": self.m_max,
            "seed": self.seed,
            "eigenvalues": list(self.eigenvalues),
            "components": [c.to_dict() for c in self.components],
            "component_norms": [c.norm() for c in self.components],
            "residual": self.residual.to_dict(),
            "residual_l2": self.residual.norm(),
            "residual_uk": self.residual_uk,
            "cross_gram": self.cross_gram,
            "cluster_sizes": list(self.cluster_sizes),
            "kernel_trace": self.trace,
        }


def decompose(
    f: GroupFunction,
    order: int,
    eps: float = 0.3,
    delta: float = 0.05,
    m_max: int | None = None,
    seed: int = 0,
    sep_tol: float | None = None,
    method: str = "lapack",
) -> DecompositionReport:
    if not delta > 0:
        raise ValidationError(f"delta must be > 0, got {delta}")
    K = _kernel(f, order, eps)
    pairs = hermitian_eig(K, method)
    clusters = cluster_eigenvalues(pairs, delta)
    op = K.operator()
    found: list[tuple[float, GroupFunction]] = []
    for cl in clusters:
        for w in disambiguate_cluster(cl, f, eps, order, seed=seed, sep_tol=sep_tol):
            value = float(np.vdot(w.values, op @ w.values).real / f.group.order)
            if value >= delta:
                found.append((value, w))
    found.sort(key=lambda item: -item[0])
    if m_max is not None:
        found = found[:m_max]
    components = [w * inner(f, w) for _, w in found]
    rest = f.values - sum((c.values for c in components), np.zeros(f.group.order))
    residual = GroupFunction(f.group, rest)
    gram = 0.0
    for i in range(len(components)):
        for j in range(i + 1, len(components)):
            gram = max(gram, abs(inner(components[i], components[j])))
    return DecompositionReport(
        order=order,
        epsilon=float(eps),
        delta=float(delta),
        m_max=m_max,
        seed=seed,
        components=components,
        eigenvalues=[v for v, _ in found],
        residual=residual,
        residual_uk=gowers_norm(residual, order + 1),
        cross_gram=gram,
        cluster_sizes=[len(c) for c in clusters],
        trace=float(K.normalized_trace().real),
    )
