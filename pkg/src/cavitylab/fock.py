"""Truncated Fock-space states and operators for a single field mode.

Conventions (hbar = 1):
    a = (q1 + i*q2)/sqrt(2),  [q1, q2] = i,  alpha = (q1 + i*q2)/sqrt(2).
The vacuum has quadrature variance 1/2.  All amplitudes are dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DegenerateStateError, TruncationError, WeightError

# Tail mass of a coherent state stays below ~1e-10 with this truncation rule.
DIM_MARGIN = 10


def default_dim(alpha_max: float) -> int:
    """Truncation dimension for experiments reaching amplitude |alpha_max|."""
    return int(math.ceil(4.0 * abs(alpha_max) ** 2 + DIM_MARGIN))


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class HilbertSpec:
    """Fock-space truncation: basis |0> ... |dim-1>."""

    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim!r}")

    def guard(self, alpha: complex) -> None:
        """Reject displacements that the truncated space cannot carry."""
        if abs(alpha) ** 2 > self.dim / 4.0:
            raise TruncationError(
                f"|alpha|^2 = {abs(alpha)**2:.3f} exceeds dim/4 = {self.dim/4:.3f}; "
                f"increase dim to at least {default_dim(abs(alpha))}"
            )


@dataclass(frozen=True)
class FieldState:
    """Pure field state as a complex amplitude vector over the Fock basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes",
                           _readonly(np.asarray(self.amplitudes, dtype=complex)))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def spec(self) -> HilbertSpec:
        return HilbertSpec(self.dim)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "FieldState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def mean_photon(self) -> float:
        return float(np.sum(np.arange(self.dim) * np.abs(self.amplitudes) ** 2))

    def validate(self, tol: float = 1e-10) -> None:
        if abs(self.norm() - 1.0) > tol:
            raise ValueError(f"state norm {self.norm()} deviates from 1 beyond {tol}")


@dataclass(frozen=True)
class DensityOperator:
    """Field density operator on the truncated Fock space."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", _readonly(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spec(self) -> HilbertSpec:
        return HilbertSpec(self.dim)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def mean_photon(self) -> float:
        return float(np.real(np.sum(np.arange(self.dim) * np.diag(self.matrix))))

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.matrix)).copy()

    def fidelity_pure(self, state: FieldState) -> float:
        """<psi| rho |psi> against a pure reference."""
        v = state.amplitudes
        return float(np.real(np.vdot(v, self.matrix @ v)))

    def expectation(self, op: np.ndarray) -> complex:
        return complex(np.trace(self.matrix @ op))

    def validate(self, herm_tol: float = 1e-10, trace_tol: float = 1e-10,
                 eig_tol: float = 1e-8) -> None:
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T))
        if herm > herm_tol:
            raise ValueError(f"hermiticity deviation {herm:.3e} > {herm_tol}")
        tr = abs(np.trace(m) - 1.0)
        if tr > trace_tol:
            raise ValueError(f"trace deviation {tr:.3e} > {trace_tol}")
        w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
        if w.min() < -eig_tol:
            raise ValueError(f"negative eigenvalue {w.min():.3e} < -{eig_tol}")


@dataclass(frozen=True)
class FieldOperator:
    """Dense operator on the truncated Fock space."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", _readonly(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "FieldOperator":
        return FieldOperator(self.matrix.conj().T)

    def apply(self, state: FieldState) -> FieldState:
        return FieldState(self.matrix @ state.amplitudes)


# ---------------------------------------------------------------------------
# canonical operators


def annihilation(spec: HilbertSpec) -> FieldOperator:
    """Annihilation operator: <n-1| a |n> = sqrt(n)."""
    return FieldOperator(np.diag(np.sqrt(np.arange(1, spec.dim, dtype=float)), k=1))


def creation(spec: HilbertSpec) -> FieldOperator:
    return annihilation(spec).dagger()


def number_operator(spec: HilbertSpec) -> FieldOperator:
    return FieldOperator(np.diag(np.arange(spec.dim, dtype=float)))


def quadrature_q1(spec: HilbertSpec) -> FieldOperator:
    a = annihilation(spec).matrix
    return FieldOperator((a + a.conj().T) / np.sqrt(2.0))


def quadrature_q2(spec: HilbertSpec) -> FieldOperator:
    a = annihilation(spec).matrix
    return FieldOperator((a - a.conj().T) / (1j * np.sqrt(2.0)))


def parity(spec: HilbertSpec) -> FieldOperator:
    """Photon-number parity: diag((-1)^n)."""
    return FieldOperator(np.diag((-1.0) ** np.arange(spec.dim)))


def displacement(spec: HilbertSpec, alpha: complex) -> FieldOperator:
    """D(alpha) = exp(alpha a^dag - alpha* a), scaling-and-squaring expm."""
    spec.guard(alpha)
    a = annihilation(spec).matrix
    gen = alpha * a.conj().T - np.conj(alpha) * a
    return FieldOperator(expm(gen))


def phase_rotation(spec: HilbertSpec, theta: float) -> FieldOperator:
    """exp(i theta n)."""
    return FieldOperator(np.diag(np.exp(1j * theta * np.arange(spec.dim))))


# ---------------------------------------------------------------------------
# state constructors


def fock_state(spec: HilbertSpec, n: int) -> FieldState:
    if not 0 <= n < spec.dim:
        raise IndexError(f"Fock index {n} outside [0, {spec.dim})")
    amps = np.zeros(spec.dim, dtype=complex)
    amps[n] = 1.0
    return FieldState(amps)


def vacuum(spec: HilbertSpec) -> FieldState:
    return fock_state(spec, 0)


def coherent_state(spec: HilbertSpec, alpha: complex) -> FieldState:
    """Coherent state c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!), renormalized.

    Raises TruncationError if the truncated tail exceeds 1e-8 in norm.
    """
    spec.guard(alpha)
    amps = np.zeros(spec.dim, dtype=complex)
    amps[0] = 1.0
    for n in range(1, spec.dim):
        amps[n] = amps[n - 1] * alpha / np.sqrt(n)
    amps *= np.exp(-abs(alpha) ** 2 / 2.0)
    norm = np.linalg.norm(amps)
    correction = abs(1.0 - norm)
    if correction > 1e-8:
        raise TruncationError(
            f"coherent-state truncation correction {correction:.3e} > 1e-8 "
            f"(alpha={alpha}, dim={spec.dim}); increase dim"
        )
    return FieldState(amps / norm)


def cat_state(spec: HilbertSpec, alpha: complex, psi1: float) -> FieldState:
    """(|alpha> + e^{i psi1} |-alpha>) / N1, N1 = sqrt(2[1 + cos(psi1) e^{-2|alpha|^2}])."""
    n1_sq = 2.0 * (1.0 + np.cos(psi1) * np.exp(-2.0 * abs(alpha) ** 2))
    n1 = np.sqrt(max(n1_sq, 0.0))
    if n1 < 1e-6:
        raise DegenerateStateError(
            f"cat normalization N1 = {n1:.2e} vanishes (psi1={psi1}, alpha={alpha})"
        )
    plus = coherent_state(spec, alpha).amplitudes
    minus = coherent_state(spec, -alpha).amplitudes
    amps = (plus + np.exp(1j * psi1) * minus) / n1
    resid = abs(np.linalg.norm(amps) - 1.0)
    if resid > 1e-10:
        raise TruncationError(
            f"cat-state norm residual {resid:.3e} > 1e-10 after truncation"
        )
    return FieldState(amps)


def pure_to_density(state: FieldState) -> DensityOperator:
    v = state.amplitudes
    return DensityOperator(np.outer(v, v.conj()))


def mix(states, weights) -> DensityOperator:
    """Statistical mixture of pure states and/or density operators."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0):
        raise WeightError(f"negative weight in {weights}")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise WeightError(f"weights sum to {weights.sum()!r}, not 1")
    if len(states) != weights.size:
        raise WeightError("states and weights differ in length")
    dim = states[0].dim
    out = np.zeros((dim, dim), dtype=complex)
    for st, w in zip(states, weights):
        if st.dim != dim:
            raise ValueError("all mixture components must share one dimension")
        rho = pure_to_density(st) if isinstance(st, FieldState) else st
        out += w * rho.matrix
    return DensityOperator(out)


def promote(obj, spec: HilbertSpec):
    """Zero-pad a state/density/operator into a larger truncated space."""
    if spec.dim < obj.dim:
        raise ValueError(f"cannot promote dim {obj.dim} down to {spec.dim}")
    if spec.dim == obj.dim:
        return obj
    if isinstance(obj, FieldState):
        amps = np.zeros(spec.dim, dtype=complex)
        amps[: obj.dim] = obj.amplitudes
        return FieldState(amps)
    mat = np.zeros((spec.dim, spec.dim), dtype=complex)
    mat[: obj.dim, : obj.dim] = obj.matrix
    if isinstance(obj, DensityOperator):
        return DensityOperator(mat)
    return FieldOperator(mat)
