"""Cavity damping: Lindblad evolution of the field and derived timescales.

The generator is the single-mode amplitude-damping form with energy decay
rate kappa and optional thermal occupation n_thermal:

    drho/dt = kappa (n_th + 1) (a rho a+ - {a+ a, rho}/2)
            + kappa  n_th      (a+ rho a - {a a+, rho}/2)

At n_thermal = 0 the vacuum is a fixed point, a coherent |alpha> stays
coherent with amplitude alpha e^{-kappa t/2}, and <n>(t) = <n>(0) e^{-kappa t}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import Boltzmann, Planck
from scipy.integrate import solve_ivp

from .errors import DomainError, IntegrationError
from .fock import DensityOperator, HilbertSpec, annihilation, coherent_state


@dataclass(frozen=True)
class DampingModel:
    """Cavity energy-decay rate and thermal occupation."""

    kappa: float
    n_thermal: float = 0.0

    def __post_init__(self):
        if self.kappa <= 0:
            raise DomainError(f"kappa must be positive, got {self.kappa}")
        if self.n_thermal < 0:
            raise DomainError(f"n_thermal must be >= 0, got {self.n_thermal}")

    @property
    def dissipation_time(self) -> float:
        return 1.0 / self.kappa


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sample times from t_start to t_end (steps = number of samples)."""

    t_start: float
    t_end: float
    steps: int

    def __post_init__(self):
        if not (self.t_end > self.t_start >= 0):
            raise DomainError(f"need t_end > t_start >= 0, got [{self.t_start}, {self.t_end}]")
        if self.steps < 1:
            raise DomainError(f"steps must be >= 1, got {self.steps}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.steps)


def _lindblad_rhs(model: DampingModel, dim: int):
    a = annihilation(HilbertSpec(dim)).matrix
    ad = a.conj().T
    n_op = ad @ a
    aad = a @ ad
    kd = model.kappa * (model.n_thermal + 1.0)
    ku = model.kappa * model.n_thermal

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        out = kd * (a @ rho @ ad - 0.5 * (n_op @ rho + rho @ n_op))
        if ku > 0:
            out += ku * (ad @ rho @ a - 0.5 * (aad @ rho + rho @ aad))
        return out.ravel()

    return rhs


def evolve_trajectory(rho: DensityOperator, model: DampingModel, times) -> list[DensityOperator]:
    """Damped evolution sampled at the given (sorted, nonnegative) times."""
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        return []
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise DomainError("times must be sorted and nonnegative")
    dim = rho.dim
    if times[-1] == 0.0:
        return [rho for _ in times]
    sol = solve_ivp(
        _lindblad_rhs(model, dim),
        (0.0, float(times[-1])),
        rho.matrix.ravel().astype(complex),
        method="RK45",
        t_eval=times,
        rtol=1e-9,
        atol=1e-12,
    )
    if not sol.success:
        raise IntegrationError(f"master-equation integration failed: {sol.message}")
    out = []
    for k in range(times.size):
        m = sol.y[:, k].reshape(dim, dim)
        m = (m + m.conj().T) / 2.0  # discard integrator's hermiticity roundoff
        out.append(DensityOperator(m))
    return out


def evolve(rho: DensityOperator, model: DampingModel, t: float) -> DensityOperator:
    """rho(t) under cavity damping; trace is preserved to integrator accuracy."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t == 0:
        return rho
    out = evolve_trajectory(rho, model, [t])[0]
    tr_err = abs(out.trace() - rho.trace())
    if tr_err > 1e-9:
        raise IntegrationError(f"trace drift {tr_err:.3e} exceeds 1e-9")
    return out


def cat_coherence(rho: DensityOperator, alpha: complex) -> float:
    """Normalized off-diagonal coherence |<alpha| rho |-alpha>|.

    Normalized by the ceiling (1 + e^{-2|alpha|^2})/2 attained by a fresh
    even cat, so a freshly prepared psi1=0 cat reads exactly 1 and a
    50/50 statistical mixture reads ~2 e^{-2|alpha|^2}.
    """
    spec = rho.spec
    plus = coherent_state(spec, alpha).amplitudes
    minus = coherent_state(spec, -alpha).amplitudes
    element = np.vdot(plus, rho.matrix @ minus)
    ceiling = (1.0 + np.exp(-2.0 * abs(alpha) ** 2)) / 2.0
    return float(abs(element) / ceiling)


def decoherence_time(model: DampingModel, mean_n: float) -> float:
    """Dissipation time divided by twice the mean photon number."""
    if mean_n <= 0:
        raise DomainError(f"mean_n must be positive, got {mean_n}")
    return model.dissipation_time / (2.0 * mean_n)


def separation_measure(d: float, mass: float, temperature: float) -> float:
    """(d / lambda_dB)^2 with the thermal de Broglie wavelength h/sqrt(2 pi m k T)."""
    if d <= 0 or mass <= 0 or temperature <= 0:
        raise DomainError("d, mass and temperature must all be positive")
    lam = Planck / np.sqrt(2.0 * np.pi * mass * Boltzmann * temperature)
    return float((d / lam) ** 2)


def fit_coherence_decay(rho0: DensityOperator, model: DampingModel, alpha: complex,
                        t_max: float, n_points: int = 25) -> float:
    """Log-linear fit of cat_coherence over [0, t_max]; returns the time constant."""
    times = np.linspace(0.0, t_max, n_points)
    traj = evolve_trajectory(rho0, model, times)
    w = np.array([cat_coherence(r, alpha) for r in traj])
    w0 = w[0]
    if w0 <= 0:
        raise DomainError("initial coherence vanishes; nothing to fit")
    slope = np.polyfit(times, np.log(np.abs(w / w0)), 1)[0]
    if slope >= 0:
        raise DomainError("coherence did not decay over the fit window")
    return float(-1.0 / slope)
