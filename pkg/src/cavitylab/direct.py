"""Direct Wigner measurement: inject a coherent amplitude, run one atom
through the Ramsey interferometer with a conditional phase shift, and read
the detection probabilities.

Defining identity (the module's executable contract): with a pi-per-photon
conditional shift,
    P_g - P_e = W(-alpha, -alpha*) / 2,
so 2 (P_g - P_e) equals ``wigner.wigner_point(rho0, -alpha)`` exactly in the
shared truncated space.  Detector inefficiency only erases shots, so the
estimator built from detected atoms stays unbiased.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import protocol
from .dynamics import DampingModel, decoherence_time, evolve_trajectory
from .errors import DomainError, NoDetectionError, SubspaceError
from .fock import DensityOperator, HilbertSpec, promote
from .protocol import ProtocolConfig
from .wigner import PhaseSpaceGrid, WignerMap, _displacement_matrix, map_eval_dim


@dataclass(frozen=True)
class MeasurementRecord:
    """One point of the direct scheme: exact Born probabilities plus the
    (optional) finite-shot estimate built from detected atoms only."""

    alpha: complex
    p_e: float
    p_g: float
    n_shots: int
    n_detected: int
    estimate: float
    stderr: float

    def __post_init__(self):
        if abs(self.p_e + self.p_g - 1.0) > 1e-10:
            raise ValueError(f"P_e + P_g = {self.p_e + self.p_g} deviates from 1")
        if self.n_detected > self.n_shots:
            raise ValueError("n_detected cannot exceed n_shots")


def _require_pi(config: ProtocolConfig) -> None:
    if abs(((config.phi - np.pi) + np.pi) % (2 * np.pi) - np.pi) > 1e-12:
        raise DomainError(f"direct scheme requires phi = pi, got phi = {config.phi}")


def _inject(rho: DensityOperator, alpha: complex) -> DensityOperator:
    if alpha == 0:
        return rho
    rho.spec.guard(alpha)
    d = _displacement_matrix(rho.dim, alpha)
    return DensityOperator(d @ rho.matrix @ d.conj().T)


def _born_probabilities(rho0: DensityOperator, alpha: complex,
                        config: ProtocolConfig, variant: str) -> tuple[float, float]:
    displaced = _inject(rho0, alpha)
    branches = protocol.probe_atom(displaced, config, variant=variant)
    return branches["e"].probability, branches["g"].probability


def direct_point_exact(rho0: DensityOperator, alpha: complex,
                       config: ProtocolConfig | None = None) -> MeasurementRecord:
    """Exact Born probabilities of the standard (phi = pi) scheme at one alpha."""
    config = config or ProtocolConfig()
    _require_pi(config)
    p_e, p_g = _born_probabilities(rho0, alpha, config, "dispersive")
    return MeasurementRecord(alpha, p_e, p_g, 0, 0, 2.0 * (p_g - p_e), 0.0)


def direct_point_sampled(rho0: DensityOperator, alpha: complex, n_shots: int,
                         efficiency: float, seed,
                         config: ProtocolConfig | None = None) -> MeasurementRecord:
    """Bernoulli shots with per-shot detection probability `efficiency`;
    the estimate conditions on detected shots only and stays unbiased."""
    if n_shots < 1:
        raise DomainError(f"n_shots must be >= 1, got {n_shots}")
    if not 0.0 <= efficiency <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {efficiency}")
    config = config or ProtocolConfig()
    _require_pi(config)
    p_e, p_g = _born_probabilities(rho0, alpha, config, "dispersive")
    rng = np.random.default_rng(seed)
    outcomes_e = rng.random(n_shots) < p_e
    detected = rng.random(n_shots) < efficiency
    n_det = int(detected.sum())
    if n_det == 0:
        raise NoDetectionError(f"no detections in {n_shots} shots at efficiency {efficiency}")
    k_e = int((outcomes_e & detected).sum())
    frac_e = k_e / n_det
    estimate = 2.0 * (1.0 - 2.0 * frac_e)
    stderr = 4.0 * np.sqrt(max(frac_e * (1.0 - frac_e), 1.0 / (4.0 * n_det)) / n_det)
    return MeasurementRecord(alpha, p_e, p_g, n_shots, n_det, estimate, float(stderr))


def scan_map(rho0: DensityOperator, grid: PhaseSpaceGrid,
             config: ProtocolConfig | None = None,
             variant: str = "dispersive") -> WignerMap:
    """Exact direct-scheme estimates over an injection grid.

    The resulting map equals the displaced-parity map on the reflected grid
    (the identity carries -alpha on the phase-space side).
    """
    config = config or ProtocolConfig()
    if variant == "dispersive":
        _require_pi(config)
    need = map_eval_dim(grid, rho0)
    if rho0.dim < need:
        rho0 = promote(rho0, HilbertSpec(need))
    alphas = grid.alpha_grid()
    values = np.empty(alphas.shape)
    for i in range(alphas.shape[0]):
        for j in range(alphas.shape[1]):
            p_e, p_g = _born_probabilities(rho0, alphas[i, j], config, variant)
            values[i, j] = 2.0 * (p_g - p_e)
    wm = WignerMap(grid, values, provenance="measured-direct",
                   diagnostics={"max_abs": float(np.max(np.abs(values)))})
    wm.check_bound()
    wm.diagnostics["normalization_sum"] = wm.normalization_sum()
    return wm


@dataclass(frozen=True)
class MonitorPoint:
    t: float
    exact: MeasurementRecord
    sampled: Optional[MeasurementRecord]


def monitor_origin(rho0: DensityOperator, model: DampingModel, times,
                   config: ProtocolConfig | None = None,
                   n_shots: int = 0, efficiency: float = 1.0, seed=None,
                   shot_interval: float | None = None) -> list[MonitorPoint]:
    """W(0) read out by the direct scheme along a damping trajectory.

    For an even cat the series starts near +2, collapses toward 0 on the
    decoherence timescale, and climbs back to +2 as the field empties.
    """
    config = config or ProtocolConfig()
    _require_pi(config)
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0) or np.any(times < 0):
        raise DomainError("times must be sorted and nonnegative")
    if shot_interval is not None:
        mean_n = rho0.mean_photon()
        if mean_n > 0 and shot_interval > decoherence_time(model, mean_n):
            warnings.warn(
                f"shot interval {shot_interval} exceeds the decoherence time "
                f"{decoherence_time(model, mean_n):.3g}; consecutive shots will not "
                "resolve the coherence collapse", UserWarning)
    traj = evolve_trajectory(rho0, model, times)
    seq = np.random.SeedSequence(seed).spawn(len(traj)) if n_shots > 0 else None
    out = []
    for k, (t, rho_t) in enumerate(zip(times, traj)):
        exact = direct_point_exact(rho_t, 0.0, config)
        sampled = None
        if n_shots > 0:
            sampled = direct_point_sampled(rho_t, 0.0, n_shots, efficiency,
                                           seq[k], config)
        out.append(MonitorPoint(float(t), exact, sampled))
    return out


def variant_check(rho0: DensityOperator, variant: str, alpha: complex = 0.0,
                  config: ProtocolConfig | None = None) -> MeasurementRecord:
    """Run one of the alternative conditional-phase realizations.

    * ``"resonant-2pi"``: exact sign flip of |e>|1>; requires alpha = 0 and a
      field supported on the {0, 1} photon subspace.
    * ``"opposite-shift"``: dephasings of opposite sign for the two levels
      with phi = pi/2 and an eta = pi/2 dephasing on the second zone.

    Both reproduce ``direct_point_exact``'s estimate.
    """
    if variant == "resonant-2pi":
        if alpha != 0:
            raise DomainError("the resonant variant measures the origin only (alpha = 0)")
        tail = float(np.sum(np.abs(rho0.diagonal()[2:])))
        if tail > 1e-8:
            raise SubspaceError(
                f"field population {tail:.3e} above one photon; resonant variant invalid"
            )
        cfg = config or ProtocolConfig()
        p_e, p_g = _born_probabilities(rho0, 0.0, cfg, "resonant-2pi")
    elif variant == "opposite-shift":
        cfg = config or ProtocolConfig(phi=np.pi / 2, eta=np.pi / 2)
        if abs(cfg.phi - np.pi / 2) > 1e-12 or abs(cfg.eta - np.pi / 2) > 1e-12:
            raise DomainError("opposite-shift variant requires phi = pi/2, eta = pi/2")
        p_e, p_g = _born_probabilities(rho0, alpha, cfg, "opposite")
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return MeasurementRecord(alpha, p_e, p_g, 0, 0, 2.0 * (p_g - p_e), 0.0)
