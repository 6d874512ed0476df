"""Atom-field experiment engine: Ramsey zones, conditional phase shifts,
projective detection, cat preparation, and the two-atom correlation monitor.

Pulse convention (fixed throughout): each Ramsey zone applies
    |e> -> (|e> + |g>)/sqrt(2),   |g> -> (-|e> + |g>)/sqrt(2),
so two zones on an empty cavity act as a pi pulse, e -> g.  A nonzero
`eta` inserts the relative phase e^{i eta} on |e> just before the second
zone; a nonzero `ramsey_phase` rotates the microwave phase of both zones
(detection probabilities are invariant under it).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import DampingModel, evolve_trajectory
from .errors import DegenerateBranchError, DomainError, SubspaceError
from .fock import (
    DensityOperator,
    FieldState,
    HilbertSpec,
    coherent_state,
    default_dim,
)

_E, _G = 0, 1  # atom level indices


@dataclass(frozen=True)
class AtomState:
    """Two-level atom amplitudes on |e>, |g>."""

    amp_e: complex
    amp_g: complex

    def __post_init__(self):
        n = abs(self.amp_e) ** 2 + abs(self.amp_g) ** 2
        if abs(n - 1.0) > 1e-10:
            raise ValueError(f"atom norm^2 = {n} deviates from 1")

    @staticmethod
    def excited() -> "AtomState":
        return AtomState(1.0, 0.0)

    @staticmethod
    def ground() -> "AtomState":
        return AtomState(0.0, 1.0)


@dataclass(frozen=True)
class ProtocolConfig:
    """Per-photon conditional phase, Ramsey zone phase, and R2 dephasing."""

    phi: float = np.pi
    ramsey_phase: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        for name in ("phi", "ramsey_phase", "eta"):
            if not np.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")


class JointState:
    """Atom (x) field state, kept pure (amplitude array) while possible.

    pure:  amp[s, n], s in {e, g}
    mixed: rho[s, n, s', n']
    """

    def __init__(self, data: np.ndarray, pure: bool):
        data = np.asarray(data, dtype=complex)
        if pure:
            if data.ndim != 2 or data.shape[0] != 2:
                raise ValueError(f"pure joint state needs shape (2, dim), got {data.shape}")
        else:
            if data.ndim != 4 or data.shape[0] != 2 or data.shape[2] != 2 \
                    or data.shape[1] != data.shape[3]:
                raise ValueError(f"mixed joint state needs shape (2, d, 2, d), got {data.shape}")
        self._data = data
        self.pure = pure

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_product(atom: AtomState, field) -> "JointState":
        if isinstance(field, FieldState):
            amp = np.zeros((2, field.dim), dtype=complex)
            amp[_E] = atom.amp_e * field.amplitudes
            amp[_G] = atom.amp_g * field.amplitudes
            return JointState(amp, pure=True)
        if isinstance(field, DensityOperator):
            atom_rho = np.array(
                [[atom.amp_e * np.conj(atom.amp_e), atom.amp_e * np.conj(atom.amp_g)],
                 [atom.amp_g * np.conj(atom.amp_e), atom.amp_g * np.conj(atom.amp_g)]]
            )
            rho = np.einsum("ac,nm->ancm", atom_rho, field.matrix)
            return JointState(rho, pure=False)
        raise TypeError(f"field must be FieldState or DensityOperator, got {type(field)}")

    # -- basics ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._data.shape[1]

    def norm_or_trace(self) -> float:
        if self.pure:
            return float(np.linalg.norm(self._data))
        return float(np.real(np.einsum("anan->", self._data)))

    def amplitudes(self) -> np.ndarray:
        if not self.pure:
            raise ValueError("mixed joint state has no amplitude vector")
        return self._data.copy()

    def density(self) -> np.ndarray:
        if self.pure:
            return np.einsum("an,cm->ancm", self._data, self._data.conj())
        return self._data.copy()

    def reduced_field(self) -> DensityOperator:
        rho = self.density()
        return DensityOperator(np.einsum("anam->nm", rho))

    def reduced_atom(self) -> np.ndarray:
        rho = self.density()
        return np.einsum("ancn->ac", rho)

    # -- elementary transformations ----------------------------------------

    def _apply_atom_unitary(self, u: np.ndarray) -> "JointState":
        if self.pure:
            return JointState(np.einsum("ab,bn->an", u, self._data), pure=True)
        rho = np.einsum("ab,bndm,cd->ancm", u, self._data, u.conj())
        return JointState(rho, pure=False)

    def _apply_conditional_phases(self, f: np.ndarray) -> "JointState":
        # f[s, n]: diagonal phase per atom level and photon number
        if self.pure:
            return JointState(self._data * f, pure=True)
        rho = self._data * f[:, :, None, None] * f.conj()[None, None, :, :]
        return JointState(rho, pure=False)


# ---------------------------------------------------------------------------
# protocol steps


def _pulse_matrix(chi: float) -> np.ndarray:
    return np.array([[1.0, -np.exp(1j * chi)],
                     [np.exp(-1j * chi), 1.0]]) / np.sqrt(2.0)


def ramsey_pulse(state: JointState, which: str, config: ProtocolConfig) -> JointState:
    """Apply the pi/2 zone R1 or R2 (R2 first dephases |e> by e^{i eta})."""
    if which not in ("R1", "R2"):
        raise ValueError(f"which must be 'R1' or 'R2', got {which!r}")
    u = _pulse_matrix(config.ramsey_phase)
    if which == "R2" and config.eta != 0.0:
        u = u @ np.diag([np.exp(1j * config.eta), 1.0])
    return state._apply_atom_unitary(u)


def dispersive_shift(state: JointState, config: ProtocolConfig) -> JointState:
    """e^{i phi n} on the field when the atom is |e>; identity for |g>."""
    n = np.arange(state.dim)
    f = np.stack([np.exp(1j * config.phi * n), np.ones(state.dim)])
    return state._apply_conditional_phases(f)


def opposite_phase_shift(state: JointState, config: ProtocolConfig) -> JointState:
    """Dispersive shifts of opposite sign for the two atomic levels.

    The |g> branch rotates the field by e^{-i phi n}; the |e> branch by
    e^{+i phi n} times the constant differential Stark phase e^{-i phi}.
    That constant is what makes the phi = pi/2 shift, read out with an
    eta = pi/2 dephasing on the second zone, reproduce the standard
    phi = pi conditional-parity measurement.
    """
    n = np.arange(state.dim)
    f = np.stack([np.exp(1j * config.phi * (n - 1)), np.exp(-1j * config.phi * n)])
    return state._apply_conditional_phases(f)


def resonant_2pi(state: JointState) -> JointState:
    """Sign flip of the |e>|1> amplitude; exact only on the {0,1} subspace."""
    if state.pure:
        leak = float(np.sum(np.abs(state._data[_E, 2:]) ** 2))
    else:
        leak = float(np.real(np.einsum("nn->", state._data[_E, 2:, _E, 2:])))
    if leak > 1e-8:
        raise SubspaceError(
            f"|e>-sector population {leak:.3e} above n=1; resonant trick is not exact"
        )
    f = np.ones((2, state.dim))
    if state.dim > 1:
        f[_E, 1] = -1.0
    return state._apply_conditional_phases(f.astype(complex))


@dataclass(frozen=True)
class Branch:
    """One projective-detection branch with its normalized field state."""

    outcome: str
    probability: float
    field_after: Optional[DensityOperator]

    def field(self) -> DensityOperator:
        if self.field_after is None:
            raise DegenerateBranchError(
                f"branch {self.outcome!r} has probability {self.probability:.3e}; "
                "no normalized post-measurement state exists"
            )
        return self.field_after


def detect_atom(state: JointState) -> dict[str, Branch]:
    """Project onto |e>/|g>; returns both branches with Born probabilities."""
    out = {}
    for idx, name in ((_E, "e"), (_G, "g")):
        if state.pure:
            vec = state._data[idx]
            p = float(np.real(np.vdot(vec, vec)))
            rho = np.outer(vec, vec.conj()) / p if p >= 1e-14 else None
        else:
            block = state._data[idx, :, idx, :]
            p = float(np.real(np.trace(block)))
            rho = block / p if p >= 1e-14 else None
        out[name] = Branch(name, p, DensityOperator(rho) if rho is not None else None)
    return out


# ---------------------------------------------------------------------------
# composite experiments


def _interaction(state: JointState, config: ProtocolConfig, variant: str) -> JointState:
    if variant == "dispersive":
        return dispersive_shift(state, config)
    if variant == "opposite":
        return opposite_phase_shift(state, config)
    if variant == "resonant-2pi":
        return resonant_2pi(state)
    raise ValueError(f"unknown interaction variant {variant!r}")


def probe_atom(field, config: ProtocolConfig | None = None,
               variant: str = "dispersive") -> dict[str, Branch]:
    """Send one atom (prepared in |e>) through R1 -> interaction -> R2 -> detector."""
    config = config or ProtocolConfig()
    joint = JointState.from_product(AtomState.excited(), field)
    joint = ramsey_pulse(joint, "R1", config)
    joint = _interaction(joint, config, variant)
    joint = ramsey_pulse(joint, "R2", config)
    return detect_atom(joint)


def prepare_cat(alpha: complex, config: ProtocolConfig | None = None,
                spec: HilbertSpec | None = None) -> dict[str, Branch]:
    """Inject |alpha>, run one atom through the interferometer, detect.

    Detecting g leaves the even cat (psi1 = 0), detecting e the odd cat
    (psi1 = pi), with probabilities (1 +- e^{-2|alpha|^2})/2.
    """
    config = config or ProtocolConfig()
    if abs((config.phi - np.pi + np.pi) % (2 * np.pi) - np.pi) > 1e-12:
        raise DomainError(f"cat preparation requires phi = pi, got {config.phi}")
    spec = spec or HilbertSpec(default_dim(abs(alpha)))
    return probe_atom(coherent_state(spec, alpha), config)


@dataclass(frozen=True)
class ConditionalTable:
    """Two-atom outcome statistics at one delay."""

    alpha: complex
    delay: float
    p_e1: float
    p_g1: float
    p_e2_given_e1: float
    p_g2_given_e1: float
    p_e2_given_g1: float
    p_g2_given_g1: float
    p_e2: float
    p_g2: float


def two_atom_scan(alpha: complex, delays, model: DampingModel,
                  config: ProtocolConfig | None = None,
                  spec: HilbertSpec | None = None) -> list[ConditionalTable]:
    """Delay scan of the two-atom correlations, sharing one damping
    trajectory per first-atom branch."""
    config = config or ProtocolConfig()
    delays = np.asarray(delays, dtype=float)
    first = prepare_cat(alpha, config, spec)
    degenerate = {o: first[o].field_after is None for o in ("e", "g")}
    trajs = {}
    for o in ("e", "g"):
        if not degenerate[o]:
            trajs[o] = evolve_trajectory(first[o].field_after, model, delays)
    rows = []
    for k, delay in enumerate(delays):
        cond = {}
        for o in ("e", "g"):
            if degenerate[o]:
                cond[o] = {"e": np.nan, "g": np.nan}
            else:
                second = probe_atom(trajs[o][k], config)
                cond[o] = {s: second[s].probability for s in ("e", "g")}
        p_e1, p_g1 = first["e"].probability, first["g"].probability
        p_e2 = sum(first[o].probability * cond[o]["e"]
                   for o in ("e", "g") if not degenerate[o])
        rows.append(ConditionalTable(
            alpha=alpha, delay=float(delay),
            p_e1=p_e1, p_g1=p_g1,
            p_e2_given_e1=cond["e"]["e"], p_g2_given_e1=cond["e"]["g"],
            p_e2_given_g1=cond["g"]["e"], p_g2_given_g1=cond["g"]["g"],
            p_e2=p_e2, p_g2=1.0 - p_e2,
        ))
    return rows


def two_atom_conditional(alpha: complex, delay: float, model: DampingModel,
                         config: ProtocolConfig | None = None,
                         spec: HilbertSpec | None = None) -> ConditionalTable:
    """Conditional probabilities P(o2 | o1) with a damping delay between atoms."""
    if delay < 0:
        raise DomainError(f"delay must be >= 0, got {delay}")
    return two_atom_scan(alpha, [delay], model, config, spec)[0]
