"""Phase-space representations of the cavity field.

Two independent constructions of the Wigner function are provided and
cross-checked by the test suite:

* ``wigner_point`` -- displaced-parity form W(alpha) = 2 Tr[rho D(alpha) P D(alpha)^-1],
  normalized so that integral(d^2alpha/pi) W = 1 and |W| <= 2.
* ``wigner_position`` -- the position-representation integral
  (1/2pi) int e^{ipx} <q-x/2| rho |q+x/2> dx, evaluated with Hermite
  functions and Gauss-Hermite quadrature, then rescaled by 2pi to the
  same normalization.  The evaluation point is first rotated onto the
  positive q-axis (phase rotations are exact on the truncated space),
  which keeps the quadrature free of oscillatory factors and spectrally
  exact at any order `dim`.

Coordinates: alpha = (q1 + i q2)/sqrt(2); maps are sampled on quadrature
grids and the normalization sum uses the measure dq1 dq2 / (2 pi).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_hermite

from .errors import DomainError, NonHermitianError, QuadratureError, TruncationError
from .fock import (
    DensityOperator,
    FieldState,
    HilbertSpec,
    default_dim,
    promote,
    pure_to_density,
)

BOUND = 2.0  # |W| <= 2 in this normalization


# ---------------------------------------------------------------------------
# grids and maps


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform rectangular grid in the quadrature plane (q1, q2)."""

    q1_min: float
    q1_max: float
    q2_min: float
    q2_max: float
    n1: int
    n2: int

    def __post_init__(self):
        if not (self.q1_max > self.q1_min and self.q2_max > self.q2_min):
            raise DomainError("grid extents must satisfy max > min")
        if self.n1 < 2 or self.n2 < 2:
            raise DomainError("grid needs at least 2 points per axis")

    @property
    def q1_axis(self) -> np.ndarray:
        return np.linspace(self.q1_min, self.q1_max, self.n1)

    @property
    def q2_axis(self) -> np.ndarray:
        return np.linspace(self.q2_min, self.q2_max, self.n2)

    @property
    def cell_area(self) -> float:
        d1 = (self.q1_max - self.q1_min) / (self.n1 - 1)
        d2 = (self.q2_max - self.q2_min) / (self.n2 - 1)
        return d1 * d2

    def alpha_grid(self) -> np.ndarray:
        """alpha[i, j] for q1_axis[i], q2_axis[j]."""
        q1 = self.q1_axis[:, None]
        q2 = self.q2_axis[None, :]
        return (q1 + 1j * q2) / np.sqrt(2.0)

    def corner_radius(self) -> float:
        """Largest |alpha| reached by the grid."""
        r1 = max(abs(self.q1_min), abs(self.q1_max))
        r2 = max(abs(self.q2_min), abs(self.q2_max))
        return float(np.sqrt((r1 ** 2 + r2 ** 2) / 2.0))

    def reflected(self) -> "PhaseSpaceGrid":
        return PhaseSpaceGrid(-self.q1_max, -self.q1_min, -self.q2_max, -self.q2_min,
                              self.n1, self.n2)


def default_grid(alpha_max: float, step: float = 0.075, pad: float = 4.0) -> PhaseSpaceGrid:
    """Figure-class grid: spans the state's lobes plus `pad` quadrature units."""
    span = np.sqrt(2.0) * abs(alpha_max) + pad
    n = int(math.ceil(2.0 * span / step)) + 1
    return PhaseSpaceGrid(-span, span, -span, span, n, n)


@dataclass(frozen=True)
class WignerMap:
    """W sampled on a grid, alpha-normalized (|W| <= 2, sum*dA/2pi ~ 1)."""

    grid: PhaseSpaceGrid
    values: np.ndarray
    convention: str = "alpha-normalized"
    provenance: str = "exact"
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n1, self.grid.n2):
            raise ValueError(f"values shape {v.shape} != grid ({self.grid.n1}, {self.grid.n2})")
        object.__setattr__(self, "values", v)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def normalization_sum(self) -> float:
        return float(self.values.sum() * self.grid.cell_area / (2.0 * np.pi))

    def check_bound(self, tol: float = 1e-8) -> None:
        if self.max_abs() > BOUND + tol:
            raise DomainError(f"|W| = {self.max_abs()} exceeds bound {BOUND} + {tol}")


# ---------------------------------------------------------------------------
# displaced-parity construction


@lru_cache(maxsize=16)
def _displacement_eigensystem(dim: int):
    """Eigendecomposition of i(a^dag - a); D(r) = V exp(-i r w) V^dag for real r."""
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    h = 1j * (a.conj().T - a)
    w, v = np.linalg.eigh(h)
    return w, v


def _displacement_matrix(dim: int, alpha: complex) -> np.ndarray:
    """D(alpha) through the cached eigensystem; equals the matrix exponential."""
    w, v = _displacement_eigensystem(dim)
    r, theta = abs(alpha), np.angle(alpha)
    d_real = (v * np.exp(-1j * r * w)) @ v.conj().T
    ph = np.exp(1j * theta * np.arange(dim))
    return ph[:, None] * d_real * ph.conj()[None, :]


_PARITY_SIGNS = lru_cache(maxsize=32)(lambda dim: (-1.0) ** np.arange(dim))


def wigner_point(rho: DensityOperator, alpha: complex) -> float:
    """W(alpha) = 2 Tr[rho D(alpha) P D(alpha)^-1]."""
    rho.spec.guard(alpha)
    dim = rho.dim
    d = _displacement_matrix(dim, alpha)
    a = rho.matrix @ d
    diag = np.einsum("jk,jk->k", d.conj(), a)
    val = 2.0 * complex(np.dot(_PARITY_SIGNS(dim), diag))
    if abs(val.imag) > 1e-6:
        raise NonHermitianError(f"Wigner imaginary residue {val.imag:.3e} exceeds 1e-6")
    return float(val.real)


def _separable_values(rho_mat: np.ndarray, q1_axis: np.ndarray,
                      q2_axis: np.ndarray) -> np.ndarray:
    """Displaced-parity W on a rectangular grid via the split
    D(x + iy) ~ D(iy) D(x): the scalar phase of the split cancels in the
    conjugation, so W[i, j] = 2 Tr[(D_yj^+ rho D_yj) (D_xi P D_xi^+)].
    Row and column factors cost one operator build each; every grid point
    is then a dim^2 inner product.  Agrees with pointwise ``wigner_point``
    to ~1e-10 inside the truncation guard (covered by the test suite).
    """
    dim = rho_mat.shape[0]
    signs = _PARITY_SIGNS(dim)
    xs = q1_axis / np.sqrt(2.0)   # Re(alpha) along rows
    ys = q2_axis / np.sqrt(2.0)   # Im(alpha) along columns
    row_ops = np.empty((xs.size, dim * dim), dtype=complex)
    for i, x in enumerate(xs):
        d = _displacement_matrix(dim, complex(x))
        m = d @ (signs[:, None] * d.conj().T)      # D(x) P D(x)^+
        row_ops[i] = m.T.ravel()                   # stored transposed for the trace
    values = np.empty((xs.size, ys.size))
    imag_max = 0.0
    for j, y in enumerate(ys):
        d = _displacement_matrix(dim, 1j * complex(y))
        r = d.conj().T @ rho_mat @ d               # D(iy)^+ rho D(iy)
        traces = 2.0 * (row_ops @ r.ravel())
        imag_max = max(imag_max, float(np.max(np.abs(traces.imag))))
        values[:, j] = traces.real
    if imag_max > 1e-6:
        raise NonHermitianError(f"Wigner imaginary residue {imag_max:.3e} exceeds 1e-6")
    return values


def map_eval_dim(grid: PhaseSpaceGrid, rho: DensityOperator) -> int:
    """Truncation needed to displace `rho` anywhere on `grid` faithfully:
    covers the displaced state's mean photon number plus its spread."""
    reach = grid.corner_radius() + _phase_space_radius(rho)
    return max(default_dim(grid.corner_radius()),
               int(math.ceil(reach ** 2 + 7.0 * reach + 10.0)))


def wigner_map(rho: DensityOperator, grid: PhaseSpaceGrid,
               auto_promote: bool = True) -> WignerMap:
    """Displaced-parity W over the grid, with bound/normalization checks."""
    need = map_eval_dim(grid, rho)
    if rho.dim < need:
        if not auto_promote:
            raise TruncationError(
                f"grid reaches |alpha| = {grid.corner_radius():.2f}, needs dim >= {need}"
            )
        rho = promote(rho, HilbertSpec(need))
    values = _separable_values(rho.matrix, grid.q1_axis, grid.q2_axis)
    wm = WignerMap(grid, values,
                   diagnostics={"max_abs": float(np.max(np.abs(values)))})
    wm.check_bound()
    wm.diagnostics["normalization_sum"] = wm.normalization_sum()
    return wm


# ---------------------------------------------------------------------------
# position-representation construction


def hermite_functions(x, nmax: int) -> np.ndarray:
    """Oscillator eigenfunctions psi_n(x), n < nmax, by stable upward recurrence."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros((nmax, x.size))
    out[0] = np.pi ** -0.25 * np.exp(-x * x / 2.0)
    if nmax > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(2, nmax):
        out[n] = np.sqrt(2.0 / n) * x * out[n - 1] - np.sqrt((n - 1) / n) * out[n - 2]
    return out


@lru_cache(maxsize=32)
def _gh_nodes(order: int):
    x, w = roots_hermite(order)
    return x, w * np.exp(x * x)  # total weights for integrands carrying e^{-x^2}


def _rotate_to_axis(rho: DensityOperator, q: float, p: float):
    """Rotate the state so the evaluation point lands on the positive q1 axis."""
    theta = math.atan2(p, q)
    r = math.hypot(q, p)
    n = np.arange(rho.dim)
    ph = np.exp(1j * theta * n)
    rotated = rho.matrix * np.multiply.outer(ph.conj(), ph)
    return rotated, r


def _axis_position_integral(rho_mat: np.ndarray, q: float, order: int) -> float:
    dim = rho_mat.shape[0]
    u, wts = _gh_nodes(order)
    psi_minus = hermite_functions(q - u, dim)
    psi_plus = hermite_functions(q + u, dim)
    a = rho_mat @ psi_plus
    val = 2.0 * complex(np.einsum("k,mk,mk->", wts, psi_minus, a))
    return float(val.real), float(abs(val.imag))


def wigner_position(rho: DensityOperator, q: float, p: float) -> float:
    """W from the position-representation integral, rescaled by 2pi so that
    wigner_position(rho, q, p) == wigner_point(rho, (q + i p)/sqrt(2))."""
    if not (np.isfinite(q) and np.isfinite(p)):
        raise DomainError(f"(q, p) must be finite, got ({q}, {p})")
    rotated, q_axis = _rotate_to_axis(rho, q, p)
    order = rho.dim + 32
    val, imag = _axis_position_integral(rotated, q_axis, order)
    if imag > 1e-6:
        raise NonHermitianError(f"position-integral imaginary residue {imag:.3e}")
    check, _ = _axis_position_integral(rotated, q_axis, order + 24)
    if abs(check - val) > 1e-9 * max(1.0, abs(val)):
        raise QuadratureError(
            f"Gauss-Hermite orders {order}/{order + 24} disagree by {abs(check - val):.3e}"
        )
    return val


# ---------------------------------------------------------------------------
# marginals


def position_density(rho: DensityOperator, qs) -> np.ndarray:
    """<q| rho |q> on an array of positions."""
    qs = np.atleast_1d(np.asarray(qs, dtype=float))
    psi = hermite_functions(qs, rho.dim)
    return np.real(np.einsum("mj,mn,nj->j", psi, rho.matrix, psi))


def marginal_distribution(rho: DensityOperator, theta: float, q_theta) -> np.ndarray:
    """P(q_theta) = <q_theta| rho |q_theta> for the rotated quadrature
    q_theta = q1 cos(theta) + q2 sin(theta)."""
    if not 0.0 <= theta < np.pi:
        raise DomainError(f"theta must lie in [0, pi), got {theta}")
    n = np.arange(rho.dim)
    ph = np.exp(-1j * theta * n)
    rotated = DensityOperator(rho.matrix * np.multiply.outer(ph, ph.conj()))
    out = position_density(rotated, q_theta)
    return out if np.ndim(q_theta) else float(out[0])


def radon_of_map(wmap: WignerMap, theta: float, q_out=None) -> tuple[np.ndarray, np.ndarray]:
    """Line-integral marginal of a sampled map: P(q_theta) = int W_qp ds along
    the direction conjugate to theta.  Returns (q_theta values, P values)."""
    if not 0.0 <= theta < np.pi:
        raise DomainError(f"theta must lie in [0, pi), got {theta}")
    from scipy.interpolate import RegularGridInterpolator

    g = wmap.grid
    interp = RegularGridInterpolator(
        (g.q1_axis, g.q2_axis), wmap.values / (2.0 * np.pi),
        bounds_error=False, fill_value=0.0,
    )
    if q_out is None:
        half = min(g.q1_max, g.q2_max)
        q_out = np.linspace(-half, half, max(g.n1, g.n2))
    q_out = np.atleast_1d(np.asarray(q_out, dtype=float))
    radius = math.hypot(max(abs(g.q1_min), g.q1_max), max(abs(g.q2_min), g.q2_max))
    step = min((g.q1_max - g.q1_min) / (g.n1 - 1), (g.q2_max - g.q2_min) / (g.n2 - 1))
    s = np.arange(-radius, radius + step, step)
    c, sn = np.cos(theta), np.sin(theta)
    pts1 = q_out[:, None] * c - s[None, :] * sn
    pts2 = q_out[:, None] * sn + s[None, :] * c
    vals = interp(np.stack([pts1.ravel(), pts2.ravel()], axis=-1)).reshape(pts1.shape)
    return q_out, np.trapezoid(vals, dx=step, axis=1)


# ---------------------------------------------------------------------------
# Moyal averages


@dataclass(frozen=True)
class MoyalResult:
    operator_value: float
    integral_value: float
    discrepancy: float


def _symmetrized_word(dim: int, m: int, n: int) -> np.ndarray:
    """Average of all distinct orderings of m factors q1 and n factors q2."""
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    qop = (a + a.conj().T) / np.sqrt(2.0)
    pop = (a - a.conj().T) / (1j * np.sqrt(2.0))
    letters = ("q",) * m + ("p",) * n
    orders = set(itertools.permutations(letters))
    acc = np.zeros((dim, dim), dtype=complex)
    for order in orders:
        term = np.eye(dim, dtype=complex)
        for letter in order:
            term = term @ (qop if letter == "q" else pop)
        acc += term
    return acc / len(orders)


def _support_radius(rho: DensityOperator, tail: float = 1e-10) -> float:
    """Fock-shell radius: sqrt(n_eff + 1) with n_eff the last level carrying
    more than `tail` population.  Bounds the extent of quadrature marginals."""
    p = np.abs(rho.diagonal())
    idx = np.nonzero(p > tail)[0]
    n_eff = int(idx[-1]) if idx.size else 0
    return math.sqrt(n_eff + 1.0)


def _phase_space_radius(rho: DensityOperator) -> float:
    """Radius (in alpha units) beyond which W is Gaussian-suppressed."""
    p = np.clip(rho.diagonal(), 0.0, None)
    p = p / p.sum()
    n = np.arange(rho.dim)
    mean = float(p @ n)
    var = float(p @ (n - mean) ** 2)
    return math.sqrt(mean + 1.0) + 0.5 * math.sqrt(math.sqrt(var + 1.0)) + 1.5


def moyal_grid_integral(rho: DensityOperator, monomials, step: float = 0.2,
                        pad: float = 4.0) -> dict[tuple[int, int], float]:
    """Phase-space integrals int dq dp W_qp q^m p^n for several monomials,
    sharing one displaced-parity evaluation over a disc covering the state.

    `pad` (alpha units) controls the discarded Gaussian tail: contributions
    beyond the disc are O(e^{-2 pad^2} poly) < 1e-9 for degree <= 4 at the
    default.
    """
    disc = _phase_space_radius(rho) + pad
    extent = np.sqrt(2.0) * disc            # bounding square in quadrature units
    axis = np.arange(-extent, extent + step / 2, step)
    big = promote(rho, HilbertSpec(default_dim(disc)))
    w_vals = _separable_values(big.matrix, axis, axis)
    q1, q2 = np.meshgrid(axis, axis, indexing="ij")
    w_vals[(q1 ** 2 + q2 ** 2) / 2.0 > disc ** 2] = 0.0
    out = {}
    for (m, n) in monomials:
        integrand = w_vals * q1 ** m * q2 ** n / (2.0 * np.pi)
        out[(m, n)] = float(integrand.sum() * step * step)
    return out


def moyal_average(rho: DensityOperator, monomial: tuple[int, int],
                  step: float = 0.2) -> MoyalResult:
    """Both sides of the symmetric-ordering correspondence for q^m p^n."""
    m, n = monomial
    if m < 0 or n < 0 or m + n > 4:
        raise TruncationError(f"monomial degree {m + n} outside the guarded range (<= 4)")
    # the symmetrized word couples levels at most (degree) apart, so only the
    # top few levels can feed truncation error into the operator-side trace
    margin = m + n + 2
    margin_pop = float(np.sum(np.abs(rho.diagonal()[max(0, rho.dim - margin):])))
    if margin_pop > 1e-10:
        raise TruncationError(
            f"state occupies the top {margin} Fock levels (mass {margin_pop:.2e}); "
            "enlarge dim"
        )
    op = _symmetrized_word(rho.dim, m, n)
    op_val = float(np.real(np.trace(rho.matrix @ op)))
    int_val = moyal_grid_integral(rho, [monomial], step=step)[monomial]
    return MoyalResult(op_val, int_val, abs(op_val - int_val))


# ---------------------------------------------------------------------------
# photon statistics and the marginals-only ambiguity


def photon_number_distribution(rho: DensityOperator) -> np.ndarray:
    p = rho.diagonal()
    if abs(p.sum() - 1.0) > 1e-10:
        raise ValueError(f"diagonal sums to {p.sum()}, not 1 within 1e-10")
    return p


@dataclass(frozen=True)
class PauliPair:
    """Two states sharing both position and momentum marginals."""

    state_a: FieldState
    state_b: FieldState
    evidence: dict


def pauli_counterexample(spec: HilbertSpec) -> PauliPair:
    """Conjugate pair (|0> + i|2>)/sqrt(2), (|0> - i|2>)/sqrt(2): identical
    position AND momentum marginals, different Wigner functions."""
    if spec.dim < 3:
        raise DomainError("need dim >= 3 for the counterexample")
    amps = np.zeros(spec.dim, dtype=complex)
    amps[0], amps[2] = 1.0 / np.sqrt(2.0), 1j / np.sqrt(2.0)
    state_a = FieldState(amps)
    state_b = FieldState(amps.conj())
    rho_a, rho_b = pure_to_density(state_a), pure_to_density(state_b)
    qs = np.linspace(-6.0, 6.0, 241)
    dev0 = float(np.max(np.abs(marginal_distribution(rho_a, 0.0, qs)
                               - marginal_distribution(rho_b, 0.0, qs))))
    dev90 = float(np.max(np.abs(marginal_distribution(rho_a, np.pi / 2, qs)
                                - marginal_distribution(rho_b, np.pi / 2, qs))))
    dev45 = float(np.max(np.abs(marginal_distribution(rho_a, np.pi / 4, qs)
                                - marginal_distribution(rho_b, np.pi / 4, qs))))
    probe = default_grid(2.0, step=0.15)
    wig_dev = float(np.max(np.abs(wigner_map(rho_a, probe).values
                                  - wigner_map(rho_b, probe).values)))
    return PauliPair(state_a, state_b, {
        "marginal_dev_theta_0": dev0,
        "marginal_dev_theta_90": dev90,
        "marginal_dev_theta_45": dev45,
        "wigner_sup_deviation": wig_dev,
    })


# ---------------------------------------------------------------------------
# fringe diagnostics (cat-state interference region)


def fringe_region_mask(grid: PhaseSpaceGrid, half_width: float = 0.5) -> np.ndarray:
    """Strip |q1| <= half_width between the lobes of a cat aligned with q1."""
    return np.abs(grid.q1_axis)[:, None] <= half_width + 0 * grid.q2_axis[None, :]


def fringe_contrast(wmap: WignerMap, half_width: float = 0.5) -> float:
    """Peak-to-trough swing of W inside the interference strip."""
    m = fringe_region_mask(wmap.grid, half_width)
    vals = wmap.values[m]
    return float(vals.max() - vals.min())
