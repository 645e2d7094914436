"""Split-operator spinor evolution on a periodic grid, scaled units.

The two-component wavefunction (psi_plus -> excited, psi_minus -> ground)
evolves under i*hbar_eff d(psi)/dt = H psi with either

* ``MatrixRot``: H = (p^2/2) I + M(x, t), the rotating-frame coupling matrix
  with its fast 2*gamma oscillations retained, or
* ``ScalarVariant(v)``: H = p^2/2 + V_v(x, t) acting identically on both
  components (single-surface evolution).

Stepping is Strang-split: half kinetic (diagonal in the spectral momentum
basis), full potential at the midpoint time, half kinetic.  The matrix
potential step uses the closed form exp(-i dt M/hbar) =
cos(phi) I - i sin(phi) M/r with r = sqrt(a^2+b1^2+b2^2), phi = dt*r/hbar,
so every step is unitary to round-off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadWeights, StabilityViolation
from .hamiltonians import HamiltonianVariant, potential, scaled_coupling
from .params import DimensionlessParams

TWO_PI = 2.0 * math.pi

#: Default spatial grid: periodic box [-32*pi, 32*pi) with 4096 points.
DEFAULT_N = 4096
DEFAULT_L = 32.0 * math.pi

#: Stability guard: dt * max(|V|, eigenvalue) / hbar_eff must stay below this.
STABILITY_LIMIT = 0.1


@dataclass(frozen=True)
class SpatialGrid:
    """Periodic position grid on [-half_width, half_width).

    ``n_points`` must be a power of two (>= 64) and ``half_width`` a multiple
    of pi so the 2*pi-periodic potentials close smoothly across the boundary.
    """

    n_points: int = DEFAULT_N
    half_width: float = DEFAULT_L

    def __post_init__(self):
        n = self.n_points
        if n < 64 or (n & (n - 1)) != 0:
            raise ValueError("n_points must be a power of two >= 64")
        ratio = self.half_width / math.pi
        if not (self.half_width > 0 and abs(ratio - round(ratio)) < 1e-9):
            raise ValueError("half_width must be a positive multiple of pi")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n_points,
                           endpoint=False)

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def wavenumbers(self) -> np.ndarray:
        return TWO_PI * np.fft.fftfreq(self.n_points, d=self.dx)


class MatrixRot:
    """Mode marker: evolve under the full rotating-frame coupling matrix."""


@dataclass(frozen=True)
class ScalarVariant:
    """Mode marker: evolve both components on one scalar surface."""

    variant: HamiltonianVariant


@dataclass
class SpinorField:
    """Two-component spinor on a periodic grid at time ``t``."""

    grid: SpatialGrid
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    t: float
    hbar_eff: float

    def norm(self) -> float:
        return float((np.sum(np.abs(self.psi_plus) ** 2)
                      + np.sum(np.abs(self.psi_minus) ** 2)) * self.grid.dx)

    @property
    def momenta(self) -> np.ndarray:
        return self.hbar_eff * self.grid.wavenumbers

    def copy(self) -> "SpinorField":
        return SpinorField(self.grid, self.psi_plus.copy(), self.psi_minus.copy(),
                           self.t, self.hbar_eff)


@dataclass
class ObservableSeries:
    """Strobe-boundary observables of one evolution."""

    k: np.ndarray
    norm: np.ndarray
    p_mean: np.ndarray
    p2_mean: np.ndarray
    pop_excited: np.ndarray
    snapshots: dict = field(default_factory=dict)

    def rows(self):
        for i in range(self.k.size):
            yield (int(self.k[i]), float(self.norm[i]), float(self.p_mean[i]),
                   float(self.p2_mean[i]), float(self.pop_excited[i]))


def init_gaussian(grid: SpatialGrid, x0: float, p0: float, sigma: float,
                  weights, hbar_eff: float = 0.5) -> SpinorField:
    """Normalized Gaussian packet exp(-(x-x0)^2/(4 sigma^2)) exp(i p0 x/hbar_eff)
    split between the components with amplitudes ``weights`` = (w_plus, w_minus).

    Raises :class:`BadWeights` unless |w+|^2 + |w-|^2 = 1.
    """
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    w_plus, w_minus = weights
    if abs(abs(w_plus) ** 2 + abs(w_minus) ** 2 - 1.0) > 1e-9:
        raise BadWeights("|w+|^2 + |w-|^2 must equal 1")
    x = grid.x
    envelope = np.exp(-((x - x0) ** 2) / (4.0 * sigma**2)
                      + 1j * p0 * x / hbar_eff)
    envelope /= math.sqrt(np.sum(np.abs(envelope) ** 2) * grid.dx)
    return SpinorField(grid=grid, psi_plus=w_plus * envelope,
                       psi_minus=w_minus * envelope, t=0.0, hbar_eff=hbar_eff)


# ---------------------------------------------------------------------------
# Stepping
# ---------------------------------------------------------------------------

def _kinetic_half_phase(s: SpinorField, dt: float) -> np.ndarray:
    # exp(-i T dt / (2 hbar)) with T = hbar^2 k^2 / 2
    k = s.grid.wavenumbers
    return np.exp(-0.25j * s.hbar_eff * k * k * dt)

def _apply_kinetic(s: SpinorField, phase: np.ndarray) -> None:
    s.psi_plus = np.fft.ifft(phase * np.fft.fft(s.psi_plus))
    s.psi_minus = np.fft.ifft(phase * np.fft.fft(s.psi_minus))


def _apply_matrix_potential(s: SpinorField, d: DimensionlessParams,
                            tk: float, dt: float, check: bool = True) -> None:
    a, b1, b2 = scaled_coupling(s.grid.x, tk, d)
    r = np.sqrt(a * a + b1 * b1 + b2 * b2)
    if check and dt * float(np.max(r)) / s.hbar_eff > STABILITY_LIMIT:
        raise StabilityViolation(
            f"dt*max(eigenvalue)/hbar_eff = {dt * float(np.max(r)) / s.hbar_eff:.3f} "
            f"> {STABILITY_LIMIT}; increase steps_per_period"
        )
    phi = dt * r / s.hbar_eff
    cosphi = np.cos(phi)
    # sin(phi)/r, finite at r -> 0 (limit dt/hbar_eff)
    sinc = np.where(r > 0, np.sin(phi) / np.where(r > 0, r, 1.0), dt / s.hbar_eff)
    b = b1 + 1j * b2
    up = cosphi * s.psi_plus - 1j * sinc * (a * s.psi_plus + b * s.psi_minus)
    um = cosphi * s.psi_minus - 1j * sinc * (np.conj(b) * s.psi_plus - a * s.psi_minus)
    s.psi_plus = up
    s.psi_minus = um


def _apply_scalar_potential(s: SpinorField, variant: HamiltonianVariant,
                            d: DimensionlessParams, tk: float, dt: float,
                            check: bool = True) -> None:
    v = np.asarray(potential(variant, s.grid.x, tk, d))
    if check and dt * float(np.max(np.abs(v))) / s.hbar_eff > STABILITY_LIMIT:
        raise StabilityViolation(
            f"dt*max|V|/hbar_eff = {dt * float(np.max(np.abs(v))) / s.hbar_eff:.3f} "
            f"> {STABILITY_LIMIT}; increase steps_per_period"
        )
    phase = np.exp(-1j * v * dt / s.hbar_eff)
    s.psi_plus = phase * s.psi_plus
    s.psi_minus = phase * s.psi_minus


def split_step(s: SpinorField, mode, d: DimensionlessParams, dt: float,
               frozen_time: float | None = None) -> SpinorField:
    """One Strang step of length ``dt``; returns a new field at t + dt.

    The potential factor is evaluated at the midpoint time t + dt/2 (or at
    ``frozen_time`` when given).  Raises :class:`StabilityViolation` when
    dt * max(|V|, eigenvalue) / hbar_eff exceeds 0.1.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    out = s.copy()
    half = _kinetic_half_phase(out, dt)
    tk = frozen_time if frozen_time is not None else s.t + 0.5 * dt
    _apply_kinetic(out, half)
    if isinstance(mode, ScalarVariant):
        _apply_scalar_potential(out, mode.variant, d, tk, dt)
    elif mode is MatrixRot or isinstance(mode, MatrixRot):
        _apply_matrix_potential(out, d, tk, dt)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    _apply_kinetic(out, half)
    out.t = s.t + dt
    return out


# ---------------------------------------------------------------------------
# Observables
# ---------------------------------------------------------------------------

def momentum_distribution(s: SpinorField):
    """(p, probability) over the spectral momentum grid, sorted by p,
    normalized to unit sum (Parseval)."""
    ft_p = np.fft.fft(s.psi_plus)
    ft_m = np.fft.fft(s.psi_minus)
    prob = np.abs(ft_p) ** 2 + np.abs(ft_m) ** 2
    prob = prob / np.sum(prob)
    p = s.momenta
    order = np.argsort(p)
    return p[order], prob[order]


def _momentum_moments(s: SpinorField):
    ft_p = np.fft.fft(s.psi_plus)
    ft_m = np.fft.fft(s.psi_minus)
    w = np.abs(ft_p) ** 2 + np.abs(ft_m) ** 2
    total = np.sum(w)
    p = s.momenta
    mean = float(np.sum(p * w) / total)
    second = float(np.sum(p * p * w) / total)
    return mean, second


def kinetic_expectation(s: SpinorField) -> float:
    _, p2 = _momentum_moments(s)
    return 0.5 * p2


def energy_expectation(s: SpinorField, mode, d: DimensionlessParams,
                       at_time: float | None = None) -> float:
    """<H> = <p^2/2> + <V> (scalar mode) or <p^2/2> + <M> (matrix mode)."""
    t = s.t if at_time is None else at_time
    dx = s.grid.dx
    kin = kinetic_expectation(s)
    if isinstance(mode, ScalarVariant):
        v = np.asarray(potential(mode.variant, s.grid.x, t, d))
        pot = float(np.sum(v * (np.abs(s.psi_plus) ** 2 + np.abs(s.psi_minus) ** 2)) * dx)
    else:
        a, b1, b2 = scaled_coupling(s.grid.x, t, d)
        b = b1 + 1j * b2
        pot = float(np.sum(
            a * (np.abs(s.psi_plus) ** 2 - np.abs(s.psi_minus) ** 2)
            + 2.0 * np.real(np.conj(s.psi_plus) * b * s.psi_minus)
        ) * dx)
    return (kin + pot) / s.norm()


def evolve(s: SpinorField, mode, d: DimensionlessParams, n_periods: int,
           steps_per_period: int = 256, snapshot_strobes=(),
           frozen_time: float | None = None):
    """Evolve for ``n_periods`` modulation periods, recording observables at
    every period boundary.

    Returns ``(field, ObservableSeries)``.  ``snapshot_strobes`` lists the
    strobe indices at which a momentum-distribution snapshot is stored.
    """
    if steps_per_period < 128:
        raise ValueError("steps_per_period must be >= 128")
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    dt = TWO_PI / steps_per_period
    snapshot_set = set(int(k) for k in snapshot_strobes)
    cur = s.copy()
    ks = np.arange(n_periods + 1)
    norm = np.empty(n_periods + 1)
    p_mean = np.empty(n_periods + 1)
    p2_mean = np.empty(n_periods + 1)
    pop_exc = np.empty(n_periods + 1)
    snapshots = {}

    half = _kinetic_half_phase(cur, dt)

    def record(idx):
        norm[idx] = cur.norm()
        p_mean[idx], p2_mean[idx] = _momentum_moments(cur)
        pop_exc[idx] = float(np.sum(np.abs(cur.psi_plus) ** 2) * cur.grid.dx)
        if idx in snapshot_set:
            snapshots[idx] = momentum_distribution(cur)

    record(0)
    scalar = isinstance(mode, ScalarVariant)
    if not scalar and not (mode is MatrixRot or isinstance(mode, MatrixRot)):
        raise ValueError(f"unknown mode {mode!r}")
    for k in range(1, n_periods + 1):
        t0 = (k - 1) * TWO_PI
        for i in range(steps_per_period):
            tk = frozen_time if frozen_time is not None else t0 + (i + 0.5) * dt
            _apply_kinetic(cur, half)
            if scalar:
                _apply_scalar_potential(cur, mode.variant, d, tk, dt,
                                        check=(k == 1 and i == 0))
            else:
                _apply_matrix_potential(cur, d, tk, dt,
                                        check=(k == 1 and i == 0))
            _apply_kinetic(cur, half)
        cur.t = k * TWO_PI
        record(k)
    series = ObservableSeries(k=ks, norm=norm, p_mean=p_mean, p2_mean=p2_mean,
                              pop_excited=pop_exc, snapshots=snapshots)
    return cur, series


# ---------------------------------------------------------------------------
# Localization length
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalizationFit:
    """Exponential-tail fit log(dist) ~ intercept - |p|/xi over a window.

    ``poor_fit`` flags R^2 < 0.8 (reported, not fatal).
    """

    xi: float
    r_squared: float
    intercept: float
    poor_fit: bool


def localization_length(dist, p, fit_window) -> LocalizationFit:
    """Least-squares localization length over the symmetric tail window.

    ``fit_window`` is (|p|_min, |p|_max); both tails enter the fit.  The
    distribution must be strictly positive on the window.
    """
    dist = np.asarray(dist, dtype=float)
    p = np.asarray(p, dtype=float)
    lo, hi = fit_window
    if not (0 <= lo < hi):
        raise ValueError("fit_window must satisfy 0 <= lo < hi")
    mask = (np.abs(p) >= lo) & (np.abs(p) <= hi)
    if np.count_nonzero(mask) < 4:
        raise ValueError("fit window selects fewer than 4 samples")
    if np.any(dist[mask] <= 0):
        raise ValueError("distribution must be positive on the fit window")
    xabs = np.abs(p[mask])
    y = np.log(dist[mask])
    slope, intercept = np.polyfit(xabs, y, 1)
    resid = y - (slope * xabs + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    xi = -1.0 / slope if slope < 0 else math.inf
    return LocalizationFit(xi=float(xi), r_squared=float(r2),
                           intercept=float(intercept),
                           poor_fit=bool(r2 < 0.8 or not math.isfinite(xi)))


# ---------------------------------------------------------------------------
# Dressed-basis helpers (for cross-frame comparisons)
# ---------------------------------------------------------------------------

def dressed_components(s: SpinorField, d: DimensionlessParams):
    """Project the bare spinor onto the orthonormal eigenvectors of the
    scaled coupling matrix at the field's own time.

    Returns (lower, upper) component arrays: lower evolves on the -sqrt
    surface, upper on the +sqrt surface.
    """
    a, b1, b2 = scaled_coupling(s.grid.x, s.t, d)
    a = np.broadcast_to(np.asarray(a, dtype=float), s.grid.x.shape)
    r = np.sqrt(a * a + b1 * b1 + b2 * b2)
    b = b1 + 1j * b2
    # lower eigenvector ~ ((a - r), conj-coupled); normalized
    denom_lo = np.sqrt((a - r) ** 2 + np.abs(b) ** 2)
    denom_hi = np.sqrt((a + r) ** 2 + np.abs(b) ** 2)
    safe_lo = np.where(denom_lo > 0, denom_lo, 1.0)
    safe_hi = np.where(denom_hi > 0, denom_hi, 1.0)
    v_lo = ((a - r) / safe_lo, np.conj(b) / safe_lo)
    v_hi = ((a + r) / safe_hi, np.conj(b) / safe_hi)
    lower = np.conj(v_lo[0]) * s.psi_plus + np.conj(v_lo[1]) * s.psi_minus
    upper = np.conj(v_hi[0]) * s.psi_plus + np.conj(v_hi[1]) * s.psi_minus
    return lower, upper


def compose_from_dressed(lower, upper, grid: SpatialGrid, t: float,
                         d: DimensionlessParams, hbar_eff: float) -> SpinorField:
    """Inverse of :func:`dressed_components` at time ``t``."""
    a, b1, b2 = scaled_coupling(grid.x, t, d)
    a = np.broadcast_to(np.asarray(a, dtype=float), grid.x.shape)
    r = np.sqrt(a * a + b1 * b1 + b2 * b2)
    b = b1 + 1j * b2
    denom_lo = np.sqrt((a - r) ** 2 + np.abs(b) ** 2)
    denom_hi = np.sqrt((a + r) ** 2 + np.abs(b) ** 2)
    safe_lo = np.where(denom_lo > 0, denom_lo, 1.0)
    safe_hi = np.where(denom_hi > 0, denom_hi, 1.0)
    psi_plus = (a - r) / safe_lo * lower + (a + r) / safe_hi * upper
    psi_minus = np.conj(b) / safe_lo * lower + np.conj(b) / safe_hi * upper
    return SpinorField(grid=grid, psi_plus=psi_plus, psi_minus=psi_minus,
                       t=t, hbar_eff=hbar_eff)
