"""Potential-energy-surface crossings and gap landscapes.

The two dressed surfaces -+sqrt(a^2 + b1^2 + b2^2) meet where
a^2 + b1^2 + b2^2 = 0, which for nonzero detuning happens only at complex
positions.  This module locates those crossings in three regimes (small
detuning, large detuning, exact) and scans the analytically continued gap
over a complex-plane window.  All quantities are in physical units.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import RegimeViolation, SecantSingularity
from .params import PhysicalParams

#: Half-width (rad) of the excluded neighborhoods of the sec(omega_L t)
#: divergences in the exact crossing formula.
DEFAULT_EPS_SEC = 1e-3

#: Relative tolerance on |a^2+b1^2+b2^2| / (hbar*Omega)^2 at a returned crossing.
DEFAULT_RESIDUAL_TOL = 1e-10

#: Validity guard |delta_L|/Omega for the small-detuning crossing formula.
DEFAULT_SMALL_DETUNING_GUARD = 0.3


class CrossingRegime(Enum):
    SmallDetuning = "SmallDetuning"
    LargeDetuning = "LargeDetuning"
    Exact = "Exact"


@dataclass(frozen=True)
class CrossingPoint:
    """One surface-crossing locus at fixed time.

    ``branch`` is +1 or -1 for the two complex-conjugate crossings (sign of
    the imaginary unit inside the exact arccos argument); it is 0 for the
    real large-detuning crossings.
    """

    t: float
    x_re: float
    x_im: float
    branch: int
    regime: CrossingRegime


def crossing_residual(x_complex: complex, t: float, p: PhysicalParams) -> complex:
    """Analytic continuation of a^2 + b1^2 + b2^2 at complex position.

    Using b1^2 + b2^2 = (hbar*Omega)^2 cos^2(u) cos^2(omega_L t) with
    u = k_L*(x - Delta_L*sin(omega*t));  zero exactly at a crossing.
    """
    u = p.wavenumber * (x_complex - p.modulation_amplitude * math.sin(p.modulation_freq * t))
    a = 0.5 * p.planck * p.detuning
    return a**2 + (p.planck * p.rabi_freq * cmath.cos(u) * math.cos(p.laser_freq * t)) ** 2


def crossing_small_detuning(t: float, p: PhysicalParams,
                            guard: float = DEFAULT_SMALL_DETUNING_GUARD) -> CrossingPoint:
    """Leading-order crossing for |delta_L| << Omega.

    x = Delta_L sin(omega t) + pi/(2 k_L) - i*sqrt(2)*delta_L/(2 Omega k_L).

    Raises :class:`RegimeViolation` when |delta_L|/Omega >= ``guard``.
    """
    ratio = abs(p.detuning) / p.rabi_freq
    if ratio >= guard:
        raise RegimeViolation(
            f"|delta_L|/Omega = {ratio:.3g} outside small-detuning regime (< {guard})"
        )
    x_re = p.modulation_amplitude * math.sin(p.modulation_freq * t) \
        + 0.5 * math.pi / p.wavenumber
    x_im = -math.sqrt(2.0) * p.detuning / (2.0 * p.rabi_freq * p.wavenumber)
    return CrossingPoint(t=t, x_re=x_re, x_im=x_im, branch=-1,
                         regime=CrossingRegime.SmallDetuning)


def crossing_large_detuning(t: float, n: int, p: PhysicalParams) -> CrossingPoint:
    """Real crossing of the large-detuning surfaces: x = (n+1/2)*pi/k_L + Delta_L sin(omega t)."""
    x_re = (n + 0.5) * math.pi / p.wavenumber \
        + p.modulation_amplitude * math.sin(p.modulation_freq * t)
    return CrossingPoint(t=t, x_re=x_re, x_im=0.0, branch=0,
                         regime=CrossingRegime.LargeDetuning)


def crossing_exact(t: float, branch: int, p: PhysicalParams,
                   eps_sec: float = DEFAULT_EPS_SEC,
                   residual_tol: float = DEFAULT_RESIDUAL_TOL) -> CrossingPoint:
    """Exact complex crossing of the unapproximated surfaces.

    x = Delta_L sin(omega t)
        + (1/k_L) * arccos(branch * i * (delta_L / 2 Omega) * sec(omega_L t))

    with the principal arccos branch; ``branch`` (+1/-1) selects the sign of
    the imaginary unit inside the argument, giving the two conjugate loci.
    Times with omega_L*t within ``eps_sec`` of an odd multiple of pi/2 raise
    :class:`SecantSingularity`.  The returned point is verified to satisfy
    |a^2+b1^2+b2^2| <= residual_tol * (hbar*Omega)^2.
    """
    if branch not in (-1, 1):
        raise ValueError("branch must be +1 or -1")
    phase = math.fmod(p.laser_freq * t, math.pi)
    if phase < 0:
        phase += math.pi
    if abs(phase - 0.5 * math.pi) < eps_sec:
        raise SecantSingularity(
            f"omega_L*t within {eps_sec} rad of an odd multiple of pi/2"
        )
    sec = 1.0 / math.cos(p.laser_freq * t)
    arg = branch * 1j * (p.detuning / (2.0 * p.rabi_freq)) * sec
    x = p.modulation_amplitude * math.sin(p.modulation_freq * t) \
        + cmath.acos(arg) / p.wavenumber
    res = abs(crossing_residual(x, t, p))
    scale = (p.planck * p.rabi_freq) ** 2
    if res > residual_tol * scale:
        raise ArithmeticError(
            f"crossing residual {res:.3e} exceeds {residual_tol:.1e}*(hbar*Omega)^2"
        )
    return CrossingPoint(t=t, x_re=x.real, x_im=x.imag, branch=branch,
                         regime=CrossingRegime.Exact)


# ---------------------------------------------------------------------------
# Gap landscape over a complex-plane window
# ---------------------------------------------------------------------------

@dataclass
class GapField:
    """Dense evaluation of the analytically continued gap 2*|sqrt(a^2+b1^2+b2^2)|.

    ``gap[i, j]`` corresponds to (x_re[i], x_im[j]).  On the real axis the
    gap is the actual splitting between the two surfaces and is >= hbar*|delta_L|.
    """

    x_re: np.ndarray
    x_im: np.ndarray
    gap: np.ndarray
    t: float
    params: dict = field(default_factory=dict)

    def argmin_point(self):
        """(x_re, x_im) of the global gap minimum."""
        i, j = np.unravel_index(int(np.argmin(self.gap)), self.gap.shape)
        return float(self.x_re[i]), float(self.x_im[j])

    def cell_size(self):
        dre = self.x_re[1] - self.x_re[0] if self.x_re.size > 1 else 0.0
        dim = self.x_im[1] - self.x_im[0] if self.x_im.size > 1 else 0.0
        return float(dre), float(dim)

    def rows(self):
        """Yield (x_re, x_im, gap) rows in row-major order for CSV export."""
        for i, xr in enumerate(self.x_re):
            for j, xi in enumerate(self.x_im):
                yield float(xr), float(xi), float(self.gap[i, j])


def gap_scan(p: PhysicalParams, t: float, window, resolution: int) -> GapField:
    """Scan the complex-position gap over ``window`` at fixed time.

    ``window`` is ((re_min, re_max), (im_min, im_max)); ``resolution`` is the
    number of samples per axis (>= 16).  Gap minima coincide with the exact
    crossing loci within one grid cell.
    """
    if resolution < 16:
        raise ValueError("resolution must be >= 16 per axis")
    (re_min, re_max), (im_min, im_max) = window
    x_re = np.linspace(re_min, re_max, resolution)
    x_im = np.linspace(im_min, im_max, resolution)
    xc = x_re[:, None] + 1j * x_im[None, :]
    u = p.wavenumber * (xc - p.modulation_amplitude * math.sin(p.modulation_freq * t))
    a = 0.5 * p.planck * p.detuning
    val = a**2 + (p.planck * p.rabi_freq * math.cos(p.laser_freq * t)) ** 2 * np.cos(u) ** 2
    gap = 2.0 * np.sqrt(np.abs(val))
    return GapField(
        x_re=x_re, x_im=x_im, gap=gap, t=t,
        params={
            "mass": p.mass,
            "transition_freq": p.transition_freq,
            "laser_freq": p.laser_freq,
            "rabi_freq": p.rabi_freq,
            "wavenumber": p.wavenumber,
            "modulation_amplitude": p.modulation_amplitude,
            "modulation_freq": p.modulation_freq,
            "planck": p.planck,
        },
    )
