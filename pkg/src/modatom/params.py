"""Laboratory parameters and their dimensionless reduction.

Two unit systems are used throughout the package:

* the *physical* layer (``PhysicalParams``) works in SI units and feeds the
  dressed-frame / coupling-matrix / surface-crossing operations;
* the *scaled* layer (``DimensionlessParams``) drives all classical,
  perturbative and quantum dynamics.  Position is measured in units of
  1/(2 k_L), time in units of 1/omega, so one modulation period is 2*pi of
  scaled time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ZeroDetuning, ZeroModulationFreq

HBAR_SI = 1.054571817e-34  # J*s

#: Default dimensionless Planck constant for the scaled Schroedinger equation.
#: The scaling of the classical Hamiltonian does not pin this value; it is an
#: independent knob controlling quantum coarseness in localization runs.
DEFAULT_HBAR_EFF = 0.5


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory constants of a two-level atom in a phase-modulated standing wave.

    All frequencies are angular (rad/s).  ``modulation_amplitude`` is the
    mirror displacement Delta_L (m); the standing-wave phase seen by the atom
    is k_L*(x - Delta_L*sin(omega*t)).

    ``modulation_freq`` may be zero at construction; operations that divide
    by it raise :class:`ZeroModulationFreq`.  Likewise the detuning
    ``transition_freq - laser_freq`` may vanish except in operations that
    divide by it.
    """

    mass: float                    # M, kg
    transition_freq: float         # omega_0, rad/s
    laser_freq: float              # omega_L, rad/s
    rabi_freq: float               # Omega, rad/s
    wavenumber: float              # k_L, 1/m
    modulation_amplitude: float    # Delta_L, m
    modulation_freq: float         # omega, rad/s
    planck: float = HBAR_SI        # hbar, J*s

    def __post_init__(self):
        strictly_positive = {
            "mass": self.mass,
            "transition_freq": self.transition_freq,
            "laser_freq": self.laser_freq,
            "rabi_freq": self.rabi_freq,
            "wavenumber": self.wavenumber,
            "planck": self.planck,
        }
        for name, value in strictly_positive.items():
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if not (math.isfinite(self.modulation_amplitude) and self.modulation_amplitude >= 0):
            raise ValueError("modulation_amplitude must be >= 0")
        if not (math.isfinite(self.modulation_freq) and self.modulation_freq >= 0):
            raise ValueError("modulation_freq must be >= 0")

    @property
    def detuning(self) -> float:
        """delta_L = omega_0 - omega_L; either sign is allowed."""
        return self.transition_freq - self.laser_freq


@dataclass(frozen=True)
class DimensionlessParams:
    """Scaled constants of the dimensionless system.

    lam    = 2 * k_L * Delta_L          (modulation depth)
    gamma  = omega_L / omega            (optical vs modulation frequency)
    eta    = (Omega / delta_L) ** 2     (Rabi resonance strength)
    kay    = hbar k_L^2 Omega^2 / (2 M omega^2 delta_L)   (well depth)

    ``kay`` carries the sign of the detuning; binding-surface runs require
    kay > 0.  ``hbar_eff`` is the dimensionless Planck constant of the scaled
    Schroedinger equation (configuration value, not fixed by the scaling).
    """

    lam: float
    gamma: float
    eta: float
    kay: float
    hbar_eff: float = DEFAULT_HBAR_EFF

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise ValueError("lam must be >= 0")
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError("gamma must be > 0")
        if not (math.isfinite(self.eta) and self.eta > 0):
            raise ValueError("eta must be > 0")
        if not math.isfinite(self.kay):
            raise ValueError("kay must be finite")
        if not (math.isfinite(self.hbar_eff) and self.hbar_eff > 0):
            raise ValueError("hbar_eff must be > 0")


def to_dimensionless(p: PhysicalParams, hbar_eff: float = DEFAULT_HBAR_EFF) -> DimensionlessParams:
    """Reduce laboratory constants to the scaled parameter set.

    Raises :class:`ZeroDetuning` or :class:`ZeroModulationFreq` when the
    reduction divides by a vanishing detuning or modulation frequency.
    """
    delta = p.detuning
    if delta == 0.0:
        raise ZeroDetuning("eta and kay are undefined at zero detuning")
    if p.modulation_freq == 0.0:
        raise ZeroModulationFreq("gamma and kay are undefined at zero modulation frequency")
    return DimensionlessParams(
        lam=2.0 * p.wavenumber * p.modulation_amplitude,
        gamma=p.laser_freq / p.modulation_freq,
        eta=(p.rabi_freq / delta) ** 2,
        kay=p.planck * p.wavenumber**2 * p.rabi_freq**2
        / (2.0 * p.mass * p.modulation_freq**2 * delta),
        hbar_eff=hbar_eff,
    )
