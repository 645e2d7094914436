"""Hamiltonian variants, dressed-frame quantities and the two-level coupling matrix.

The classical Hamiltonians all have the separable form H = p^2/2 + V(x, t) in
scaled units.  The catalog covers the exact dressed surfaces, their
large-detuning Taylor forms, the RWA+adiabatic pair, the small-detuning
binomial pair, and a harmonic reference oscillator.  "Minus" always denotes
the lower (-sqrt) surface, which is the binding one for kay > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import UndefinedDressingAngle, VariantDomainError
from .params import DimensionlessParams, PhysicalParams


class HamiltonianVariant(Enum):
    """Selects which potential drives an evolution."""

    ExactMinus = "ExactMinus"
    ExactPlus = "ExactPlus"
    ExactLargeDetTaylorMinus = "ExactLargeDetTaylorMinus"
    ExactLargeDetTaylorPlus = "ExactLargeDetTaylorPlus"
    RwaAdiabaticSmallMinus = "RwaAdiabaticSmallMinus"
    RwaAdiabaticSmallPlus = "RwaAdiabaticSmallPlus"
    RwaAdiabaticSmallBinomialMinus = "RwaAdiabaticSmallBinomialMinus"
    RwaAdiabaticSmallBinomialPlus = "RwaAdiabaticSmallBinomialPlus"
    RwaAdiabaticLargeMinus = "RwaAdiabaticLargeMinus"
    RwaAdiabaticLargePlus = "RwaAdiabaticLargePlus"
    PendulumApprox = "PendulumApprox"


_MINUS_VARIANTS = {
    HamiltonianVariant.ExactMinus,
    HamiltonianVariant.ExactLargeDetTaylorMinus,
    HamiltonianVariant.RwaAdiabaticSmallMinus,
    HamiltonianVariant.RwaAdiabaticSmallBinomialMinus,
    HamiltonianVariant.RwaAdiabaticLargeMinus,
}


def _sign(variant: HamiltonianVariant) -> float:
    return -1.0 if variant in _MINUS_VARIANTS else 1.0


def _maybe_scalar(out, *inputs):
    if all(np.isscalar(v) or np.ndim(v) == 0 for v in inputs):
        return float(out)
    return out


def potential(variant: HamiltonianVariant, x, t, d: DimensionlessParams):
    """Scaled potential V(x, t) of the selected variant.

    ``x`` and ``t`` broadcast like numpy arrays.  Formulas, with
    xi = x - lam*sin(t) and K = d.kay:

    * Exact(-/+):                -/+ (4K/eta) * sqrt(1 + 2*eta*(1+cos xi)*cos^2(gamma t))
    * ExactLargeDetTaylor(-/+):  -/+ 4K * cos(xi) * cos^2(gamma t)
    * RwaAdiabaticSmall(-/+):    -/+ (4K/eta) * sqrt(1 + (eta/2)*(1+cos xi))
    * RwaAdiabaticSmallBinomial: -/+ (4K/sqrt(eta)) * (cos(xi/2) + 1/(2*eta*cos(xi/2)))
    * RwaAdiabaticLarge(-/+):    -/+ K * cos(xi)
    * PendulumApprox:            K * x^2 / 2   (harmonic reference, requires K > 0)

    x-independent offsets that carry no force are dropped from the Taylor and
    RWA-large forms.  The binomial pair diverges at cos(xi/2) = 0; the
    evaluation returns +-inf there.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    K = d.kay
    s = _sign(variant)

    if variant is HamiltonianVariant.PendulumApprox:
        if K <= 0:
            raise VariantDomainError("PendulumApprox requires kay > 0 (Omega_tilde = sqrt(kay))")
        return _maybe_scalar(0.5 * K * x * x, x, t)

    xi = x - d.lam * np.sin(t)

    if variant in (HamiltonianVariant.ExactMinus, HamiltonianVariant.ExactPlus):
        if not d.eta > 0:
            raise VariantDomainError("exact surfaces require eta > 0")
        root = np.sqrt(1.0 + 2.0 * d.eta * (1.0 + np.cos(xi)) * np.cos(d.gamma * t) ** 2)
        return _maybe_scalar(s * (4.0 * K / d.eta) * root, x, t)

    if variant in (HamiltonianVariant.ExactLargeDetTaylorMinus,
                   HamiltonianVariant.ExactLargeDetTaylorPlus):
        return _maybe_scalar(s * 4.0 * K * np.cos(xi) * np.cos(d.gamma * t) ** 2, x, t)

    if variant in (HamiltonianVariant.RwaAdiabaticSmallMinus,
                   HamiltonianVariant.RwaAdiabaticSmallPlus):
        if not d.eta > 0:
            raise VariantDomainError("RWA adiabatic surfaces require eta > 0")
        root = np.sqrt(1.0 + 0.5 * d.eta * (1.0 + np.cos(xi)))
        return _maybe_scalar(s * (4.0 * K / d.eta) * root, x, t)

    if variant in (HamiltonianVariant.RwaAdiabaticSmallBinomialMinus,
                   HamiltonianVariant.RwaAdiabaticSmallBinomialPlus):
        if not d.eta > 0:
            raise VariantDomainError("binomial surfaces require eta > 0")
        cf = np.cos(0.5 * xi)
        with np.errstate(divide="ignore"):
            val = s * (4.0 * K / np.sqrt(d.eta)) * (cf + 1.0 / (2.0 * d.eta * cf))
        return _maybe_scalar(val, x, t)

    if variant in (HamiltonianVariant.RwaAdiabaticLargeMinus,
                   HamiltonianVariant.RwaAdiabaticLargePlus):
        return _maybe_scalar(s * K * np.cos(xi), x, t)

    raise ValueError(f"unknown variant {variant!r}")


def force(variant: HamiltonianVariant, x, t, d: DimensionlessParams):
    """Analytic scaled force -dV/dx of the selected variant.

    Matches a central finite difference of :func:`potential` to relative
    1e-6 at step 1e-5 (checked by the test suite for every variant).
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    K = d.kay
    s = _sign(variant)

    if variant is HamiltonianVariant.PendulumApprox:
        if K <= 0:
            raise VariantDomainError("PendulumApprox requires kay > 0 (Omega_tilde = sqrt(kay))")
        return _maybe_scalar(-K * x, x, t)

    xi = x - d.lam * np.sin(t)

    if variant in (HamiltonianVariant.ExactMinus, HamiltonianVariant.ExactPlus):
        if not d.eta > 0:
            raise VariantDomainError("exact surfaces require eta > 0")
        ct2 = np.cos(d.gamma * t) ** 2
        root = np.sqrt(1.0 + 2.0 * d.eta * (1.0 + np.cos(xi)) * ct2)
        return _maybe_scalar(s * (-4.0 * K) * np.sin(xi) * ct2 / root, x, t)

    if variant in (HamiltonianVariant.ExactLargeDetTaylorMinus,
                   HamiltonianVariant.ExactLargeDetTaylorPlus):
        return _maybe_scalar(s * (-4.0 * K) * np.sin(xi) * np.cos(d.gamma * t) ** 2, x, t)

    if variant in (HamiltonianVariant.RwaAdiabaticSmallMinus,
                   HamiltonianVariant.RwaAdiabaticSmallPlus):
        if not d.eta > 0:
            raise VariantDomainError("RWA adiabatic surfaces require eta > 0")
        root = np.sqrt(1.0 + 0.5 * d.eta * (1.0 + np.cos(xi)))
        return _maybe_scalar(s * (-K) * np.sin(xi) / root, x, t)

    if variant in (HamiltonianVariant.RwaAdiabaticSmallBinomialMinus,
                   HamiltonianVariant.RwaAdiabaticSmallBinomialPlus):
        if not d.eta > 0:
            raise VariantDomainError("binomial surfaces require eta > 0")
        cf = np.cos(0.5 * xi)
        sf = np.sin(0.5 * xi)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = s * (-2.0 * K / np.sqrt(d.eta)) * sf * (1.0 - 1.0 / (2.0 * d.eta * cf * cf))
        return _maybe_scalar(val, x, t)

    if variant in (HamiltonianVariant.RwaAdiabaticLargeMinus,
                   HamiltonianVariant.RwaAdiabaticLargePlus):
        return _maybe_scalar(s * (-K) * np.sin(xi), x, t)

    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# Dressed frame (physical units)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DressedFrame:
    """Dressed-state quantities at one (x, t) sample, physical units.

    ``gauge_A`` is the scalar coefficient of sigma_y in the gauge vector
    potential generated by the position-dependent dressing rotation,
    A = (1/2) * dalpha/dx.
    """

    omega_eff: float   # rad/s, half dressed splitting / hbar
    alpha: float       # rad, dressing angle, tan(alpha) = Omega cos(u) / delta_L
    dalpha_dx: float   # rad/m
    dalpha_dt: float   # rad/s
    gauge_A: float     # 1/m


def dressed_frame(x, t, p: PhysicalParams) -> DressedFrame:
    """Evaluate the dressed frame at position ``x`` (m) and time ``t`` (s).

    The dressing angle is alpha = atan2(Omega*cos(u), delta_L) with
    u = k_L*(x - Delta_L*sin(omega*t)); it is undefined where both the
    detuning and the coupling cos(u) vanish (:class:`UndefinedDressingAngle`).

    The time derivative carries the full chain-rule factor
    du/dt = -k_L*Delta_L*omega*cos(omega*t); both derivatives are validated
    against finite differences of ``alpha`` in the test suite.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    delta = p.detuning
    u = p.wavenumber * (x - p.modulation_amplitude * np.sin(p.modulation_freq * t))
    cu = np.cos(u)
    su = np.sin(u)
    denom = delta**2 + p.rabi_freq**2 * cu**2
    if np.any(denom == 0.0):
        raise UndefinedDressingAngle(
            "alpha undefined: detuning and coupling both vanish at this (x, t)"
        )
    omega_eff = 0.5 * np.sqrt(denom)
    alpha = np.arctan2(p.rabi_freq * cu, delta)
    dalpha_du = -delta * p.rabi_freq * su / denom
    dalpha_dx = p.wavenumber * dalpha_du
    du_dt = -p.wavenumber * p.modulation_amplitude * p.modulation_freq \
        * np.cos(p.modulation_freq * t)
    dalpha_dt = dalpha_du * du_dt
    scalar = np.ndim(x) == 0 and np.ndim(t) == 0
    conv = float if scalar else (lambda v: v)
    return DressedFrame(
        omega_eff=conv(omega_eff),
        alpha=conv(alpha),
        dalpha_dx=conv(dalpha_dx),
        dalpha_dt=conv(dalpha_dt),
        gauge_A=conv(0.5 * dalpha_dx),
    )


# ---------------------------------------------------------------------------
# Rotating-frame coupling matrix (physical units)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CouplingMatrix:
    """Hermitian 2x2 matrix [[a, b1+i*b2], [b1-i*b2, -a]] in energy units.

    Its eigenvalues are exactly -+sqrt(a^2 + b1^2 + b2^2).
    """

    a: float
    b1: float
    b2: float

    @property
    def matrix(self) -> np.ndarray:
        b = self.b1 + 1j * self.b2
        return np.array([[self.a, b], [np.conj(b), -self.a]], dtype=complex)

    @property
    def radius(self) -> float:
        """sqrt(a^2 + b1^2 + b2^2), half the surface splitting."""
        return float(np.sqrt(self.a**2 + self.b1**2 + self.b2**2))

    @property
    def gap(self) -> float:
        """Full splitting 2*sqrt(a^2 + b1^2 + b2^2) between the surfaces."""
        return 2.0 * self.radius


def coupling_matrix(x, t, p: PhysicalParams) -> CouplingMatrix:
    """Rotating-frame coupling matrix entries at (x, t), physical units.

    a  = hbar * delta_L / 2
    b1 = (hbar*Omega/2) * cos(u) * (1 + cos(2*omega_L*t))
    b2 = (hbar*Omega/2) * cos(u) * sin(2*omega_L*t)

    with u = k_L*(x - Delta_L*sin(omega*t)).  The terms oscillating at twice
    the laser frequency are retained (no rotating-wave approximation).
    """
    u = p.wavenumber * (x - p.modulation_amplitude * np.sin(p.modulation_freq * t))
    cu = float(np.cos(u))
    half_rabi = 0.5 * p.planck * p.rabi_freq
    two_wl_t = 2.0 * p.laser_freq * t
    return CouplingMatrix(
        a=0.5 * p.planck * p.detuning,
        b1=half_rabi * cu * (1.0 + float(np.cos(two_wl_t))),
        b2=half_rabi * cu * float(np.sin(two_wl_t)),
    )


def diagonalize(m: CouplingMatrix):
    """Diagonalize the coupling matrix: returns (S, J) with S^-1 M S = J.

    The columns of S are the unnormalized eigenvectors

        [ (a -+ r)(b1 + i b2) / (b1^2 + b2^2) ]
        [               1                     ]

    with r = sqrt(a^2+b1^2+b2^2), and J = diag(-r, +r).

    Degenerate coupling (b1 = b2 = 0): the printed S is singular, so by
    convention the identity S is returned together with J = diag(-|a|, +|a|)
    (eigenvalue ordering kept as (-, +)).
    """
    bsq = m.b1**2 + m.b2**2
    r = m.radius
    if bsq == 0.0:
        return np.eye(2, dtype=complex), np.diag([-abs(m.a), abs(m.a)])
    b = m.b1 + 1j * m.b2
    S = np.array(
        [[(m.a - r) * b / bsq, (m.a + r) * b / bsq],
         [1.0, 1.0]],
        dtype=complex,
    )
    J = np.diag([-r, r])
    return S, J


# ---------------------------------------------------------------------------
# Scaled coupling matrix fields (dimensionless units, for the quantum module)
# ---------------------------------------------------------------------------

def scaled_coupling(x, t, d: DimensionlessParams):
    """Coupling-matrix entries (a, b1, b2) in scaled energy units.

    a  = 4*kay/eta                                   (constant)
    b1 = (4*kay/sqrt(eta)) * cos(xi/2) * (1 + cos(2*gamma*t))
    b2 = (4*kay/sqrt(eta)) * cos(xi/2) * sin(2*gamma*t)

    with xi = x - lam*sin(t).  Consistent with the exact surfaces:
    sqrt(a^2+b1^2+b2^2) equals |potential(ExactMinus, x, t, d)|.
    Valid for positive detuning (kay > 0 <=> delta_L > 0).
    """
    x = np.asarray(x, dtype=float)
    a = 4.0 * d.kay / d.eta
    cf = np.cos(0.5 * (x - d.lam * np.sin(t)))
    amp = 4.0 * d.kay / np.sqrt(d.eta)
    b1 = amp * cf * (1.0 + np.cos(2.0 * d.gamma * t))
    b2 = amp * cf * np.sin(2.0 * d.gamma * t)
    return a, b1, b2
