"""First-order classical perturbation theory of the modulated pendulum.

The binding RWA surface H = p^2/2 - K cos(x - lam sin t) is written as a
harmonic oscillator plus perturbation, H = H_osc + eps*DH, with
Omega_tilde = sqrt(K) and the oscillator action-angle convention

    x = sqrt(J / (pi*Omega_tilde)) * sin(theta),
    p = sqrt(J * Omega_tilde / pi) * cos(theta),
    H_osc = Omega_tilde * J / (2*pi).

The pi factors inside the square roots are kept verbatim; with this
normalization the orbital angular frequency is Omega(J) = 2*pi dH/dJ.
The modulation frequency is 1 in scaled time, so the (n, m) resonance
condition reads n*Omega(J) = m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_jn, bessel_jn_prime
from .errors import SmallDenominator

TWO_PI = 2.0 * math.pi

#: Default small-denominator guard on |n*Omega - m|.
DEFAULT_DENOM_GUARD = 1e-3


@dataclass(frozen=True)
class PerturbationParams:
    """Oscillator frequency Omega_tilde = sqrt(K), modulation depth lam,
    and the book-keeping parameter eps (1.0 recovers the physical system)."""

    omega_tilde: float
    lam: float
    epsilon: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.omega_tilde) and self.omega_tilde > 0):
            raise ValueError("omega_tilde must be > 0")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise ValueError("lam must be >= 0")


@dataclass(frozen=True)
class ActionAngleState:
    """Oscillator action-angle pair; theta is reduced to [0, 2*pi)."""

    J: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.J) and self.J >= 0):
            raise ValueError("J must be >= 0")
        object.__setattr__(self, "theta", self.theta % TWO_PI)


@dataclass(frozen=True)
class ResonanceRecord:
    """Location and strength of an (n, m) nonlinear resonance.

    ``denominator_at`` is the residual n*Omega(J_star) - m left by the root
    finder; ``strength`` = |J_n(sqrt(J*/(Omega_tilde*pi))) * J_m(lam)|.
    """

    n: int
    m: int
    J_star: float
    strength: float
    denominator_at: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.m == 0:
            raise ValueError("m must be nonzero")
        if self.strength < 0:
            raise ValueError("strength must be >= 0")


def action_angle_to_xp(s: ActionAngleState, pp: PerturbationParams):
    """Map (J, theta) to phase-space coordinates (x, p)."""
    amp = math.sqrt(s.J / (math.pi * pp.omega_tilde))
    return amp * math.sin(s.theta), amp * pp.omega_tilde * math.cos(s.theta)


def xp_to_action_angle(x: float, p: float, pp: PerturbationParams) -> ActionAngleState:
    """Inverse of :func:`action_angle_to_xp`."""
    w = pp.omega_tilde
    J = math.pi * (w * x * x + p * p / w)
    theta = math.atan2(x * math.sqrt(w), p / math.sqrt(w)) if J > 0 else 0.0
    return ActionAngleState(J=J, theta=theta)


def _action_argument(J, pp):
    # u = sqrt(J / (Omega_tilde * pi)); also the x-amplitude of the orbit.
    return np.sqrt(np.asarray(J, dtype=float) / (pp.omega_tilde * math.pi))


def _jn_vec(n, z):
    z = np.asarray(z, dtype=float)
    if z.ndim == 0:
        return bessel_jn(n, float(z))
    return np.array([bessel_jn(n, float(v)) for v in z.ravel()]).reshape(z.shape)


def perturbing_hamiltonian(J, theta, t, pp: PerturbationParams):
    """The perturbation DH(J, theta, t) before averaging:

    DH = -Omega_tilde^2 * cos(u*sin(theta) - lam*sin(t)) - (J*Omega_tilde/(2*pi)) * sin^2(theta)

    with u = sqrt(J/(Omega_tilde*pi)).  (H_osc + eps*DH at eps = 1 is the
    binding RWA surface.)
    """
    J = np.asarray(J, dtype=float)
    u = _action_argument(J, pp)
    w = pp.omega_tilde
    return -w**2 * np.cos(u * np.sin(theta) - pp.lam * np.sin(t)) \
        - J * w / TWO_PI * np.sin(theta) ** 2


def averaged_hamiltonian(J_bar, pp: PerturbationParams):
    """Double-averaged Hamiltonian H_bar(J_bar), a function of the action alone:

    H_bar = w*J/(2*pi) - eps*w^2*J_0(u)*J_0(lam) - eps*J*w/(4*pi),
    u = sqrt(J/(w*pi)), w = Omega_tilde.
    """
    J_bar = np.asarray(J_bar, dtype=float)
    if np.any(J_bar < 0):
        raise ValueError("J_bar must be >= 0")
    w = pp.omega_tilde
    u = _action_argument(J_bar, pp)
    val = w * J_bar / TWO_PI \
        - pp.epsilon * w**2 * _jn_vec(0, u) * bessel_jn(0, pp.lam) \
        - pp.epsilon * J_bar * w / (4.0 * math.pi)
    return float(val) if val.ndim == 0 else val


def _j1_over_u(u):
    """J_1(u)/u, continuous through u = 0 (limit 1/2)."""
    u = np.asarray(u, dtype=float)
    small = u < 1e-6
    out = np.empty_like(u)
    if small.any():
        us = u[small]
        out[small] = 0.5 - us * us / 16.0
    if (~small).any():
        ub = u[~small]
        out[~small] = _jn_vec(1, ub) / ub
    return out


def first_order_frequency(J_bar, pp: PerturbationParams):
    """First-order orbital frequency Omega'(J_bar) = 2*pi dH_bar/dJ_bar.

    Differentiating the averaged Hamiltonian analytically (J_0' = -J_1 plus
    the chain factor du/dJ = 1/(2*u*w*pi)) gives

        Omega' = w*(1 - eps/2) + eps*w*J_0(lam) * J_1(u)/u,

    which is finite and continuous at J_bar = 0 where J_1(u)/u -> 1/2.
    """
    J_bar = np.asarray(J_bar, dtype=float)
    if np.any(J_bar < 0):
        raise ValueError("J_bar must be >= 0")
    w = pp.omega_tilde
    u = _action_argument(J_bar, pp)
    val = w * (1.0 - 0.5 * pp.epsilon) \
        + pp.epsilon * w * bessel_jn(0, pp.lam) * _j1_over_u(u)
    return float(val) if val.ndim == 0 else val


def delta_S_nm(J_bar: float, theta_bar: float, t: float, n: int, m: int,
               pp: PerturbationParams, guard: float = DEFAULT_DENOM_GUARD) -> float:
    """Oscillating action correction of the (n, m) Fourier mode:

    DS_nm = -eps*w^2 / (n*Omega(J) - m) * J_n(u) * J_m(lam) * sin(n*theta - m*t).

    Raises :class:`SmallDenominator` within ``guard`` of the (n, m) resonance.
    """
    if n == 0 or m == 0:
        raise ValueError("n and m must be nonzero")
    w = pp.omega_tilde
    omega_bar = first_order_frequency(J_bar, pp)
    denom = n * omega_bar - m
    if abs(denom) <= guard:
        raise SmallDenominator(n, m, denom)
    u = float(_action_argument(J_bar, pp))
    return -pp.epsilon * w**2 / denom * bessel_jn(n, u) * bessel_jn(m, pp.lam) \
        * math.sin(n * theta_bar - m * t)


@dataclass
class TransformResult:
    """First-order action-angle transform output with the per-mode exclusions."""

    J_bar: float
    theta_bar: float
    excluded: list


def first_order_transform(J: float, theta: float, t: float,
                          pp: PerturbationParams, n_max: int, m_max: int,
                          guard: float = DEFAULT_DENOM_GUARD) -> TransformResult:
    """First-order map (J, theta) -> (J_bar, theta_bar).

    Sums the resonant-mode corrections over 1 <= |n| <= n_max,
    1 <= |m| <= m_max plus the cos(2*theta)/sin(2*theta) terms coming from
    the oscillator part of the perturbation:

        J_bar     = J + eps * sum n*w^2/(n*Omega(J)-m) J_n(u) J_m(lam) cos(n*theta - m*t)
                      - eps * J*w/(4*pi) * cos(2*theta)
        theta_bar = theta - eps * sum w^2/(n*Omega(J)-m) J_n'(u) J_m(lam) sin(n*theta - m*t)
                      + eps * w/(8*pi*Omega(J_bar)) * sin(2*theta)

    Modes whose denominator falls below ``guard`` are skipped and reported in
    ``excluded``.  At eps = 0 the transform is the identity.
    """
    if n_max < 1 or m_max < 1:
        raise ValueError("truncation orders must be >= 1")
    w = pp.omega_tilde
    eps = pp.epsilon
    u = float(_action_argument(J, pp))
    omega_bar = first_order_frequency(J, pp)
    dJ = 0.0
    dtheta = 0.0
    excluded = []
    jm_cache = {m: bessel_jn(m, pp.lam) for m in range(-m_max, m_max + 1) if m != 0}
    for n in range(-n_max, n_max + 1):
        if n == 0:
            continue
        jn_u = bessel_jn(n, u)
        jnp_u = bessel_jn_prime(n, u)
        for m in range(-m_max, m_max + 1):
            if m == 0:
                continue
            denom = n * omega_bar - m
            if abs(denom) <= guard:
                excluded.append((n, m))
                continue
            phase = n * theta - m * t
            jm = jm_cache[m]
            dJ += n * w**2 / denom * jn_u * jm * math.cos(phase)
            dtheta += -(w**2) / denom * jnp_u * jm * math.sin(phase)
    J_bar = J + eps * dJ - eps * J * w / (4.0 * math.pi) * math.cos(2.0 * theta)
    omega_at_bar = first_order_frequency(max(J_bar, 0.0), pp)
    theta_bar = theta + eps * dtheta \
        + eps * w / (8.0 * math.pi * omega_at_bar) * math.sin(2.0 * theta)
    return TransformResult(J_bar=float(J_bar), theta_bar=float(theta_bar),
                           excluded=excluded)


def resonance_strength(n: int, m: int, J: float, pp: PerturbationParams) -> float:
    """|J_n(sqrt(J/(w*pi))) * J_m(lam)| — the product controlling the (n, m)
    resonance width."""
    u = float(_action_argument(J, pp))
    return abs(bessel_jn(n, u) * bessel_jn(m, pp.lam))


def find_resonances(pp: PerturbationParams, n_max: int, m_max: int,
                    J_range, tol: float = 1e-9, grid: int = 2048):
    """All roots of n*Omega'(J) = m on ``J_range`` (modulation frequency = 1).

    Scans a ``grid``-point mesh for sign changes of n*Omega'(J) - m for
    1 <= n <= n_max, 1 <= m <= m_max, then bisects each bracket until the
    residual is below ``tol``.  Returns :class:`ResonanceRecord` entries
    sorted by (n, m, J_star); an empty list when the curve crosses nothing.
    """
    J_lo, J_hi = float(J_range[0]), float(J_range[1])
    if not (math.isfinite(J_lo) and math.isfinite(J_hi) and 0 <= J_lo < J_hi):
        raise ValueError("J_range must be finite with 0 <= J_lo < J_hi")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    Js = np.linspace(J_lo, J_hi, grid)
    omega = first_order_frequency(Js, pp)
    records = []
    for n in range(1, n_max + 1):
        for m in range(1, m_max + 1):
            f = n * omega - m
            sign_change = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
            roots = [float(Js[i]) for i in np.nonzero(f == 0.0)[0]]
            for i in sign_change:
                lo, hi = float(Js[i]), float(Js[i + 1])
                flo = n * first_order_frequency(lo, pp) - m
                root = 0.5 * (lo + hi)
                for _ in range(200):
                    root = 0.5 * (lo + hi)
                    fmid = n * first_order_frequency(root, pp) - m
                    if abs(fmid) <= tol or hi - lo < 1e-15 * max(1.0, hi):
                        break
                    if (fmid < 0) == (flo < 0):
                        lo, flo = root, fmid
                    else:
                        hi = root
                roots.append(root)
            for J_star in roots:
                resid = n * first_order_frequency(J_star, pp) - m
                records.append(ResonanceRecord(
                    n=n, m=m, J_star=J_star,
                    strength=resonance_strength(n, m, J_star, pp),
                    denominator_at=float(resid),
                ))
    records.sort(key=lambda r: (r.n, r.m, r.J_star))
    return records
