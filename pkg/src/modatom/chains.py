"""Island-chain location: first-order resonance guesses refined on the true map.

The first-order frequency curve predicts the action J* of an (n, m)
resonance; the chain's n islands sit near the circle of that action in the
oscillator's (x, p) chart.  A fan of seeds on and around that circle is
Newton-refined toward n-periodic points of the exact strobe map, keeping the
elliptic ones (island centers).  The refined points drive the island-period
detector and the stroboscopic ensemble demos.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import classical
from .classical import DEFAULT_DT, refine_periodic_points, wrap_angle
from .hamiltonians import HamiltonianVariant
from .params import DimensionlessParams
from .perturbation import (ActionAngleState, PerturbationParams,
                           action_angle_to_xp, find_resonances)

_SEED_RADII = (0.55, 0.7, 0.85, 1.0, 1.15, 1.3, 1.5)


@dataclass(frozen=True)
class ChainPoint:
    """One refined island-chain center of an (n, m) resonance."""

    variant: HamiltonianVariant
    n: int
    m: int
    x: float
    p: float
    J_star: float        # first-order action of the resonance (seed guess)
    trace: float         # trace of the n-period strobe Jacobian (elliptic: |tr| < 2)
    residual: float      # |strobe^n(z) - z| at the refined point


def effective_omega_tilde(variant: HamiltonianVariant, d: DimensionlessParams) -> float:
    """Small-oscillation frequency of the variant's binding well, used to seed
    the first-order resonance search.

    The fast cos^2(gamma*t) factor of the exact/Taylor surfaces averages to
    one half, doubling the effective well depth relative to the plain RWA
    surface.
    """
    if d.kay <= 0:
        raise ValueError("chain search needs a binding surface (kay > 0)")
    V = HamiltonianVariant
    if variant in (V.RwaAdiabaticLargeMinus, V.PendulumApprox):
        return math.sqrt(d.kay)
    if variant in (V.ExactLargeDetTaylorMinus, V.ExactMinus):
        return math.sqrt(2.0 * d.kay)
    if variant is V.RwaAdiabaticSmallMinus:
        return math.sqrt(d.kay) / (1.0 + d.eta) ** 0.25
    raise ValueError(f"no binding-well frequency defined for {variant}")


def _divisors(n: int):
    return [d for d in range(1, n) if n % d == 0]


def strobe_fixed_point(variant: HamiltonianVariant, d: DimensionlessParams,
                       dt: float = DEFAULT_DT, n_continuation: int = 8):
    """Main elliptic fixed point of the strobe map (the driven well center).

    The drive displaces the center of the main island away from the origin,
    and at moderate modulation depth other period-1 orbits (the 1:1
    resonance pair) coexist with it.  The main center is tracked by
    continuation in the modulation depth from the undriven limit, where it
    sits exactly at the origin.  Falls back to (0, 0) if Newton fails.
    """
    z = (0.0, 0.0)
    if d.lam == 0.0:
        return z
    for lam in np.linspace(0.0, d.lam, n_continuation + 1)[1:]:
        d_step = DimensionlessParams(lam=float(lam), gamma=d.gamma, eta=d.eta,
                                     kay=d.kay, hbar_eff=d.hbar_eff)
        res = refine_periodic_points([z], variant, d_step, 1, dt, tol=1e-10)
        if not res:
            return z
        z = (res[0]["x"], res[0]["p"])
    return z


def _measured_rotation_brackets(variant, d, w_eff, target, dt, center,
                                n_radii=40, n_periods=96, u_max=2.9):
    """x-amplitudes (from ``center``) where the measured strobe rotation
    number crosses ``target``.

    Sweeps initial conditions (x_c + u, p_c) for u on a grid, measures the
    winding about the center in one batched run, and returns the bracketing
    amplitudes.  This sidesteps the first-order curve's bias at moderate
    modulation depth: the bracketing uses the true dynamics.
    """
    cx, cp = center
    us = np.linspace(0.12, u_max, n_radii)
    xs, ps = classical._strobe_batch(cx + us, np.full_like(us, cp), variant, d,
                                     n_periods, dt)
    with np.errstate(invalid="ignore"):
        ang = np.unwrap(np.arctan2(ps - cp, xs - cx), axis=0)
        nu = np.abs(ang[-1] - ang[0]) / (2.0 * math.pi * n_periods)
    nu[~np.isfinite(nu)] = -1.0
    hits = []
    f = nu - target
    for i in range(n_radii - 1):
        if f[i] == 0.0 or f[i] * f[i + 1] < 0:
            hits.append(0.5 * (us[i] + us[i + 1]))
    # frequency locking produces a plateau at the target instead of a crossing
    close = np.nonzero(np.abs(f) < 5e-3)[0]
    hits.extend(float(us[i]) for i in close)
    seen = []
    for u in hits:
        if all(abs(u - v) > 0.05 for v in seen):
            seen.append(float(u))
    return seen


def find_island_chain(variant: HamiltonianVariant, d: DimensionlessParams,
                      n: int, m: int = 1, dt: float = DEFAULT_DT,
                      newton_tol: float = 1e-10):
    """Locate an elliptic n-periodic island center of the (n, m) resonance.

    Seeds come from the first-order resonance action when the frequency
    curve has an (n, m) root, supplemented by amplitudes where the measured
    rotation number crosses m/n.  Every seed fan is Newton-refined on the
    exact strobe map; the first elliptic genuine-period-n point wins.
    Returns a :class:`ChainPoint` or None.
    """
    w_eff = effective_omega_tilde(variant, d)
    pp = PerturbationParams(omega_tilde=w_eff, lam=d.lam)
    center = strobe_fixed_point(variant, d, dt)
    J_cap = math.pi * w_eff * (1.2 * math.pi) ** 2
    records = [r for r in find_resonances(pp, n_max=n, m_max=abs(m), J_range=(1e-6, J_cap))
               if r.n == n and r.m == m]
    amplitude_guesses = [math.sqrt(r.J_star / (math.pi * w_eff)) for r in records]
    J_from_first_order = {round(a, 6): r.J_star for a, r in zip(amplitude_guesses, records)}
    amplitude_guesses += _measured_rotation_brackets(variant, d, w_eff, m / n, dt,
                                                     center)

    tried = []
    for u_star in amplitude_guesses:
        if any(abs(u_star - v) < 0.04 for v in tried):
            continue
        tried.append(u_star)
        seeds = []
        for f in _SEED_RADII:
            u = u_star * f
            for j in range(2 * n):
                theta = j * math.pi / n
                st = ActionAngleState(J=math.pi * w_eff * u * u, theta=theta)
                x_rel, p_rel = action_angle_to_xp(st, pp)
                seeds.append((center[0] + x_rel, center[1] + p_rel))
        found = refine_periodic_points(seeds, variant, d, n, dt, tol=newton_tol)
        for cand in found:
            if abs(cand["trace"]) >= 2.0:
                continue
            if _has_lower_period(cand, variant, d, n, dt):
                continue
            J_star = J_from_first_order.get(round(u_star, 6),
                                            math.pi * w_eff * u_star * u_star)
            return ChainPoint(variant=variant, n=n, m=m,
                              x=cand["x"], p=cand["p"], J_star=J_star,
                              trace=cand["trace"], residual=cand["residual"])
    return None


def _has_lower_period(cand, variant, d, n, dt, tol=1e-5):
    z = np.array([[cand["x"], cand["p"]]])
    for div in _divisors(n):
        out = classical._strobe_n_map(z, variant, d, div, dt)
        dist = math.hypot(float(wrap_angle(out[0, 0] - z[0, 0])), float(out[0, 1] - z[0, 1]))
        if dist < tol:
            return True
    return False


@dataclass
class ScanResult:
    """Outcome of a (kay, lam) grid scan for island chains."""

    found: dict            # period -> list of (kay, lam, ChainPoint)
    scanned: list          # all (kay, lam) pairs visited


def scan_island_chains(variant: HamiltonianVariant, kay_values, lam_values,
                       periods=(3, 4, 5), gamma: float = 10.0, eta: float = 0.01,
                       hbar_eff: float = 0.5, dt: float = DEFAULT_DT,
                       detector_eps: float = 1e-3, detector_max_n: int = 16,
                       detector_strobes: int = 512,
                       stop_when_complete: bool = True) -> ScanResult:
    """Scan a parameter grid for island chains of the requested periods.

    Every candidate is confirmed with the island-period detector (running
    ``detector_strobes`` periods).  With ``stop_when_complete`` the scan
    short-circuits once every requested period has been seen somewhere.
    """
    found = {n: [] for n in periods}
    scanned = []
    for lam in lam_values:
        for kay in kay_values:
            scanned.append((float(kay), float(lam)))
            d = DimensionlessParams(lam=float(lam), gamma=gamma, eta=eta,
                                    kay=float(kay), hbar_eff=hbar_eff)
            for n in periods:
                if stop_when_complete and found[n]:
                    continue
                chain = find_island_chain(variant, d, n, dt=dt)
                if chain is None:
                    continue
                detected = classical.detect_island_period(
                    classical.PhaseState(x=chain.x, p=chain.p), variant, d,
                    dt=dt, max_n=detector_max_n, eps=detector_eps,
                    n_strobes=detector_strobes)
                if detected == n:
                    found[n].append((float(kay), float(lam), chain))
            if stop_when_complete and all(found[n] for n in periods):
                return ScanResult(found=found, scanned=scanned)
    return ScanResult(found=found, scanned=scanned)
