"""Symplectic classical dynamics in scaled units.

Time is measured in units of the inverse modulation frequency, so one
modulation period is T = 2*pi.  The integrator is an explicit position-Verlet
(drift-kick-drift) step with the force sampled at the midpoint time; it is
second order, symplectic and exactly time-reversible.  Positions are stored
unwrapped (rotation numbers need the winding); stroboscopic sections wrap
x to [-pi, pi) on output only.

All heavy loops run through a batched kernel that advances many initial
conditions simultaneously as numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousWinding, NonFiniteState
from .hamiltonians import HamiltonianVariant, potential
from .params import DimensionlessParams

TWO_PI = 2.0 * math.pi

#: Default step: 512 steps per modulation period.
DEFAULT_DT = TWO_PI / 512

#: Defaults of the island-period detector.
DEFAULT_DETECTOR_EPS = 1e-3
DEFAULT_DETECTOR_WINDOW = 32


@dataclass(frozen=True)
class PhaseState:
    """Scaled phase-space state (x unwrapped)."""

    x: float
    p: float
    t: float = 0.0


@dataclass
class Trajectory:
    """Uniformly sampled trajectory with integrator metadata."""

    x: np.ndarray
    p: np.ndarray
    t: np.ndarray
    dt: float
    variant: HamiltonianVariant


@dataclass
class SectionDataset:
    """Stroboscopic section rows sorted by (ic_id, strobe index).

    ``x`` is reduced to [-pi, pi); strobe times are t = 2*pi*k exactly (to
    integrator step alignment).  Rows of initial conditions that overflowed
    during integration carry NaN coordinates; ``finite`` flags them.
    """

    ic_id: np.ndarray
    k: np.ndarray
    x: np.ndarray
    p: np.ndarray
    params: dict = field(default_factory=dict)

    @property
    def finite(self) -> np.ndarray:
        return np.isfinite(self.x) & np.isfinite(self.p)

    def rows(self):
        for i in range(self.ic_id.size):
            yield int(self.ic_id[i]), int(self.k[i]), float(self.x[i]), float(self.p[i])


def wrap_angle(x):
    """Reduce positions to [-pi, pi)."""
    return (np.asarray(x) + math.pi) % TWO_PI - math.pi


def steps_per_period(dt: float) -> int:
    """Number of integrator steps in one modulation period; dt must divide 2*pi."""
    if not (dt > 0 and math.isfinite(dt)):
        raise ValueError("dt must be positive and finite")
    n = TWO_PI / dt
    if abs(n - round(n)) > 1e-9 * n:
        raise ValueError("dt must divide the modulation period 2*pi")
    return int(round(n))


# ---------------------------------------------------------------------------
# Force kernels
# ---------------------------------------------------------------------------

def _force_closure(variant: HamiltonianVariant, d: DimensionlessParams):
    """Resolve variant/parameter branching once; returns f(x_array, t_scalar)."""
    K = d.kay
    lam = d.lam
    gamma = d.gamma
    eta = d.eta
    V = HamiltonianVariant

    if variant is V.PendulumApprox:
        if K <= 0:
            from .errors import VariantDomainError
            raise VariantDomainError("PendulumApprox requires kay > 0")
        return lambda x, t: -K * x

    sgn = -1.0 if variant.value.endswith("Minus") else 1.0

    if variant in (V.RwaAdiabaticLargeMinus, V.RwaAdiabaticLargePlus):
        def f(x, t):
            return sgn * (-K) * np.sin(x - lam * math.sin(t))
        return f

    if variant in (V.ExactLargeDetTaylorMinus, V.ExactLargeDetTaylorPlus):
        def f(x, t):
            ct2 = math.cos(gamma * t) ** 2
            return sgn * (-4.0 * K) * ct2 * np.sin(x - lam * math.sin(t))
        return f

    if variant in (V.ExactMinus, V.ExactPlus):
        def f(x, t):
            ct2 = math.cos(gamma * t) ** 2
            xi = x - lam * math.sin(t)
            root = np.sqrt(1.0 + 2.0 * eta * (1.0 + np.cos(xi)) * ct2)
            return sgn * (-4.0 * K) * ct2 * np.sin(xi) / root
        return f

    if variant in (V.RwaAdiabaticSmallMinus, V.RwaAdiabaticSmallPlus):
        def f(x, t):
            xi = x - lam * math.sin(t)
            root = np.sqrt(1.0 + 0.5 * eta * (1.0 + np.cos(xi)))
            return sgn * (-K) * np.sin(xi) / root
        return f

    if variant in (V.RwaAdiabaticSmallBinomialMinus, V.RwaAdiabaticSmallBinomialPlus):
        def f(x, t):
            xi = x - lam * math.sin(t)
            cf = np.cos(0.5 * xi)
            with np.errstate(divide="ignore", invalid="ignore"):
                return sgn * (-2.0 * K / math.sqrt(eta)) * np.sin(0.5 * xi) \
                    * (1.0 - 1.0 / (2.0 * eta * cf * cf))
        return f

    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# Core stepping
# ---------------------------------------------------------------------------

def step(s: PhaseState, variant: HamiltonianVariant, d: DimensionlessParams,
         dt: float, frozen_time: float | None = None) -> PhaseState:
    """One position-Verlet step: drift dt/2, kick at the midpoint time, drift dt/2.

    ``dt`` may be negative (the scheme is exactly reversible).  Section
    alignment (dt dividing 2*pi) is enforced by the strobe operations, not
    here.  ``frozen_time`` evaluates the force at a fixed time, turning the
    Hamiltonian autonomous (used by conservation checks).
    """
    if dt == 0.0 or not math.isfinite(dt):
        raise ValueError("dt must be nonzero and finite")
    f = _force_closure(variant, d)
    xh = s.x + 0.5 * dt * s.p
    tk = frozen_time if frozen_time is not None else s.t + 0.5 * dt
    p1 = s.p + dt * float(f(np.asarray(xh), tk))
    x1 = xh + 0.5 * dt * p1
    if not (math.isfinite(x1) and math.isfinite(p1)):
        raise NonFiniteState(f"state overflowed at t = {s.t + dt:.6g}")
    return PhaseState(x=x1, p=p1, t=s.t + dt)


def _advance_batch(x, p, fkick, n_steps: int, dt: float, t0: float,
                   frozen_time: float | None = None):
    """Advance arrays (x, p) by n_steps; returns updated arrays in place."""
    half = 0.5 * dt
    if frozen_time is not None:
        tk = frozen_time
        for _ in range(n_steps):
            x += half * p
            p += dt * fkick(x, tk)
            x += half * p
    else:
        for i in range(n_steps):
            x += half * p
            p += dt * fkick(x, t0 + (i + 0.5) * dt)
            x += half * p
    return x, p


def _strobe_batch(x0, p0, variant, d, n_periods: int, dt: float,
                  t0: float = 0.0, frozen_time=None):
    """Strobe samples of a batch of initial conditions.

    Returns (xs, ps) with shape (n_periods+1, n_ic); sample k is the state
    at t = t0 + 2*pi*k.  Non-finite lanes propagate NaN instead of raising.
    """
    spp = steps_per_period(dt)
    f = _force_closure(variant, d)
    x = np.array(x0, dtype=float, copy=True).ravel()
    p = np.array(p0, dtype=float, copy=True).ravel()
    xs = np.empty((n_periods + 1, x.size))
    ps = np.empty((n_periods + 1, x.size))
    xs[0], ps[0] = x, p
    with np.errstate(invalid="ignore", over="ignore"):
        for k in range(1, n_periods + 1):
            _advance_batch(x, p, f, spp, dt,
                           t0 + (k - 1) * TWO_PI, frozen_time)
            bad = ~(np.isfinite(x) & np.isfinite(p))
            if bad.any():
                x[bad] = np.nan
                p[bad] = np.nan
            xs[k], ps[k] = x, p
    return xs, ps


def integrate(s0: PhaseState, variant: HamiltonianVariant, d: DimensionlessParams,
              n_steps: int, dt: float, record_every: int = 1,
              frozen_time: float | None = None) -> Trajectory:
    """Integrate a single trajectory, recording every ``record_every`` steps."""
    f = _force_closure(variant, d)
    x = np.array([s0.x])
    p = np.array([s0.p])
    n_rec = n_steps // record_every + 1
    xs = np.empty(n_rec)
    ps = np.empty(n_rec)
    ts = np.empty(n_rec)
    xs[0], ps[0], ts[0] = s0.x, s0.p, s0.t
    j = 1
    for i in range(n_steps):
        _advance_batch(x, p, f, 1, dt, s0.t + i * dt, frozen_time)
        if (i + 1) % record_every == 0:
            if not (np.isfinite(x[0]) and np.isfinite(p[0])):
                raise NonFiniteState(f"state overflowed at step {i + 1}")
            xs[j], ps[j], ts[j] = x[0], p[0], s0.t + (i + 1) * dt
            j += 1
    return Trajectory(x=xs[:j], p=ps[:j], t=ts[:j], dt=dt, variant=variant)


# ---------------------------------------------------------------------------
# Stroboscopic sections
# ---------------------------------------------------------------------------

def _params_snapshot(variant, d, dt, extra=None):
    snap = {
        "variant": variant.value,
        "lam": d.lam, "gamma": d.gamma, "eta": d.eta, "kay": d.kay,
        "hbar_eff": d.hbar_eff, "dt": dt,
    }
    if extra:
        snap.update(extra)
    return snap


def strobe_map(s0: PhaseState, variant: HamiltonianVariant, d: DimensionlessParams,
               n_periods: int, dt: float = DEFAULT_DT) -> SectionDataset:
    """Stroboscopic section of one trajectory; one row per period boundary.

    The first sample is the initial condition at t = 0.
    """
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    xs, ps = _strobe_batch([s0.x], [s0.p], variant, d, n_periods, dt)
    if not np.isfinite(xs).all():
        bad = int(np.argmax(~np.isfinite(xs[:, 0])))
        raise NonFiniteState(f"state overflowed during period {bad}")
    ks = np.arange(n_periods + 1)
    return SectionDataset(
        ic_id=np.zeros(n_periods + 1, dtype=int),
        k=ks,
        x=wrap_angle(xs[:, 0]),
        p=ps[:, 0],
        params=_params_snapshot(variant, d, dt),
    )


def disk_ensemble(center, radius: float, count: int, seed: int = 42):
    """Deterministic uniform disk of initial conditions around ``center``.

    Returns a list of :class:`PhaseState` at t = 0; the draw is reproducible
    for a given seed.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(count))
    phi = TWO_PI * rng.random(count)
    cx, cp = center
    return [PhaseState(x=float(cx + r[i] * np.cos(phi[i])),
                       p=float(cp + r[i] * np.sin(phi[i])))
            for i in range(count)]


def ensemble_sections(ics, variant: HamiltonianVariant, d: DimensionlessParams,
                      n_periods: int, dt: float = DEFAULT_DT) -> SectionDataset:
    """Union of strobe maps over an ensemble, keyed by initial-condition id.

    Per-ic integration failures do not abort the batch; the affected rows
    carry NaN and are flagged by ``SectionDataset.finite``.
    """
    if len(ics) < 1:
        raise ValueError("need at least one initial condition")
    x0 = np.array([s.x for s in ics])
    p0 = np.array([s.p for s in ics])
    xs, ps = _strobe_batch(x0, p0, variant, d, n_periods, dt)
    n_ic = x0.size
    n_k = n_periods + 1
    ic_id = np.repeat(np.arange(n_ic), n_k)
    k = np.tile(np.arange(n_k), n_ic)
    # transpose to (ic, k) so rows come out sorted by (ic_id, k)
    return SectionDataset(
        ic_id=ic_id,
        k=k,
        x=wrap_angle(xs.T.ravel()),
        p=ps.T.ravel(),
        params=_params_snapshot(variant, d, dt, {"n_ics": n_ic}),
    )


# ---------------------------------------------------------------------------
# Island-period detection and rotation numbers
# ---------------------------------------------------------------------------

def _strobe_distance(xs, ps, n):
    """Mean phase-space recurrence distance between strobes k and k+n."""
    dx = wrap_angle(xs[n:] - xs[:-n])
    dp = ps[n:] - ps[:-n]
    return float(np.mean(np.hypot(dx, dp)))


def detect_island_period(s0: PhaseState, variant: HamiltonianVariant,
                         d: DimensionlessParams, dt: float = DEFAULT_DT,
                         max_n: int = 16, eps: float = DEFAULT_DETECTOR_EPS,
                         n_strobes: int | None = None):
    """Smallest n <= max_n with mean strobe recurrence below ``eps``, else None.

    The recurrence ||strobe_{k+n} - strobe_k|| is averaged over every
    available k, so passing a larger ``n_strobes`` (default: 32 + max_n)
    demands that the orbit stay on the chain for the whole run.
    """
    if max_n < 2:
        raise ValueError("max_n must be >= 2")
    if eps <= 0:
        raise ValueError("eps must be > 0")
    if n_strobes is None:
        n_strobes = DEFAULT_DETECTOR_WINDOW + max_n
    xs, ps = _strobe_batch([s0.x], [s0.p], variant, d, n_strobes, dt)
    xs = xs[:, 0]
    ps = ps[:, 0]
    if not np.isfinite(xs).all():
        return None
    for n in range(1, max_n + 1):
        if n_strobes - n + 1 < 4:
            break
        if _strobe_distance(xs, ps, n) < eps:
            return n
    return None


def rotation_number(s0: PhaseState, variant: HamiltonianVariant,
                    d: DimensionlessParams, dt: float = DEFAULT_DT,
                    n_periods: int = 256, center=(0.0, 0.0)) -> float:
    """Average winding of the strobe sequence around ``center``, per strobe, /2*pi.

    For an (n, m) island chain this returns m/n; for a small oscillation of
    the harmonic reference it returns the scaled frequency sqrt(kay).
    Per-strobe angle jumps are reduced to (-pi, pi], so rotation numbers
    above 1/2 alias; the magnitude of the advance is returned.
    """
    xs, ps = _strobe_batch([s0.x], [s0.p], variant, d, n_periods, dt)
    dxs = xs[:, 0] - center[0]
    dps = ps[:, 0] - center[1]
    radius = np.hypot(dxs, dps)
    if np.min(radius) < 1e-9 * max(1.0, float(np.max(radius))):
        raise AmbiguousWinding("orbit passes through the winding center")
    ang = np.unwrap(np.arctan2(dps, dxs))
    return abs(ang[-1] - ang[0]) / (TWO_PI * n_periods)


# ---------------------------------------------------------------------------
# Strobe-map Jacobians and periodic points
# ---------------------------------------------------------------------------

def _strobe_n_map(points, variant, d, n: int, dt: float):
    """Apply the n-period strobe map to an array of points, shape (m, 2)."""
    x = points[:, 0].copy()
    p = points[:, 1].copy()
    spp = steps_per_period(dt)
    f = _force_closure(variant, d)
    with np.errstate(invalid="ignore", over="ignore"):
        for k in range(n):
            _advance_batch(x, p, f, spp, dt, k * TWO_PI)
    return np.column_stack([x, p])


def strobe_jacobian(x: float, p: float, variant: HamiltonianVariant,
                    d: DimensionlessParams, n: int = 1, dt: float = DEFAULT_DT,
                    h: float = 1e-6) -> np.ndarray:
    """Central finite-difference Jacobian of the n-period strobe map.

    The map is symplectic, so det = 1 up to finite-difference error.
    """
    pts = np.array([
        [x + h, p], [x - h, p], [x, p + h], [x, p - h],
    ])
    out = _strobe_n_map(pts, variant, d, n, dt)
    jac = np.empty((2, 2))
    jac[:, 0] = (out[0] - out[1]) / (2 * h)
    jac[:, 1] = (out[2] - out[3]) / (2 * h)
    return jac


def refine_periodic_points(seeds, variant: HamiltonianVariant,
                           d: DimensionlessParams, n: int,
                           dt: float = DEFAULT_DT, tol: float = 1e-11,
                           max_iter: int = 30, fd_step: float = 1e-7):
    """Newton-refine a batch of seeds toward n-periodic points of the strobe map.

    All seeds iterate together (one batched map evaluation per Newton step).
    Returns a list of dicts with keys ``x``, ``p``, ``residual``, ``trace``
    (trace of the n-period Jacobian; |trace| < 2 means elliptic) for the
    seeds that converged, deduplicated within the detector tolerance.
    """
    z = np.atleast_2d(np.asarray(seeds, dtype=float)).copy()
    m = z.shape[0]
    active = np.ones(m, dtype=bool)
    jacs = np.zeros((m, 2, 2))
    for _ in range(max_iter):
        if not active.any():
            break
        za = z[active]
        ma = za.shape[0]
        probe = np.concatenate([
            za,
            za + [fd_step, 0.0], za - [fd_step, 0.0],
            za + [0.0, fd_step], za - [0.0, fd_step],
        ])
        out = _strobe_n_map(probe, variant, d, n, dt)
        f0 = out[:ma] - za
        jac = np.empty((ma, 2, 2))
        jac[:, :, 0] = (out[ma:2 * ma] - out[2 * ma:3 * ma]) / (2 * fd_step)
        jac[:, :, 1] = (out[3 * ma:4 * ma] - out[4 * ma:5 * ma]) / (2 * fd_step)
        jacs[active] = jac
        a = jac.copy()
        a[:, 0, 0] -= 1.0
        a[:, 1, 1] -= 1.0
        det = a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]
        ok = np.abs(det) > 1e-14
        dz = np.zeros_like(za)
        dz[ok, 0] = -(a[ok, 1, 1] * f0[ok, 0] - a[ok, 0, 1] * f0[ok, 1]) / det[ok]
        dz[ok, 1] = -(-a[ok, 1, 0] * f0[ok, 0] + a[ok, 0, 0] * f0[ok, 1]) / det[ok]
        # cap the Newton step to stay inside the island's basin
        norm = np.hypot(dz[:, 0], dz[:, 1])
        big = norm > 0.5
        dz[big] *= (0.5 / norm[big])[:, None]
        z[active] = za + dz
        bad = ~np.isfinite(z).all(axis=1)
        if bad.any():
            active &= ~bad
    final = _strobe_n_map(z, variant, d, n, dt)
    res = np.hypot(wrap_angle(final[:, 0] - z[:, 0]), final[:, 1] - z[:, 1])
    results = []
    for i in range(m):
        if not np.isfinite(res[i]) or res[i] > tol:
            continue
        dup = False
        for r in results:
            if np.hypot(wrap_angle(r["x"] - z[i, 0]), r["p"] - z[i, 1]) < 1e-6:
                dup = True
                break
        if not dup:
            results.append({
                "x": float(z[i, 0]),
                "p": float(z[i, 1]),
                "residual": float(res[i]),
                "trace": float(jacs[i, 0, 0] + jacs[i, 1, 1]),
            })
    return results


def refine_periodic_point(x0: float, p0: float, variant: HamiltonianVariant,
                          d: DimensionlessParams, n: int, dt: float = DEFAULT_DT,
                          **kwargs):
    """Scalar convenience wrapper around :func:`refine_periodic_points`."""
    res = refine_periodic_points([[x0, p0]], variant, d, n, dt, **kwargs)
    return res[0] if res else None


def energy(s: PhaseState, variant: HamiltonianVariant, d: DimensionlessParams,
           at_time: float | None = None) -> float:
    """Instantaneous scaled energy p^2/2 + V(x, t)."""
    t = s.t if at_time is None else at_time
    return 0.5 * s.p**2 + float(potential(variant, s.x, t, d))
