"""Natural continuation of periodic orbits in r with bifurcation detection.

The branch walks in r re-seeding Newton from the previous anchor; the
nontrivial (section-map) multipliers are monitored for real crossings of +1
and -1 and complex crossings of the unit circle, each refined by bisection in
r until the critical multiplier sits within 1e-3 of the crossing value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import LorenzParams, State, ToleranceSpec
from .errors import ConvergenceError, GeometryError
from .orbits import ORBIT_TOL, PeriodicOrbit, find_periodic_orbit

MARKER_TOL = 1e-3        # |mu -/+ 1| at a recorded crossing
MIN_STEP_DEFAULT = 1e-4  # step-halving floor before declaring branch end
_REAL_IMAG_TOL = 1e-9

EVENT_PERIOD_DOUBLING = "period-doubling"
EVENT_SYMMETRY_BREAKING = "symmetry-breaking-or-fold"
EVENT_TORUS = "torus"
EVENT_BRANCH_END = "branch-end"


@dataclass(frozen=True)
class BifurcationEvent:
    kind: str
    r: float
    bracket: tuple[float, float]
    multiplier: complex | None = None
    note: str = ""


@dataclass(frozen=True)
class Branch:
    points: tuple[PeriodicOrbit, ...]
    events: tuple[BifurcationEvent, ...]
    end_reason: str  # reached-target | step-floor | amplitude-floor | point-budget

    @property
    def rs(self) -> list[float]:
        return [o.params.r for o in self.points]


def _markers(orbit: PeriodicOrbit) -> dict[str, float]:
    """Crossing indicators from the nontrivial multipliers; nan = undefined."""
    mus = orbit.nontrivial_multipliers
    reals = [m.real for m in mus if abs(m.imag) <= _REAL_IMAG_TOL * (1 + abs(m))]
    out = {
        EVENT_SYMMETRY_BREAKING: math.nan,
        EVENT_PERIOD_DOUBLING: math.nan,
        EVENT_TORUS: math.nan,
    }
    if reals:
        out[EVENT_SYMMETRY_BREAKING] = max(reals) - 1.0
        out[EVENT_PERIOD_DOUBLING] = min(reals) + 1.0
    if len(reals) == 0 and len(mus) == 2:
        out[EVENT_TORUS] = abs(mus[0]) - 1.0
    return out


def _continue_step(p: LorenzParams, prev: PeriodicOrbit, r_next: float,
                   tol: ToleranceSpec) -> PeriodicOrbit:
    p_next = p.with_r(r_next)
    guess = State(prev.anchor.x, prev.anchor.y, p_next.r - 1.0
                  if prev.section_z == prev.params.r - 1.0 else prev.section_z)
    return find_periodic_orbit(
        p_next, guess, returns=prev.returns,
        section_z=None if prev.section_z == prev.params.r - 1.0 else prev.section_z,
        tol=tol, t_horizon=max(40.0, 8.0 * prev.period),
        _normalize=False)


def _refine_crossing(kind: str, p: LorenzParams, lo: PeriodicOrbit,
                     hi: PeriodicOrbit, tol: ToleranceSpec,
                     max_iter: int = 40) -> BifurcationEvent:
    g_lo = _markers(lo)[kind]
    g_hi = _markers(hi)[kind]
    r_lo, r_hi = lo.params.r, hi.params.r
    best = hi if abs(g_hi) < abs(g_lo) else lo
    for _ in range(max_iter):
        g_best = _markers(best)[kind]
        if abs(g_best) < MARKER_TOL or abs(r_hi - r_lo) < 1e-7:
            break
        r_mid = 0.5 * (r_lo + r_hi)
        seed = lo if abs(r_mid - r_lo) <= abs(r_mid - r_hi) else hi
        try:
            mid = _continue_step(p, seed, r_mid, tol)
        except (ConvergenceError, GeometryError):
            break
        g_mid = _markers(mid)[kind]
        if math.isnan(g_mid):
            break
        if abs(g_mid) < abs(_markers(best)[kind]):
            best = mid
        if (g_mid < 0.0) == (g_lo < 0.0):
            r_lo, lo, g_lo = r_mid, mid, g_mid
        else:
            r_hi, hi, g_hi = r_mid, mid, g_mid
    mus = best.nontrivial_multipliers
    if kind == EVENT_PERIOD_DOUBLING:
        critical = min(mus, key=lambda m: abs(m + 1.0))
    elif kind == EVENT_SYMMETRY_BREAKING:
        critical = min(mus, key=lambda m: abs(m - 1.0))
    else:
        critical = max(mus, key=abs)
    lo_r, hi_r = sorted((r_lo, r_hi))
    return BifurcationEvent(kind, best.params.r, (lo_r, hi_r), critical)


def continue_orbit(orbit: PeriodicOrbit, r_target: float, step: float, *,
                   min_step: float = MIN_STEP_DEFAULT,
                   stop_amplitude: float | None = None,
                   max_points: int = 2000,
                   refine_events: bool = True,
                   tol: ToleranceSpec = ORBIT_TOL) -> Branch:
    """Continue a converged orbit in r toward r_target.

    Newton failure halves the step down to min_step, then the branch ends.
    stop_amplitude ends the branch once the orbit has shrunk below the given
    size (used when running a subcritical branch into its Hopf point).
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if step > 0.5:
        raise ValueError("step must be <= 0.5")
    p = orbit.params
    direction = 1.0 if r_target >= p.r else -1.0
    points = [orbit]
    events: list[BifurcationEvent] = []
    h = step
    end_reason = "point-budget"

    while len(points) < max_points:
        prev = points[-1]
        r_prev = prev.params.r
        remaining = abs(r_target - r_prev)
        if remaining <= 1e-12:
            end_reason = "reached-target"
            break
        r_next = r_prev + direction * min(h, remaining)
        try:
            nxt = _continue_step(p, prev, r_next, tol)
        except (ConvergenceError, GeometryError) as err:
            if h / 2.0 < min_step:
                events.append(BifurcationEvent(
                    EVENT_BRANCH_END, r_prev, (min(r_prev, r_next), max(r_prev, r_next)),
                    None, note=f"step floor {min_step} reached: {err}"))
                end_reason = "step-floor"
                break
            h /= 2.0
            continue

        if refine_events:
            m_prev = _markers(prev)
            m_next = _markers(nxt)
            for kind in (EVENT_PERIOD_DOUBLING, EVENT_SYMMETRY_BREAKING,
                         EVENT_TORUS):
                a, b = m_prev[kind], m_next[kind]
                if math.isnan(a) or math.isnan(b):
                    continue
                if a == 0.0 or (a < 0.0) != (b < 0.0):
                    events.append(_refine_crossing(kind, p, prev, nxt, tol))
        points.append(nxt)
        h = min(step, h * 2.0)
        if stop_amplitude is not None and nxt.amplitude < stop_amplitude:
            end_reason = "amplitude-floor"
            break

    if len(points) >= max_points and end_reason == "point-budget":
        events.append(BifurcationEvent(
            EVENT_BRANCH_END, points[-1].params.r,
            (points[-1].params.r, r_target), None, note="point budget exhausted"))
    events.sort(key=lambda e: e.r)
    return Branch(tuple(points), tuple(events), end_reason)
