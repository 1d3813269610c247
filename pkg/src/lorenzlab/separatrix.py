"""Unstable separatrices of the origin: launch, fate, and bisection searches.

The two orbits leaving the origin along its one-dimensional unstable manifold
are realized by a small offset along the unstable eigenvector.  Long-time
fates are classified operationally at a fixed time horizon because transient
lengths diverge near the fate-transition parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import rk
from .dynamics import (
    LorenzParams,
    State,
    ToleranceSpec,
    Trajectory,
    make_field,
    plane_event,
    zmax_event,
)
from .equilibria import jacobian_eigenvalues, nontrivial_points
from .errors import BracketError, DomainError, GeometryError, IntegrationError

# Distance to O1/O2 that must be sustained for convergence.
CONVERGENCE_DIST = 1e-5
CONVERGENCE_HOLD = 5.0
# A return to within this distance of the origin counts as near-homoclinic.
HOMOCLINIC_DIST = 1e-3
# The orbit has "departed" once it leaves this ball around the origin.
DEPARTURE_RADIUS = 1.0

_OFFSET_RANGE = (1e-8, 1e-4)
DEFAULT_OFFSET = 1e-6


@dataclass(frozen=True)
class SeparatrixFate:
    """Classified long-time behaviour of one separatrix."""

    verdict: str  # converges-to-O1 | converges-to-O2 | near-homoclinic | undecided-wandering
    min_dist_origin: float  # after departure from the origin ball
    decision_time: float  # nan when no convergence was confirmed
    r: float
    side: int
    t_max: float
    final_state: State


@dataclass(frozen=True)
class BisectionResult:
    estimate: float
    bracket_history: tuple[tuple[float, float], ...]
    probes: tuple[tuple[float, str], ...]  # (r, observable) in evaluation order


@dataclass(frozen=True)
class FateProfileRow:
    r: float
    verdict: str
    decision_time: float
    min_dist_origin: float


def unstable_directions(p: LorenzParams) -> tuple[State, State]:
    """Unit eigenvector pair of the positive eigenvalue of the origin.

    The two directions are exchanged by the symmetry S; the '+' member has
    positive x.  Requires r > 1.
    """
    if p.r <= 1.0:
        raise DomainError(f"origin has no unstable direction at r={p.r} <= 1")
    lam = max(ev.real for ev in jacobian_eigenvalues(p, State(0.0, 0.0, 0.0)))
    # Eigenvector of the z-decoupled 2x2 block: (1, (lam+sigma)/sigma, 0).
    vx = 1.0
    vy = (lam + p.sigma) / p.sigma
    norm = math.hypot(vx, vy)
    plus = State(vx / norm, vy / norm, 0.0)
    return plus, plus.mirror()


def _launch_point(p: LorenzParams, side: int, offset: float) -> State:
    if side not in (1, -1):
        raise DomainError(f"side must be +1 or -1, got {side}")
    if not (_OFFSET_RANGE[0] <= offset <= _OFFSET_RANGE[1]):
        raise DomainError(
            f"offset {offset} outside [{_OFFSET_RANGE[0]}, {_OFFSET_RANGE[1]}]")
    plus, minus = unstable_directions(p)
    v = plus if side == 1 else minus
    return State(offset * v.x, offset * v.y, offset * v.z)


def launch_separatrix(p: LorenzParams, side: int, offset: float = DEFAULT_OFFSET,
                      tol: ToleranceSpec = ToleranceSpec(), *,
                      t_max: float | None = None) -> Trajectory:
    """Integrate the side-+ or side-- separatrix from the origin."""
    from .dynamics import integrate

    s0 = _launch_point(p, side, offset)
    label = "separatrix+" if side == 1 else "separatrix-"
    return integrate(p, s0, tol, t_max=t_max, dense=False, label=label)


def classify_separatrix_fate(p: LorenzParams, side: int = 1,
                             tol: ToleranceSpec = ToleranceSpec(),
                             t_max: float = 1000.0,
                             offset: float = DEFAULT_OFFSET) -> SeparatrixFate:
    """Fate of one separatrix at horizon t_max.

    converges-to-Oi needs distance < 1e-5 to Oi sustained over 5 time units;
    near-homoclinic is a confirmed convergence that first returned within
    1e-3 of the origin; anything else is undecided-wandering.
    """
    s0 = _launch_point(p, side, offset)
    o1, o2 = nontrivial_points(p)
    field = make_field(p)

    t = 0.0
    y = tuple(s0)
    below_since = [math.nan, math.nan]  # per target, nan = not currently below
    departed = False
    min_dist_origin = math.inf
    chunk = 25.0

    def make_fate(verdict: str, decision_time: float) -> SeparatrixFate:
        return SeparatrixFate(verdict, min_dist_origin, decision_time,
                              p.r, side, t_max, State(*y))

    while t < t_max:
        horizon = min(chunk, t_max - t)
        try:
            sol = rk.solve(field, y, 0.0, horizon, rtol=tol.rel, atol=tol.abs,
                           max_step=tol.max_step, record=True, dense=False)
        except IntegrationError as err:
            err.partial_fate = make_fate("undecided-wandering", math.nan)
            raise
        states = np.asarray(sol.ys)
        times = np.asarray(sol.ts) + t

        norms = np.linalg.norm(states, axis=1)
        if not departed:
            beyond = np.flatnonzero(norms > DEPARTURE_RADIUS)
            if beyond.size:
                departed = True
                min_dist_origin = float(norms[beyond[0]:].min())
        else:
            min_dist_origin = min(min_dist_origin, float(norms.min()))

        for j, target in enumerate((o1, o2)):
            dists = np.linalg.norm(states - target.array(), axis=1)
            for i in range(len(times)):
                if dists[i] < CONVERGENCE_DIST:
                    if math.isnan(below_since[j]):
                        below_since[j] = float(times[i])
                    elif times[i] - below_since[j] >= CONVERGENCE_HOLD:
                        y = tuple(states[i])
                        verdict = ("near-homoclinic"
                                   if min_dist_origin < HOMOCLINIC_DIST
                                   else f"converges-to-O{j + 1}")
                        return make_fate(verdict, float(times[i]))
                else:
                    below_since[j] = math.nan

        t = float(times[-1])
        y = tuple(states[-1])

    return make_fate("undecided-wandering", math.nan)


def first_return_lobe_x(p: LorenzParams, side: int = 1,
                        offset: float = DEFAULT_OFFSET,
                        tol: ToleranceSpec = ToleranceSpec(),
                        t_horizon: float = 50.0) -> tuple[float, int]:
    """x at the z-maximum following the separatrix's first downward crossing
    of z = r-1, plus the number of z-maxima seen before that crossing.

    The sign of the returned x identifies the lobe the separatrix falls back
    into; it flips at the homoclinic parameter.  Raises GeometryError when
    the separatrix never reaches the plane.
    """
    s0 = _launch_point(p, side, offset)
    plane = plane_event((0.0, 0.0, 1.0), p.r - 1.0, direction=-1, stop_after=1,
                        name="plane")
    zmax = zmax_event(p)
    sol = rk.solve(make_field(p), s0, 0.0, t_horizon, rtol=tol.rel, atol=tol.abs,
                   max_step=tol.max_step, events=(plane, zmax), record=False)
    if sol.status != "event":
        raise GeometryError(
            f"separatrix did not return through z={p.r - 1.0:.6g} by t={t_horizon}")
    n_maxima = sum(1 for h in sol.events if h.name == "zmax")
    follow = rk.solve(make_field(p), sol.y_final, 0.0, t_horizon,
                      rtol=tol.rel, atol=tol.abs, max_step=tol.max_step,
                      events=(zmax_event(p, stop_after=1),), record=False)
    if follow.status != "event":
        raise GeometryError(
            f"no z-maximum after the plane crossing within t={t_horizon}")
    return follow.events[0].y[0], n_maxima


def find_homoclinic_r(p_template: LorenzParams, bracket: tuple[float, float],
                      r_tol: float = 1e-4, offset: float = DEFAULT_OFFSET,
                      tol: ToleranceSpec = ToleranceSpec()) -> BisectionResult:
    """Bisect on the first-return lobe sign to locate the homoclinic value.

    Below the homoclinic parameter the side-+ separatrix falls back into the
    x > 0 lobe after its first descent through z = r-1, above it into the
    x < 0 lobe.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise BracketError(f"bracket ({lo}, {hi}) is not increasing")

    probes: list[tuple[float, str]] = []

    def sign_at(r: float) -> int:
        x, _ = first_return_lobe_x(p_template.with_r(r), offset=offset, tol=tol)
        probes.append((r, f"x={x:.6g}"))
        if x == 0.0:
            return 0
        return 1 if x > 0.0 else -1

    s_lo, s_hi = sign_at(lo), sign_at(hi)
    if s_lo == s_hi:
        raise BracketError(
            f"first-return x has the same sign at both ends of [{lo}, {hi}]")
    history = [(lo, hi)]
    while hi - lo > r_tol:
        mid = 0.5 * (lo + hi)
        s_mid = sign_at(mid)
        if s_mid == 0:
            lo = hi = mid
            break
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
        history.append((lo, hi))
    return BisectionResult(0.5 * (lo + hi), tuple(history), tuple(probes))


def find_fate_transition_r(p_template: LorenzParams, bracket: tuple[float, float],
                           t_max: float = 1000.0, r_tol: float = 1e-3,
                           tol: ToleranceSpec = ToleranceSpec(),
                           offset: float = DEFAULT_OFFSET) -> BisectionResult:
    """Bisect on decided-vs-undecided separatrix fate at fixed t_max.

    Near the transition the settled destination alternates between O1 and O2,
    so the monotone observable is whether the fate is decided at all within
    t_max; t_max is part of the operational definition and of the result.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise BracketError(f"bracket ({lo}, {hi}) is not increasing")

    probes: list[tuple[float, str]] = []

    def decided(r: float) -> bool:
        fate = classify_separatrix_fate(p_template.with_r(r), side=1, tol=tol,
                                        t_max=t_max, offset=offset)
        probes.append((r, fate.verdict))
        return not math.isnan(fate.decision_time)

    d_lo, d_hi = decided(lo), decided(hi)
    if d_lo == d_hi:
        raise BracketError(
            f"fate is {'decided' if d_lo else 'undecided'} at both ends of "
            f"[{lo}, {hi}] at t_max={t_max}")
    if not d_lo:
        raise BracketError(
            f"expected the decided fate at the lower end of [{lo}, {hi}]")
    history = [(lo, hi)]
    while hi - lo > r_tol:
        mid = 0.5 * (lo + hi)
        if decided(mid):
            lo = mid
        else:
            hi = mid
        history.append((lo, hi))
    return BisectionResult(0.5 * (lo + hi), tuple(history), tuple(probes))


def fate_profile(p_template: LorenzParams, r_values: Sequence[float],
                 t_max: float = 1000.0, side: int = 1,
                 tol: ToleranceSpec = ToleranceSpec(),
                 offset: float = DEFAULT_OFFSET) -> list[FateProfileRow]:
    """Fate grid over r; rows come back in the given order regardless of
    evaluation order."""
    rows = []
    for r in r_values:
        fate = classify_separatrix_fate(p_template.with_r(float(r)), side=side,
                                        tol=tol, t_max=t_max, offset=offset)
        rows.append(FateProfileRow(float(r), fate.verdict, fate.decision_time,
                                   fate.min_dist_origin))
    return rows
