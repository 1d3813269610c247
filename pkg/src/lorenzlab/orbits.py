"""Periodic orbits: Newton shooting on the section map, Floquet multipliers,
symmetry images, and the multi-seed cycle search battery.

Newton runs on the two plane coordinates of the section z = z0; the period is
recovered from the event time and the section-map Jacobian comes from the
variational flow with the standard time-of-flight correction.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import rk
from .dynamics import (
    LorenzParams,
    State,
    ToleranceSpec,
    as_state,
    make_field,
    make_variational_field,
    plane_event,
    zmax_event,
)
from .errors import ConvergenceError, DomainError, GeometryError

NEWTON_RESIDUAL = 1e-10
MAX_NEWTON_ITER = 50
# Orbits are identical when periods agree to 1e-4 relative and the anchor of
# one lies within 1e-4 of a section point of the other.
DEDUP_PERIOD_RTOL = 1e-4
DEDUP_ANCHOR_DIST = 1e-4
SYMMETRY_DIST = 1e-6

# Newton refinement integrates tighter than the toolkit default so the
# 1e-10 residual target sits above the map's own noise floor.
ORBIT_TOL = ToleranceSpec(rel=1e-12, abs=1e-12, max_step=0.1, t_max=100.0)


@dataclass(frozen=True)
class PeriodicOrbit:
    params: LorenzParams
    anchor: State                      # on the section plane
    period: float
    returns: int                       # section crossings per period
    monodromy: np.ndarray              # 3x3 tangent map over one period
    multipliers: tuple[complex, complex, complex]  # sorted by |mu| descending
    nontrivial_multipliers: tuple[complex, complex]  # section-map spectrum
    stability: str                     # stable | saddle | unstable
    symmetric: bool
    signature: tuple[int, int]         # z-maxima counts in x>0 / x<0
    section_points: tuple[State, ...]  # the per-period downward crossings
    amplitude: float                   # max distance from the orbit mean
    residual: float
    newton_iterations: int
    section_z: float

    @property
    def trivial_multiplier(self) -> complex:
        return min(self.multipliers, key=lambda m: abs(m - 1.0))

    def multiplier_product_defect(self) -> float:
        prod = 1.0 + 0.0j
        for m in self.multipliers:
            prod *= m
        expected = math.exp(self.params.divergence * self.period)
        return abs(prod - expected) / expected


def _stability_label(nontrivial: Sequence[complex]) -> str:
    n_out = sum(1 for m in nontrivial if abs(m) > 1.0)
    return {0: "stable", 1: "saddle"}.get(n_out, "unstable")


def orbit_liouville_defect(orbit: PeriodicOrbit, chunk: float = 0.4,
                           tol: ToleranceSpec = ORBIT_TOL) -> float:
    """Relative defect of det(monodromy) against exp(divergence * period).

    Equivalent to the multiplier-product identity, but accumulated in log
    space over sub-period chunks: for strongly dissipative orbits the raw
    eigenvalue product saturates at the eigensolver's 1e-16 * ||M|| floor
    while this evaluation stays well-conditioned.
    """
    from .dynamics import liouville_defect

    return liouville_defect(orbit.params, orbit.anchor, orbit.period,
                            tol=tol, chunk=chunk)


def _section_map(p: LorenzParams, u: tuple[float, float], z0: float,
                 returns: int, direction: int, tol: ToleranceSpec,
                 t_horizon: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Return (state after `returns` crossings, 3x3 tangent map, flight time)."""
    y0 = (u[0], u[1], z0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)
    spec = plane_event((0.0, 0.0, 1.0), z0, direction=direction,
                       stop_after=returns)
    sol = rk.solve(make_variational_field(p), y0, 0.0, t_horizon,
                   rtol=tol.rel, atol=tol.abs, max_step=tol.max_step,
                   events=(spec,), record=False)
    if sol.status != "event":
        raise GeometryError(
            f"orbit from ({u[0]:.6g}, {u[1]:.6g}, {z0:.6g}) made only "
            f"{len(sol.events)} of {returns} section returns by t={t_horizon}")
    yf = sol.y_final
    m = np.array(yf[3:], dtype=float).reshape(3, 3, order="F")
    return np.array(yf[:3]), m, sol.t_final


def _poincare_jacobian(p: LorenzParams, s_end: np.ndarray, m: np.ndarray) -> np.ndarray:
    """2x2 derivative of the section map: time-of-flight correction applied
    to the monodromy, then restricted to the plane coordinates."""
    from .dynamics import vector_field

    f = np.array(vector_field(p, State(*s_end)))
    if f[2] == 0.0:
        raise GeometryError("tangential return: flow is parallel to the section")
    corrected = m - np.outer(f / f[2], m[2, :])
    return corrected[:2, :2]


def find_periodic_orbit(p: LorenzParams, guess: State | Sequence[float],
                        returns: int = 1, *, section_z: float | None = None,
                        direction: int = -1, tol: ToleranceSpec = ORBIT_TOL,
                        residual_tol: float = NEWTON_RESIDUAL,
                        max_iter: int = MAX_NEWTON_ITER,
                        t_horizon: float | None = None,
                        _normalize: bool = True) -> PeriodicOrbit:
    """Newton iteration on the section return map from a nearby guess.

    The guess is projected onto the plane z = section_z (default r-1); the
    orbit closes after `returns` direction-filtered crossings.  Raises
    ConvergenceError with the residual history after max_iter iterations and
    GeometryError when the orbit escapes the section neighbourhood.
    """
    guess = as_state(guess)
    z0 = p.r - 1.0 if section_z is None else float(section_z)
    if returns < 1:
        raise DomainError(f"returns must be >= 1, got {returns}")
    horizon = t_horizon if t_horizon is not None else max(40.0, 20.0 * returns)

    u = np.array([guess.x, guess.y], dtype=float)
    residuals: list[float] = []
    s_end, m_full, period = _section_map(p, (u[0], u[1]), z0, returns,
                                         direction, tol, horizon)
    res_vec = s_end[:2] - u
    res = float(np.linalg.norm(res_vec))
    residuals.append(res)

    iterations = 0
    while res > residual_tol:
        if iterations >= max_iter:
            raise ConvergenceError(
                f"Newton stalled at residual {res:.3e} after {iterations} "
                f"iterations", residuals)
        dp = _poincare_jacobian(p, s_end, m_full)
        try:
            du = np.linalg.solve(dp - np.eye(2), -res_vec)
        except np.linalg.LinAlgError:
            raise ConvergenceError(
                "singular section-map Jacobian (multiplier at +1?)", residuals)
        # Damped update: halve the step while the residual grows.
        scale = 1.0
        for _ in range(6):
            u_try = u + scale * du
            s_try, m_try, t_try = _section_map(p, (u_try[0], u_try[1]), z0,
                                               returns, direction, tol, horizon)
            r_try = s_try[:2] - u_try
            res_try = float(np.linalg.norm(r_try))
            if res_try < res or scale <= 1.0 / 32.0:
                break
            scale *= 0.5
        u, s_end, m_full, period = u_try, s_try, m_try, t_try
        res_vec = r_try
        res = res_try
        residuals.append(res)
        iterations += 1

    anchor = State(float(u[0]), float(u[1]), z0)
    # A stable focus on the section contracts returns below any residual
    # tolerance; reject such equilibrium collapses as non-orbits.
    from .equilibria import equilibria as _equilibria

    for eq in _equilibria(p):
        if anchor.distance(eq.location) < 1e-5:
            raise GeometryError(
                f"Newton collapsed onto the equilibrium at {tuple(eq.location)}")
    dp = _poincare_jacobian(p, s_end, m_full)
    nontrivial = tuple(sorted(np.linalg.eigvals(dp).astype(complex),
                              key=abs, reverse=True))
    multipliers = tuple(sorted(np.linalg.eigvals(m_full).astype(complex),
                               key=abs, reverse=True))

    signature, section_points, amplitude = _orbit_geometry(
        p, anchor, period, returns, z0, direction, tol)

    if _normalize and returns > 1:
        # A converged m-return fixed point may close earlier; report the
        # minimal period.
        for j, pt in enumerate(section_points[:-1], start=1):
            if pt.distance(anchor) < 1e-8:
                return find_periodic_orbit(
                    p, anchor, returns=j, section_z=z0, direction=direction,
                    tol=tol, residual_tol=residual_tol, max_iter=max_iter,
                    t_horizon=horizon, _normalize=False)

    symmetric = any(anchor.mirror().distance(pt) < SYMMETRY_DIST
                    for pt in section_points)
    return PeriodicOrbit(
        params=p,
        anchor=anchor,
        period=period,
        returns=returns,
        monodromy=m_full,
        multipliers=multipliers,
        nontrivial_multipliers=nontrivial,
        stability=_stability_label(nontrivial),
        symmetric=symmetric,
        signature=signature,
        section_points=section_points,
        amplitude=amplitude,
        residual=res,
        newton_iterations=iterations,
        section_z=z0,
    )


def _orbit_geometry(p: LorenzParams, anchor: State, period: float, returns: int,
                    z0: float, direction: int, tol: ToleranceSpec
                    ) -> tuple[tuple[int, int], tuple[State, ...], float]:
    """One recorded period from the anchor: rotation signature, the per-period
    section crossings, and the amplitude around the orbit mean."""
    plane = plane_event((0.0, 0.0, 1.0), z0, direction=direction, name="plane")
    zmax = zmax_event(p)
    sol = rk.solve(make_field(p), anchor, 0.0, period, rtol=tol.rel,
                   atol=tol.abs, max_step=tol.max_step, events=(plane, zmax),
                   record=True)
    k_pos = sum(1 for h in sol.events if h.name == "zmax" and h.y[0] > 0.0)
    k_neg = sum(1 for h in sol.events if h.name == "zmax" and h.y[0] <= 0.0)
    crossings = [State(*h.y[:3]) for h in sol.events if h.name == "plane"]
    # The closing crossing sits exactly at t=period and is usually not seen
    # as a sign change; pad so the list holds one state per return, the last
    # being the closure.
    while len(crossings) < returns:
        crossings.append(anchor)
    states = np.asarray(sol.ys)[:, :3]
    mean = states.mean(axis=0)
    amplitude = float(np.linalg.norm(states - mean, axis=1).max())
    return (k_pos, k_neg), tuple(crossings), amplitude


def symmetry_image(obj):
    """Apply S(x, y, z) = (-x, -y, z).

    States and Trajectories are mapped pointwise; a PeriodicOrbit keeps its
    period and multiplier set exactly, with mirrored anchor and swapped
    rotation signature.
    """
    if isinstance(obj, State):
        return obj.mirror()
    if isinstance(obj, PeriodicOrbit):
        sigma = np.diag([-1.0, -1.0, 1.0])
        return replace(
            obj,
            anchor=obj.anchor.mirror(),
            monodromy=sigma @ obj.monodromy @ sigma,
            signature=(obj.signature[1], obj.signature[0]),
            section_points=tuple(s.mirror() for s in obj.section_points),
        )
    mirror = getattr(obj, "mirror", None)
    if mirror is not None:
        return mirror()
    raise DomainError(f"cannot mirror object of type {type(obj).__name__}")


def same_orbit(a: PeriodicOrbit, b: PeriodicOrbit) -> bool:
    if abs(a.period - b.period) > DEDUP_PERIOD_RTOL * max(a.period, b.period):
        return False
    return any(a.anchor.distance(pt) < DEDUP_ANCHOR_DIST
               for pt in b.section_points)


@dataclass(frozen=True)
class BatteryStats:
    seeds_tried: int
    converged: int
    duplicates_merged: int
    newton_failures: int
    geometry_failures: int
    seed_modes: tuple[str, ...]


@dataclass(frozen=True)
class BatteryResult:
    orbits: tuple[PeriodicOrbit, ...]
    stats: BatteryStats


def _close_return_seeds(crossings: Sequence[State], max_gap: int = 6,
                        dist: float = 0.5) -> list[tuple[State, int, float]]:
    """Candidate (point, return count, recurrence distance) triples from a
    crossing sequence, nearest recurrences first."""
    seeds = []
    n = len(crossings)
    for m in range(1, max_gap + 1):
        for i in range(n - m):
            d = crossings[i].distance(crossings[i + m])
            if d < dist:
                seeds.append((crossings[i], m, d))
    seeds.sort(key=lambda s: (s[2], s[1]))
    return seeds


def _section_crossing_stream(p: LorenzParams, s0: State, z0: float,
                             t_run: float, tol: ToleranceSpec
                             ) -> tuple[list[State], list[float]]:
    spec = plane_event((0.0, 0.0, 1.0), z0, direction=-1)
    sol = rk.solve(make_field(p), s0, 0.0, t_run, rtol=tol.rel, atol=tol.abs,
                   max_step=tol.max_step, events=(spec,), record=False)
    return ([State(*h.y[:3]) for h in sol.events], [h.t for h in sol.events])


def cycle_search_battery(p: LorenzParams, budget: int = 100, *,
                         seed_modes: Sequence[str] = ("close-return", "separatrix"),
                         point_seeds: Sequence[tuple[State, int]] = (),
                         section_z: float | None = None,
                         rng_seed: int = 0, jitter: float = 1e-3,
                         t_run: float = 300.0,
                         tol: ToleranceSpec = ToleranceSpec(),
                         newton_max_iter: int = 12) -> BatteryResult:
    """Seeded Newton sweep for periodic orbits.

    Seeds come from close returns on long section-crossing streams (a generic
    orbit and/or the separatrices), plus explicit point seeds; every found
    orbit's symmetry image joins the result, and duplicates are merged by
    (period, anchor) proximity.  An empty orbit list is a valid outcome and
    ships with the search statistics.
    """
    z0 = p.r - 1.0 if section_z is None else float(section_z)
    rng = random.Random(rng_seed)
    candidates: list[tuple[State, int]] = []

    if "close-return" in seed_modes:
        stream, times = _section_crossing_stream(
            p, State(1.0, 1.0, 1.0), z0, t_run, tol)
        # Drop the approach transient.
        stream = [s for s, t in zip(stream, times) if t > 20.0]
        for s, m, _ in _close_return_seeds(stream):
            candidates.append((s, m))
    if "separatrix" in seed_modes and p.r > 1.0:
        from .separatrix import _launch_point

        stream, _ = _section_crossing_stream(
            p, _launch_point(p, 1, 1e-6), z0, t_run, tol)
        for s, m, _ in _close_return_seeds(stream):
            candidates.append((s, m))
    candidates.extend((as_state(s), int(m)) for s, m in point_seeds)

    # Deduplicate near-identical seeds, keep deterministic order.
    filtered: list[tuple[State, int]] = []
    for s, m in candidates:
        if not any(m == m2 and s.distance(s2) < 1e-3 for s2, m2 in filtered):
            filtered.append((s, m))

    orbits: list[PeriodicOrbit] = []
    tried = converged = newton_failures = geometry_failures = 0
    for s, m in filtered:
        if tried >= budget:
            break
        tried += 1
        jx = State(s.x + rng.uniform(-jitter, jitter),
                   s.y + rng.uniform(-jitter, jitter), z0)
        try:
            orb = find_periodic_orbit(p, jx, returns=m, section_z=z0,
                                      max_iter=newton_max_iter)
        except ConvergenceError:
            newton_failures += 1
            continue
        except GeometryError:
            geometry_failures += 1
            continue
        converged += 1
        for candidate in (orb, symmetry_image(orb)):
            if not any(same_orbit(candidate, o) for o in orbits):
                orbits.append(candidate)

    orbits.sort(key=lambda o: (o.period, o.anchor.x, o.anchor.y))
    stats = BatteryStats(
        seeds_tried=tried,
        converged=converged,
        duplicates_merged=max(0, converged * 2 - len(orbits)),
        newton_failures=newton_failures,
        geometry_failures=geometry_failures,
        seed_modes=tuple(seed_modes),
    )
    return BatteryResult(tuple(orbits), stats)
