"""Poincare sections and the successive-maxima return map.

The one-dimensional reduction uses successive local maxima of z along an
orbit; on the chaotic attractor the resulting graph is numerically
one-dimensional, and its fixed points correspond to periodic orbits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import rk
from .dynamics import (
    LorenzParams,
    State,
    ToleranceSpec,
    as_state,
    make_field,
    plane_event,
    zmax_event,
)
from .errors import InsufficientDataError


class ReturnMapSample(NamedTuple):
    zmax_current: float
    zmax_next: float


@dataclass(frozen=True)
class CrossingSet:
    """Section crossings in time order; complete is False when the time
    horizon ran out before the requested count."""

    states: tuple[State, ...]
    times: tuple[float, ...]
    complete: bool


def default_plane(p: LorenzParams) -> tuple[tuple[float, float, float], float]:
    """The plane z = r - 1 containing both nontrivial equilibria."""
    return (0.0, 0.0, 1.0), p.r - 1.0


def poincare_crossings(p: LorenzParams, s0: State | Sequence[float],
                       n: int, plane=None, direction: int = -1,
                       tol: ToleranceSpec = ToleranceSpec(),
                       t_max: float = 1000.0) -> CrossingSet:
    """First n direction-filtered crossings of the section plane."""
    if n < 1:
        raise InsufficientDataError(f"n must be >= 1, got {n}")
    s0 = as_state(s0)
    normal, offset = plane if plane is not None else default_plane(p)
    spec = plane_event(normal, offset, direction=direction, stop_after=n)
    sol = rk.solve(make_field(p), s0, 0.0, t_max, rtol=tol.rel, atol=tol.abs,
                   max_step=tol.max_step, events=(spec,), record=False)
    states = tuple(State(*h.y[:3]) for h in sol.events)
    times = tuple(h.t for h in sol.events)
    return CrossingSet(states, times, complete=len(states) == n)


def lorenz_return_map(p: LorenzParams, s0: State | Sequence[float],
                      n_maxima: int, discard: int = 20,
                      tol: ToleranceSpec = ToleranceSpec(),
                      t_max: float = 20000.0) -> list[ReturnMapSample]:
    """Pairs of successive z-maxima after a discarded transient.

    Raises InsufficientDataError when fewer than two maxima remain, e.g. on
    orbits that sink to an equilibrium.
    """
    if n_maxima < 2:
        raise InsufficientDataError(f"n_maxima must be >= 2, got {n_maxima}")
    s0 = as_state(s0)
    spec = zmax_event(p, stop_after=discard + n_maxima)
    sol = rk.solve(make_field(p), s0, 0.0, t_max, rtol=tol.rel, atol=tol.abs,
                   max_step=tol.max_step, events=(spec,), record=False)
    maxima = [h.y[2] for h in sol.events][discard:]
    if len(maxima) < 2:
        raise InsufficientDataError(
            f"only {len(maxima)} z-maxima after discarding {discard} "
            f"(orbit may sink to an equilibrium)")
    return [ReturnMapSample(a, b) for a, b in zip(maxima, maxima[1:])]


def map_samples_arrays(samples: Sequence[ReturnMapSample]) -> tuple[np.ndarray, np.ndarray]:
    cur = np.array([s.zmax_current for s in samples])
    nxt = np.array([s.zmax_next for s in samples])
    return cur, nxt


def return_map_thinness(samples: Sequence[ReturnMapSample],
                        bins: int = 200) -> float:
    """Vertical spread of the graph as a fraction of its horizontal range.

    Per bin the spread is the residual span around a least-squares line, so
    branch slope does not masquerade as thickness; the reported figure is the
    95th percentile over occupied bins.
    """
    cur, nxt = map_samples_arrays(samples)
    lo, hi = float(cur.min()), float(cur.max())
    width = hi - lo
    if width <= 0:
        return 0.0
    idx = np.clip(((cur - lo) / width * bins).astype(int), 0, bins - 1)
    spreads = []
    for k in range(bins):
        mask = idx == k
        if np.count_nonzero(mask) < 5:
            continue
        x = cur[mask]
        y = nxt[mask]
        xc = x - x.mean()
        denom = float(xc @ xc)
        slope = float(xc @ (y - y.mean())) / denom if denom > 0 else 0.0
        resid = y - (y.mean() + slope * xc)
        spreads.append(float(resid.max() - resid.min()))
    if not spreads:
        raise InsufficientDataError("no return-map bin holds enough samples")
    return float(np.percentile(spreads, 95)) / width


def diagonal_crossing_slope(samples: Sequence[ReturnMapSample],
                            bins: int = 100) -> float:
    """Secant slope of the binned map where it crosses the diagonal."""
    cur, nxt = map_samples_arrays(samples)
    lo, hi = float(cur.min()), float(cur.max())
    if hi <= lo:
        raise InsufficientDataError("return map has zero horizontal range")
    idx = np.clip(((cur - lo) / (hi - lo) * bins).astype(int), 0, bins - 1)
    centers, medians = [], []
    for k in range(bins):
        mask = idx == k
        if np.count_nonzero(mask) < 3:
            continue
        centers.append(float(cur[mask].mean()))
        medians.append(float(np.median(nxt[mask])))
    gap = [m - c for c, m in zip(centers, medians)]
    for i in range(len(gap) - 1):
        if gap[i] == 0.0 or (gap[i] > 0) != (gap[i + 1] > 0):
            dx = centers[i + 1] - centers[i]
            if dx == 0.0:
                continue
            return (medians[i + 1] - medians[i]) / dx
    raise InsufficientDataError("binned return map never crosses the diagonal")


def fixed_point_spread(samples: Sequence[ReturnMapSample]) -> float:
    """Spread of the sample cloud; ~0 when seeded on a periodic orbit whose
    maxima are all equal (a fixed point of the map)."""
    cur, nxt = map_samples_arrays(samples)
    return float(max(cur.max() - cur.min(), nxt.max() - nxt.min()))
