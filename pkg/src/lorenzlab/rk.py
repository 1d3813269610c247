"""Adaptive embedded Runge-Kutta 5(4) core (Dormand-Prince pair).

The solver works on plain tuples of floats, which keeps the hot loop free of
array overhead for the 3- and 12-dimensional fields used by the toolkit.
Dense output is the free 4th-order continuous extension of the pair; event
roots are located on it by a bisection+secant hybrid to 1e-12 in time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import IntegrationError

# Dormand-Prince 5(4) tableau.
_A2 = (1 / 5,)
_A3 = (3 / 40, 9 / 40)
_A4 = (44 / 45, -56 / 15, 32 / 9)
_A5 = (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729)
_A6 = (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
# 5th-order minus embedded 4th-order weights (error estimator).
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
# Coefficients of the 4th-order interpolant, one polynomial weight row per stage.
_P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_EVENT_TIME_TOL = 1e-12
_GRAZE_SLOPE_TOL = 1e-12

Field = Callable[[Sequence[float]], tuple[float, ...]]


@dataclass(frozen=True)
class EventSpec:
    """Scalar crossing detector g(y)=0 evaluated along the flow.

    direction: +1 records only -to+ crossings, -1 only +to-, 0 both.
    stop_after: terminate integration at the n-th recorded crossing.
    slope: optional dg/dt(y, f(y)); used for the grazing check, otherwise a
    finite difference on the dense output is taken.
    """

    fn: Callable[[tuple[float, ...]], float]
    direction: int = 0
    stop_after: int | None = None
    name: str = "event"
    slope: Callable[[tuple[float, ...], tuple[float, ...]], float] | None = None


@dataclass(frozen=True)
class EventHit:
    t: float
    y: tuple[float, ...]
    name: str
    direction: int
    grazing: bool


@dataclass(frozen=True)
class DenseSegment:
    """Quartic interpolant over one accepted step: y(t0+theta*h)."""

    t0: float
    h: float
    y0: tuple[float, ...]
    q: tuple[tuple[float, float, float, float], ...]  # one row per component

    def eval(self, t: float) -> tuple[float, ...]:
        theta = (t - self.t0) / self.h
        t1 = theta
        t2 = t1 * theta
        t3 = t2 * theta
        t4 = t3 * theta
        h = self.h
        return tuple(
            y + h * (c[0] * t1 + c[1] * t2 + c[2] * t3 + c[3] * t4)
            for y, c in zip(self.y0, self.q)
        )


@dataclass
class Solution:
    ts: list[float]
    ys: list[tuple[float, ...]]
    events: list[EventHit]
    grazings: list[EventHit]
    segments: list[DenseSegment] = field(default_factory=list)
    n_accepted: int = 0
    n_rejected: int = 0
    status: str = "finished"  # 'finished' or 'event'

    @property
    def t_final(self) -> float:
        return self.ts[-1]

    @property
    def y_final(self) -> tuple[float, ...]:
        return self.ys[-1]


def _initial_step(f: Field, t0: float, y0: tuple[float, ...], f0: tuple[float, ...],
                  rtol: float, atol: float, max_step: float) -> float:
    """Hairer-style starting step estimate for a 5th-order method."""
    scale = [atol + rtol * abs(v) for v in y0]
    d0 = math.sqrt(sum((v / s) ** 2 for v, s in zip(y0, scale)) / len(y0))
    d1 = math.sqrt(sum((v / s) ** 2 for v, s in zip(f0, scale)) / len(y0))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    y1 = tuple(y + h0 * fv for y, fv in zip(y0, f0))
    f1 = f(y1)
    d2 = math.sqrt(sum(((a - b) / s) ** 2 for a, b, s in zip(f1, f0, scale)) / len(y0)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, max_step)


def _dense_coefficients(h: float, stages: tuple[tuple[float, ...], ...]
                        ) -> tuple[tuple[float, float, float, float], ...]:
    n = len(stages[0])
    rows = []
    for i in range(n):
        c0 = c1 = c2 = c3 = 0.0
        for k, p in zip(stages, _P):
            ki = k[i]
            c0 += ki * p[0]
            c1 += ki * p[1]
            c2 += ki * p[2]
            c3 += ki * p[3]
        rows.append((c0, c1, c2, c3))
    return tuple(rows)


def _refine_root(seg: DenseSegment, g: Callable[[tuple[float, ...]], float],
                 t_lo: float, g_lo: float, t_hi: float, g_hi: float) -> float:
    """Bisection+secant hybrid on the dense output, to 1e-12 in time."""
    for _ in range(120):
        if t_hi - t_lo <= _EVENT_TIME_TOL:
            break
        # Secant candidate; fall back to bisection when it leaves the bracket.
        denom = g_hi - g_lo
        t_mid = 0.5 * (t_lo + t_hi)
        if denom != 0.0:
            t_sec = t_hi - g_hi * (t_hi - t_lo) / denom
            margin = 0.01 * (t_hi - t_lo)
            if not (t_lo + margin <= t_sec <= t_hi - margin):
                t_sec = t_mid
        else:
            t_sec = t_mid
        g_sec = g(seg.eval(t_sec))
        if g_sec == 0.0:
            return t_sec
        if (g_lo < 0.0) == (g_sec < 0.0):
            t_lo, g_lo = t_sec, g_sec
        else:
            t_hi, g_hi = t_sec, g_sec
    return 0.5 * (t_lo + t_hi)


def solve(f: Field, y0: Sequence[float], t0: float, t_end: float, *,
          rtol: float, atol: float, max_step: float,
          events: Sequence[EventSpec] = (),
          record: bool = True, dense: bool = False,
          max_steps: int = 50_000_000) -> Solution:
    """Integrate y' = f(y) from t0 to t_end.

    Raises IntegrationError (carrying the last accepted time/state) when the
    step size underflows, which is how persistent non-finite stages surface.
    """
    y = tuple(float(v) for v in y0)
    n = len(y)
    t = float(t0)
    t_end = float(t_end)
    if t_end <= t:
        raise ValueError("t_end must exceed t0")
    k1 = f(y)
    if not all(math.isfinite(v) for v in k1):
        raise IntegrationError("non-finite field at initial state", t, y)
    h = _initial_step(f, t, y, k1, rtol, atol, max_step)

    sol = Solution(ts=[t], ys=[y], events=[], grazings=[])
    # Per-event previous value; an exact zero at t0 is never itself a crossing.
    g_prev = [ev.fn(y) for ev in events]
    counts = [0] * len(events)
    rng = range(n)

    steps = 0
    while True:
        gap = t_end - t
        if gap <= 1e-13 * max(1.0, abs(t_end)):
            break
        if steps >= max_steps:
            raise IntegrationError("step budget exhausted", t, y)
        steps += 1
        final_step = gap <= min(h, max_step)
        h = gap if final_step else min(h, max_step)
        if h <= 1e-14 * max(1.0, abs(t)):
            raise IntegrationError("step size underflow", t, y)

        a = h * _A2[0]
        k2 = f(tuple(y[i] + a * k1[i] for i in rng))
        a0, a1 = h * _A3[0], h * _A3[1]
        k3 = f(tuple(y[i] + a0 * k1[i] + a1 * k2[i] for i in rng))
        a0, a1, a2 = h * _A4[0], h * _A4[1], h * _A4[2]
        k4 = f(tuple(y[i] + a0 * k1[i] + a1 * k2[i] + a2 * k3[i] for i in rng))
        a0, a1, a2, a3 = h * _A5[0], h * _A5[1], h * _A5[2], h * _A5[3]
        k5 = f(tuple(y[i] + a0 * k1[i] + a1 * k2[i] + a2 * k3[i] + a3 * k4[i] for i in rng))
        a0, a1, a2, a3, a4 = h * _A6[0], h * _A6[1], h * _A6[2], h * _A6[3], h * _A6[4]
        k6 = f(tuple(y[i] + a0 * k1[i] + a1 * k2[i] + a2 * k3[i] + a3 * k4[i] + a4 * k5[i]
                     for i in rng))
        b0, b2, b3, b4, b5 = h * _B[0], h * _B[2], h * _B[3], h * _B[4], h * _B[5]
        y1 = tuple(y[i] + b0 * k1[i] + b2 * k3[i] + b3 * k4[i] + b4 * k5[i] + b5 * k6[i]
                   for i in rng)
        k7 = f(y1)

        e0, e2, e3, e4, e5, e6 = (h * _E[0], h * _E[2], h * _E[3], h * _E[4],
                                  h * _E[5], h * _E[6])
        acc = 0.0
        finite = True
        for i in rng:
            ei = e0 * k1[i] + e2 * k3[i] + e3 * k4[i] + e4 * k5[i] + e5 * k6[i] + e6 * k7[i]
            yi1 = y1[i]
            if not math.isfinite(yi1):
                finite = False
                break
            sc = atol + rtol * max(abs(y[i]), abs(yi1))
            q = ei / sc
            acc += q * q
        err = math.sqrt(acc / n) if finite else math.inf

        if err > 1.0:
            sol.n_rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2) if finite else _MIN_FACTOR
            continue

        # Accepted.
        sol.n_accepted += 1
        stages = (k1, k2, k3, k4, k5, k6, k7)
        seg: DenseSegment | None = None
        t1 = t_end if final_step else t + h

        truncated = False
        if events:
            hits: list[tuple[float, int, EventHit]] = []
            for j, ev in enumerate(events):
                g1 = ev.fn(y1)
                g0 = g_prev[j]
                crossed = (g0 < 0.0 < g1) or (g0 > 0.0 > g1) or (g0 != 0.0 and g1 == 0.0)
                if crossed:
                    direction = 1 if g0 < g1 else -1
                    if ev.direction == 0 or ev.direction == direction:
                        if seg is None:
                            seg = DenseSegment(t, h, y, _dense_coefficients(h, stages))
                        t_root = (t1 if g1 == 0.0
                                  else _refine_root(seg, ev.fn, t, g0, t1, g1))
                        y_root = seg.eval(t_root)
                        if ev.slope is not None:
                            slope = ev.slope(y_root, f(y_root))
                        else:
                            dt = max(1e-9, 1e-6 * h)
                            ga = ev.fn(seg.eval(min(t_root + dt, t1)))
                            gb = ev.fn(seg.eval(max(t_root - dt, t)))
                            slope = (ga - gb) / (2 * dt)
                        hit = EventHit(t_root, y_root, ev.name, direction,
                                       abs(slope) < _GRAZE_SLOPE_TOL)
                        hits.append((t_root, j, hit))
                g_prev[j] = g1
            hits.sort(key=lambda item: item[0])
            for t_root, j, hit in hits:
                if hit.grazing:
                    sol.grazings.append(hit)
                    continue
                sol.events.append(hit)
                counts[j] += 1
                ev = events[j]
                if ev.stop_after is not None and counts[j] >= ev.stop_after:
                    # Truncate the step at the terminal event.
                    y = hit.y
                    t = hit.t
                    if record:
                        sol.ts.append(t)
                        sol.ys.append(y)
                        if dense:
                            sol.segments.append(seg)  # covers up to the cut
                    else:
                        sol.ts = [t]
                        sol.ys = [y]
                    sol.status = "event"
                    truncated = True
                    break
        if truncated:
            return sol

        t = t1
        y = y1
        k1 = k7
        if record:
            sol.ts.append(t)
            sol.ys.append(y)
            if dense:
                if seg is None:
                    seg = DenseSegment(t - h, h, sol.ys[-2], _dense_coefficients(h, stages))
                sol.segments.append(seg)
        else:
            sol.ts = [t]
            sol.ys = [y]

        if err == 0.0:
            h *= _MAX_FACTOR
        else:
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2))

    return sol
