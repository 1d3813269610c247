"""Lorenz vector field, Jacobian, and integration operations.

All operations are pure; every public type is immutable after construction
and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import rk
from .errors import DomainError


class State(NamedTuple):
    """A point of phase space. Coordinates must be finite."""

    x: float
    y: float
    z: float

    def array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    def mirror(self) -> "State":
        """Image under the z-axis symmetry S(x, y, z) = (-x, -y, z)."""
        return State(-self.x, -self.y, self.z)

    def distance(self, other: "State") -> float:
        return math.sqrt((self.x - other.x) ** 2 + (self.y - other.y) ** 2
                         + (self.z - other.z) ** 2)


def as_state(value: Sequence[float] | State) -> State:
    s = value if isinstance(value, State) else State(*map(float, value))
    if not all(map(math.isfinite, s)):
        raise DomainError(f"non-finite state {tuple(s)}")
    return s


@dataclass(frozen=True)
class LorenzParams:
    """Parameter triple (sigma, b, r); sigma and b must be positive."""

    sigma: float = 10.0
    b: float = 8.0 / 3.0
    r: float = 28.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if not (math.isfinite(self.b) and self.b > 0):
            raise DomainError(f"b must be positive, got {self.b}")
        if not math.isfinite(self.r):
            raise DomainError(f"r must be finite, got {self.r}")

    @property
    def divergence(self) -> float:
        """Constant divergence of the field, -(sigma + 1 + b)."""
        return -(self.sigma + 1.0 + self.b)

    def with_r(self, r: float) -> "LorenzParams":
        return LorenzParams(self.sigma, self.b, r)


@dataclass(frozen=True)
class ToleranceSpec:
    """Integrator accuracy knobs; rel and abs must lie in (0, 1)."""

    rel: float = 1e-10
    abs: float = 1e-10
    max_step: float = 0.1
    t_max: float = 100.0

    def __post_init__(self):
        if not (0.0 < self.rel < 1.0 and 0.0 < self.abs < 1.0):
            raise DomainError("rel and abs tolerances must lie in (0, 1)")
        if not (math.isfinite(self.max_step) and self.max_step > 0):
            raise DomainError("max_step must be positive")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise DomainError("t_max must be positive")

    def tightened(self, factor: float) -> "ToleranceSpec":
        return ToleranceSpec(self.rel * factor, self.abs * factor,
                             self.max_step, self.t_max)


class TrajectoryEvent(NamedTuple):
    t: float
    state: State
    tag: str


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped state sequence with dense output and event records."""

    params: LorenzParams
    times: np.ndarray            # strictly increasing, shape (n,)
    states: np.ndarray           # shape (n, 3), all entries finite
    events: tuple[TrajectoryEvent, ...] = ()
    grazings: tuple[TrajectoryEvent, ...] = ()
    n_accepted: int = 0
    n_rejected: int = 0
    label: str | None = None
    _segments: tuple[rk.DenseSegment, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise DomainError("trajectory times must be strictly increasing")
        if not np.all(np.isfinite(self.states)):
            raise DomainError("trajectory contains non-finite states")

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t_final(self) -> float:
        return float(self.times[-1])

    @property
    def final_state(self) -> State:
        return State(*self.states[-1])

    def at(self, t: float) -> State:
        """Dense-output evaluation; requires integrate(..., dense=True)."""
        if not self._segments:
            raise DomainError("trajectory was recorded without dense output")
        if not (self.t0 <= t <= self.t_final):
            raise DomainError(f"t={t} outside [{self.t0}, {self.t_final}]")
        lo, hi = 0, len(self._segments) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            seg = self._segments[mid]
            if t <= seg.t0 + seg.h:
                hi = mid
            else:
                lo = mid + 1
        return State(*self._segments[lo].eval(t)[:3])

    def mirror(self) -> "Trajectory":
        """Pointwise image under S(x, y, z) = (-x, -y, z)."""
        flipped = self.states.copy()
        flipped[:, 0] *= -1.0
        flipped[:, 1] *= -1.0
        return Trajectory(
            params=self.params,
            times=self.times.copy(),
            states=flipped,
            events=tuple(TrajectoryEvent(e.t, e.state.mirror(), e.tag)
                         for e in self.events),
            grazings=tuple(TrajectoryEvent(e.t, e.state.mirror(), e.tag)
                           for e in self.grazings),
            n_accepted=self.n_accepted,
            n_rejected=self.n_rejected,
            label=self.label,
        )


def vector_field(p: LorenzParams, s: State | Sequence[float]) -> State:
    """Right-hand side (sigma*(y-x), x*(r-z)-y, x*y-b*z)."""
    x, y, z = as_state(s)
    return State(p.sigma * (y - x), x * (p.r - z) - y, x * y - p.b * z)


def jacobian(p: LorenzParams, s: State | Sequence[float]) -> np.ndarray:
    """Jacobian of the field; its trace is -(sigma+1+b) at every state."""
    x, y, z = as_state(s)
    return np.array([
        [-p.sigma, p.sigma, 0.0],
        [p.r - z, -1.0, -x],
        [y, x, -p.b],
    ])


def make_field(p: LorenzParams) -> rk.Field:
    sigma, b, r = p.sigma, p.b, p.r

    def f(y: Sequence[float]) -> tuple[float, float, float]:
        x, yy, z = y
        return (sigma * (yy - x), x * (r - z) - yy, x * yy - b * z)

    return f


def make_variational_field(p: LorenzParams) -> rk.Field:
    """Field plus tangent flow: 12 components (state, then M column-major)."""
    sigma, b, r = p.sigma, p.b, p.r

    def f(y: Sequence[float]) -> tuple[float, ...]:
        x, yy, z = y[0], y[1], y[2]
        rz = r - z
        out = [sigma * (yy - x), x * rz - yy, x * yy - b * z,
               0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        for c in (3, 6, 9):
            m0, m1, m2 = y[c], y[c + 1], y[c + 2]
            out[c] = sigma * (m1 - m0)
            out[c + 1] = rz * m0 - m1 - x * m2
            out[c + 2] = yy * m0 + x * m1 - b * m2
        return tuple(out)

    return f


def plane_event(normal: Sequence[float], offset: float, direction: int = 0,
                stop_after: int | None = None, name: str = "plane") -> rk.EventSpec:
    """Crossing detector for the plane normal . s = offset."""
    nx, ny, nz = map(float, normal)
    if nx == 0.0 and ny == 0.0 and nz == 0.0:
        raise DomainError("plane normal must be nonzero")

    def g(y: Sequence[float]) -> float:
        return nx * y[0] + ny * y[1] + nz * y[2] - offset

    def slope(y: Sequence[float], fy: Sequence[float]) -> float:
        return nx * fy[0] + ny * fy[1] + nz * fy[2]

    return rk.EventSpec(fn=g, direction=direction, stop_after=stop_after,
                        name=name, slope=slope)


def zmax_event(p: LorenzParams, stop_after: int | None = None) -> rk.EventSpec:
    """Detector for local maxima of z: dz/dt = x*y - b*z crossing + to -."""
    b = p.b

    def g(y: Sequence[float]) -> float:
        return y[0] * y[1] - b * y[2]

    def slope(y: Sequence[float], fy: Sequence[float]) -> float:
        return fy[0] * y[1] + y[0] * fy[1] - b * fy[2]

    return rk.EventSpec(fn=g, direction=-1, stop_after=stop_after,
                        name="zmax", slope=slope)


def _to_trajectory(p: LorenzParams, sol: rk.Solution, label: str | None = None,
                   keep_dense: bool = False) -> Trajectory:
    return Trajectory(
        params=p,
        times=np.array(sol.ts),
        states=np.array(sol.ys)[:, :3],
        events=tuple(TrajectoryEvent(h.t, State(*h.y[:3]), h.name) for h in sol.events),
        grazings=tuple(TrajectoryEvent(h.t, State(*h.y[:3]), h.name)
                       for h in sol.grazings),
        n_accepted=sol.n_accepted,
        n_rejected=sol.n_rejected,
        label=label,
        _segments=tuple(sol.segments) if keep_dense else (),
    )


def integrate(p: LorenzParams, s0: State | Sequence[float],
              tol: ToleranceSpec = ToleranceSpec(), *,
              t_max: float | None = None, dense: bool = True,
              label: str | None = None) -> Trajectory:
    """Integrate from s0 for t in [0, t_max] (default tol.t_max)."""
    s0 = as_state(s0)
    horizon = tol.t_max if t_max is None else float(t_max)
    sol = rk.solve(make_field(p), s0, 0.0, horizon, rtol=tol.rel, atol=tol.abs,
                   max_step=tol.max_step, record=True, dense=dense)
    return _to_trajectory(p, sol, label=label, keep_dense=dense)


def integrate_with_events(p: LorenzParams, s0: State | Sequence[float],
                          tol: ToleranceSpec, plane: tuple[Sequence[float], float],
                          direction: int = 0, *, t_max: float | None = None,
                          stop_after: int | None = None, dense: bool = False,
                          label: str | None = None) -> Trajectory:
    """Integrate and record transversal crossings of the given plane.

    direction: +1 keeps crossings where normal . s increases, -1 decreases,
    0 both.  Grazing touches (crossing-function slope below 1e-12) land in
    Trajectory.grazings, never in events.
    """
    s0 = as_state(s0)
    normal, offset = plane
    spec = plane_event(normal, offset, direction=direction, stop_after=stop_after)
    horizon = tol.t_max if t_max is None else float(t_max)
    sol = rk.solve(make_field(p), s0, 0.0, horizon, rtol=tol.rel, atol=tol.abs,
                   max_step=tol.max_step, events=(spec,), record=True, dense=dense)
    return _to_trajectory(p, sol, label=label, keep_dense=dense)


def integrate_variational(p: LorenzParams, s0: State | Sequence[float], T: float,
                          tol: ToleranceSpec = ToleranceSpec()
                          ) -> tuple[State, np.ndarray]:
    """Flow s0 for time T > 0 together with the tangent map M(T).

    M solves M' = J(s(t)) M, M(0) = I; det M = exp(-(sigma+1+b) T) up to
    integration error (Liouville).
    """
    s0 = as_state(s0)
    if not (math.isfinite(T) and T > 0):
        raise DomainError(f"T must be positive, got {T}")
    y0 = (*s0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)
    sol = rk.solve(make_variational_field(p), y0, 0.0, T, rtol=tol.rel,
                   atol=tol.abs, max_step=tol.max_step, record=False)
    yf = sol.y_final
    m = np.array(yf[3:], dtype=float).reshape(3, 3, order="F")
    return State(*yf[:3]), m


def liouville_defect(p: LorenzParams, s0: State | Sequence[float], T: float,
                     tol: ToleranceSpec = ToleranceSpec(), chunk: float = 1.0) -> float:
    """Relative defect of det(monodromy over T) against exp(divergence * T).

    The determinant is accumulated in log space over subintervals; a direct
    det of a long-horizon monodromy is hopelessly ill-conditioned because its
    singular values spread across hundreds of orders of magnitude.
    """
    s = as_state(s0)
    log_det = 0.0
    t = 0.0
    while t < T:
        dt = min(chunk, T - t)
        s, m = integrate_variational(p, s, dt, tol)
        det = float(np.linalg.det(m))
        if det <= 0.0:
            raise DomainError("monodromy determinant lost positivity")
        log_det += math.log(det)
        t += dt
    return abs(math.expm1(log_det - p.divergence * T))


def mirror_field_check(p: LorenzParams, s: State) -> tuple[State, State]:
    """Equivariance pair: f(S(s)) and S'(f(s)) coincide for the Lorenz field."""
    fs = vector_field(p, s)
    return vector_field(p, s.mirror()), State(-fs.x, -fs.y, fs.z)
