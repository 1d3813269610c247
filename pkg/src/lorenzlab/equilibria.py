"""Closed-form equilibria, eigenvalue classification, and the Hopf threshold.

Eigenvalues of the 3x3 Jacobian come from the characteristic cubic solved in
closed form (trigonometric branch for three real roots, Cardano for a real
root plus a complex pair), so no iterative eigensolver sits on this path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import LorenzParams, State, jacobian, vector_field
from .errors import BracketError, DomainError

# Discriminant tolerance deciding three-real-roots vs real+complex-pair.
_DISC_TOL = 1e-12
# |Re lambda| below this counts as marginal.
_MARGINAL_TOL = 1e-9

CLASSIFICATIONS = (
    "stable-node",
    "stable-focus-node",
    "triple-degenerate",
    "saddle-index-1",
    "unstable-saddle-focus",
    "marginal",
)


@dataclass(frozen=True)
class Equilibrium:
    location: State
    eigenvalues: tuple[complex, complex, complex]
    classification: str

    @property
    def max_real_part(self) -> float:
        return max(ev.real for ev in self.eigenvalues)


def cubic_roots(c2: float, c1: float, c0: float) -> tuple[complex, complex, complex]:
    """Roots of x^3 + c2 x^2 + c1 x + c0, real triples resolved trigonometrically.

    The discriminant decision uses a relative tolerance so nearly-degenerate
    spectra stay on the real branch instead of acquiring spurious imaginary
    parts.
    """
    # Rescale x = s*u so the discriminant cannot under- or overflow.
    s = max(abs(c2), abs(c1) ** 0.5, abs(c0) ** (1.0 / 3.0))
    if s == 0.0:
        return (0j, 0j, 0j)
    if not math.isclose(s, 1.0):
        u = cubic_roots(c2 / s, c1 / s / s, c0 / s / s / s)
        return tuple(s * root for root in u)
    shift = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2 ** 3 / 27.0 - c2 * c1 / 3.0 + c0
    # Discriminant of the depressed cubic t^3 + p t + q.
    disc = -4.0 * p ** 3 - 27.0 * q * q
    scale = max(1.0, abs(p) ** 3, q * q)
    if disc > _DISC_TOL * scale:
        # Three distinct real roots.
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg) / 3.0
        roots = tuple(m * math.cos(phi - 2.0 * math.pi * k / 3.0) - shift
                      for k in range(3))
        return tuple(complex(v, 0.0) for v in roots)
    if disc >= -_DISC_TOL * scale:
        # Repeated real roots (boundary case).
        if abs(p) < 1e-300:
            t0 = -math.copysign(abs(q) ** (1.0 / 3.0), q)
            return (complex(t0 - shift),) * 3
        t_simple = 3.0 * q / p
        t_double = -t_simple / 2.0
        return (complex(t_double - shift), complex(t_double - shift),
                complex(t_simple - shift))
    # One real root and a complex-conjugate pair (Cardano).  Pick the
    # large-magnitude cube so -q/2 and the radical never cancel.
    inner = math.sqrt(q * q / 4.0 + p ** 3 / 27.0)
    u3 = -q / 2.0 - math.copysign(inner, q)
    if u3 == 0.0:
        u3 = -q / 2.0 + inner
    u = math.copysign(abs(u3) ** (1.0 / 3.0), u3)
    v = -p / (3.0 * u) if u != 0.0 else 0.0
    t_real = u + v
    re_pair = -t_real / 2.0
    im_pair = math.sqrt(3.0) / 2.0 * abs(u - v)
    return (complex(t_real - shift),
            complex(re_pair - shift, im_pair),
            complex(re_pair - shift, -im_pair))


def jacobian_eigenvalues(p: LorenzParams, s: State) -> tuple[complex, complex, complex]:
    """Eigenvalues of the Jacobian at s via the characteristic cubic."""
    j = jacobian(p, s)
    c2 = -float(np.trace(j))
    c1 = float(
        j[0, 0] * j[1, 1] - j[0, 1] * j[1, 0]
        + j[0, 0] * j[2, 2] - j[0, 2] * j[2, 0]
        + j[1, 1] * j[2, 2] - j[1, 2] * j[2, 1]
    )
    c0 = -float(np.linalg.det(j))
    roots = cubic_roots(c2, c1, c0)
    return tuple(sorted(roots, key=lambda ev: (ev.real, ev.imag), reverse=True))


def _spectrum_label(eigs: tuple[complex, complex, complex]) -> str:
    reals = [ev.real for ev in eigs]
    has_pair = any(abs(ev.imag) > 0.0 for ev in eigs)
    if any(abs(re) < _MARGINAL_TOL for re in reals):
        return "marginal"
    n_pos = sum(1 for re in reals if re > 0)
    if n_pos == 0:
        return "stable-focus-node" if has_pair else "stable-node"
    if has_pair:
        pair_re = next(ev.real for ev in eigs if abs(ev.imag) > 0.0)
        if pair_re > 0:
            return "unstable-saddle-focus"
        return "saddle-index-1"  # positive real eigenvalue, stable pair
    if n_pos == 1:
        return "saddle-index-1"
    raise DomainError(f"spectrum {eigs} outside the supported classification set")


def classify(p: LorenzParams, location: State | Equilibrium) -> Equilibrium:
    """Eigenvalues and stability label for an equilibrium of p.

    Raises DomainError when the point is not an equilibrium (field norm above
    1e-12 scaled by the coordinate magnitude).
    """
    loc = location.location if isinstance(location, Equilibrium) else State(*location)
    f = vector_field(p, loc)
    fnorm = math.sqrt(f.x ** 2 + f.y ** 2 + f.z ** 2)
    snorm = math.sqrt(loc.x ** 2 + loc.y ** 2 + loc.z ** 2)
    if fnorm >= 1e-12 * (1.0 + snorm):
        raise DomainError(f"{tuple(loc)} is not an equilibrium (|f| = {fnorm:.3e})")
    eigs = jacobian_eigenvalues(p, loc)
    return Equilibrium(loc, eigs, _spectrum_label(eigs))


def equilibria(p: LorenzParams) -> list[Equilibrium]:
    """All equilibria: the origin, plus the symmetric pair once r > 1.

    At r = 1 the three collide; the origin is then flagged triple-degenerate.
    """
    origin = classify(p, State(0.0, 0.0, 0.0))
    if p.r == 1.0:
        origin = Equilibrium(origin.location, origin.eigenvalues, "triple-degenerate")
    if p.r <= 1.0:
        return [origin]
    w = math.sqrt(p.b * (p.r - 1.0))
    o1 = classify(p, State(w, w, p.r - 1.0))
    o2 = Equilibrium(o1.location.mirror(), o1.eigenvalues, o1.classification)
    return [origin, o1, o2]


def nontrivial_points(p: LorenzParams) -> tuple[State, State]:
    """The pair (O1, O2) for r > 1."""
    if p.r <= 1.0:
        raise DomainError(f"no nontrivial equilibria at r={p.r}")
    w = math.sqrt(p.b * (p.r - 1.0))
    o1 = State(w, w, p.r - 1.0)
    return o1, o1.mirror()


def hopf_threshold(sigma: float, b: float) -> float:
    """Closed-form loss of stability of O1/O2: sigma*(sigma+b+3)/(sigma-b-1)."""
    if sigma - b - 1.0 <= 0.0:
        raise DomainError(
            f"no Hopf threshold: sigma - b - 1 = {sigma - b - 1.0:.6g} <= 0")
    return sigma * (sigma + b + 3.0) / (sigma - b - 1.0)


def find_hopf_numeric(sigma: float, b: float, r_bracket: tuple[float, float],
                      tol: float = 1e-9) -> float:
    """Bisection on the maximal eigenvalue real part of O1 over r.

    The bracket must straddle the stability switch; the result matches
    hopf_threshold to well below 1e-6.
    """
    lo, hi = map(float, r_bracket)
    if not lo < hi:
        raise BracketError(f"bracket ({lo}, {hi}) is not increasing")

    def max_re(r: float) -> float:
        p = LorenzParams(sigma, b, r)
        o1, _ = nontrivial_points(p)
        return max(ev.real for ev in jacobian_eigenvalues(p, o1))

    g_lo, g_hi = max_re(lo), max_re(hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if (g_lo < 0.0) == (g_hi < 0.0):
        raise BracketError(
            f"no stability switch of O1 in r bracket [{lo}, {hi}] "
            f"(max Re = {g_lo:.3e} and {g_hi:.3e})")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = max_re(mid)
        if g_mid == 0.0:
            return mid
        if (g_mid < 0.0) == (g_lo < 0.0):
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    return 0.5 * (lo + hi)
