"""Command-line entry point: subcommand routing and structured emission.

Exit codes: 0 success, 1 domain/geometry/convergence failures during the
computation, 2 usage or configuration errors.  Every successful run writes
the emitted files plus manifest.json into the output directory.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import __version__
from .config import RunConfig, apply_overrides, load_config
from .continuation import continue_orbit
from .dynamics import LorenzParams, State, ToleranceSpec
from .equilibria import equilibria
from .errors import DomainError, ToolkitError
from .lyapunov import lyapunov_spectrum
from .orbits import cycle_search_battery, find_periodic_orbit
from .output import OutputDir
from .poincare import lorenz_return_map, poincare_crossings
from .report import ReportConfig, scenario_report
from .separatrix import (
    classify_separatrix_fate,
    fate_profile,
    find_fate_transition_r,
    find_homoclinic_r,
    launch_separatrix,
)
from .sweep import SweepSettings, sweep


def _bracket(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    return float(parts[0]), float(parts[1])


def _point(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'x,y,z', got {text!r}")
    return tuple(map(float, parts))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lorenzlab",
        description="Bifurcation-analysis toolkit for the classical Lorenz "
                    "system")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--sigma", type=float, default=None)
    ap.add_argument("--b", type=float, default=None)
    ap.add_argument("--config", default=None, help="flat key = value file")
    ap.add_argument("--out", default=None, help="output directory")
    ap.add_argument("--tol-rel", type=float, default=None, dest="tol_rel")
    ap.add_argument("--tol-abs", type=float, default=None, dest="tol_abs")
    ap.add_argument("--tmax", type=float, default=None, dest="t_max")
    ap.add_argument("--seed", type=int, default=None)

    sub = ap.add_subparsers(dest="command", required=True)

    eq = sub.add_parser("equilibria", help="equilibria and their spectra")
    eq.add_argument("--r", type=float, required=True)

    sep = sub.add_parser("separatrix", help="launch and classify a separatrix")
    sep.add_argument("--r", type=float, required=True)
    sep.add_argument("--side", choices=("+", "-"), default="+")
    sep.add_argument("--offset", type=float, default=1e-6)
    sep.add_argument("--save-trajectory", action="store_true")

    hs = sub.add_parser("homoclinic-search", help="bisect for the homoclinic value")
    hs.add_argument("--bracket", type=_bracket, required=True)
    hs.add_argument("--rtol", type=float, default=1e-4)

    ft = sub.add_parser("fate-transition", help="bisect for the fate transition")
    ft.add_argument("--bracket", type=_bracket, required=True)
    ft.add_argument("--rtol", type=float, default=1e-3)

    fp = sub.add_parser("fate-profile", help="separatrix fate grid over r")
    fp.add_argument("--r-from", type=float, required=True, dest="r_from")
    fp.add_argument("--r-to", type=float, required=True, dest="r_to")
    fp.add_argument("--step", type=float, required=True)
    fp.add_argument("--side", choices=("+", "-"), default="+")

    cy = sub.add_parser("cycle", help="periodic-orbit search")
    cy.add_argument("--r", type=float, required=True)
    cy.add_argument("--seed-mode", choices=("close-return", "separatrix", "point"),
                    default="close-return", dest="seed_mode")
    cy.add_argument("--seed-point", type=_point, default=None, dest="seed_point")
    cy.add_argument("--returns", type=int, default=1)
    cy.add_argument("--budget", type=int, default=None)

    co = sub.add_parser("continue", help="continue a periodic orbit in r")
    co.add_argument("--r-from", type=float, required=True, dest="r_from")
    co.add_argument("--r-to", type=float, required=True, dest="r_to")
    co.add_argument("--step", type=float, required=True)
    co.add_argument("--returns", type=int, default=2)
    co.add_argument("--min-step", type=float, default=1e-4, dest="min_step")
    co.add_argument("--stop-amplitude", type=float, default=None,
                    dest="stop_amplitude")

    rm = sub.add_parser("return-map", help="successive z-maxima map")
    rm.add_argument("--r", type=float, required=True)
    rm.add_argument("--n", type=int, required=True)
    rm.add_argument("--discard", type=int, default=20)

    ly = sub.add_parser("lyapunov", help="Lyapunov spectrum")
    ly.add_argument("--r", type=float, required=True)
    ly.add_argument("--total", type=float, default=2000.0)
    ly.add_argument("--transient", type=float, default=100.0)
    ly.add_argument("--renorm", type=float, default=0.5)

    sw = sub.add_parser("sweep", help="verdict sweep over r")
    sw.add_argument("--r-from", type=float, required=True, dest="r_from")
    sw.add_argument("--r-to", type=float, required=True, dest="r_to")
    sw.add_argument("--step", type=float, required=True)

    sr = sub.add_parser("scenario-report", help="grade all scenario claims")
    sr.add_argument("--battery-budget", type=int, default=40,
                    dest="battery_budget")
    sr.add_argument("--g-budget", type=int, default=30, dest="g_budget")
    sr.add_argument("--fate-tmax", type=float, default=1000.0, dest="fate_tmax")
    sr.add_argument("--probes", default=None,
                    help="comma-separated claim ids (default: all)")

    return ap


def _tolerance(cfg: RunConfig, t_max: float | None = None) -> ToleranceSpec:
    return ToleranceSpec(rel=cfg.tol_rel, abs=cfg.tol_abs,
                         max_step=cfg.max_step,
                         t_max=t_max if t_max is not None else cfg.t_max)


def _orbit_payload(orbit) -> dict:
    return {
        "anchor": {"x": orbit.anchor.x, "y": orbit.anchor.y, "z": orbit.anchor.z},
        "period": orbit.period,
        "returns": orbit.returns,
        "multipliers": [{"re": m.real, "im": m.imag} for m in orbit.multipliers],
        "nontrivial_multipliers": [{"re": m.real, "im": m.imag}
                                   for m in orbit.nontrivial_multipliers],
        "stability": orbit.stability,
        "symmetric": orbit.symmetric,
        "signature": list(orbit.signature),
        "amplitude": orbit.amplitude,
        "residual": orbit.residual,
    }


def _grid(r_from: float, r_to: float, step: float) -> list[float]:
    if step <= 0:
        raise DomainError(f"step must be positive, got {step}")
    lo, hi = sorted((r_from, r_to))
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    grid = [lo + k * step for k in range(n)]
    if grid[-1] < hi - 1e-9:
        grid.append(hi)
    if r_from > r_to:
        grid.reverse()
    return grid


def _run(args, cfg: RunConfig, out: OutputDir) -> None:
    p = LorenzParams(cfg.sigma, cfg.b, getattr(args, "r", 28.0))

    if args.command == "equilibria":
        payload = [{
            "location": {"x": e.location.x, "y": e.location.y, "z": e.location.z},
            "eigenvalues": [{"re": ev.real, "im": ev.imag} for ev in e.eigenvalues],
            "classification": e.classification,
        } for e in equilibria(p)]
        out.json("equilibria.json", payload)

    elif args.command == "separatrix":
        side = 1 if args.side == "+" else -1
        tol = _tolerance(cfg)
        fate = classify_separatrix_fate(p, side=side, tol=tol, t_max=cfg.t_max,
                                        offset=args.offset)
        out.json("separatrix.json", fate)
        if args.save_trajectory:
            traj = launch_separatrix(p, side, offset=args.offset, tol=tol,
                                     t_max=min(cfg.t_max, 100.0))
            out.trajectory("trajectory.csv", traj)
            out.events("trajectory_events.csv", traj)

    elif args.command == "homoclinic-search":
        res = find_homoclinic_r(p, args.bracket, r_tol=args.rtol,
                                tol=_tolerance(cfg, 50.0))
        out.json("homoclinic.json", {
            "estimate": res.estimate,
            "bracket_history": [list(b) for b in res.bracket_history],
            "probes": [{"r": r, "observable": obs} for r, obs in res.probes],
        })

    elif args.command == "fate-transition":
        res = find_fate_transition_r(p, args.bracket, t_max=cfg.t_max,
                                     r_tol=args.rtol, tol=_tolerance(cfg))
        out.json("fate_transition.json", {
            "estimate": res.estimate,
            "t_max": cfg.t_max,
            "bracket_history": [list(b) for b in res.bracket_history],
            "probes": [{"r": r, "verdict": v} for r, v in res.probes],
        })

    elif args.command == "fate-profile":
        rows = fate_profile(p, _grid(args.r_from, args.r_to, args.step),
                            t_max=cfg.t_max, side=1 if args.side == "+" else -1,
                            tol=_tolerance(cfg))
        out.csv("fate_profile.csv",
                ("r", "verdict", "decision_time", "min_dist_origin"),
                ((row.r, row.verdict, row.decision_time, row.min_dist_origin)
                 for row in rows))

    elif args.command == "cycle":
        budget = args.budget if args.budget is not None else cfg.battery_budget
        if args.seed_mode == "point":
            if args.seed_point is None:
                raise DomainError("--seed-point is required with --seed-mode point")
            orbit = find_periodic_orbit(p, State(*args.seed_point),
                                        returns=args.returns)
            out.json("cycles.json", {"orbits": [_orbit_payload(orbit)],
                                     "stats": None})
        else:
            res = cycle_search_battery(p, budget=budget,
                                       seed_modes=(args.seed_mode,),
                                       rng_seed=cfg.seed)
            out.json("cycles.json", {
                "orbits": [_orbit_payload(o) for o in res.orbits],
                "stats": res.stats,
            })

    elif args.command == "continue":
        p0 = LorenzParams(cfg.sigma, cfg.b, args.r_from)
        cs = poincare_crossings(p0, State(1.0, 1.0, 1.0), n=40,
                                tol=_tolerance(cfg), t_max=300.0)
        if len(cs.states) < args.returns + 1:
            raise DomainError(
                f"no section returns at r={args.r_from}; seed a cycle first")
        orbit = find_periodic_orbit(p0, cs.states[-1], returns=args.returns)
        branch = continue_orbit(orbit, args.r_to, step=args.step,
                                min_step=args.min_step,
                                stop_amplitude=args.stop_amplitude)
        nearest = {}
        for ev in branch.events:
            k = min(range(len(branch.points)),
                    key=lambda i: abs(branch.points[i].params.r - ev.r))
            nearest.setdefault(k, []).append(ev.kind)
        rows = []
        for i, o in enumerate(branch.points):
            mus = o.nontrivial_multipliers
            rows.append((o.params.r, o.period, o.amplitude,
                         mus[0].real, mus[0].imag, mus[1].real, mus[1].imag,
                         ";".join(nearest.get(i, []))))
        out.csv("branch.csv", ("r", "period", "amplitude", "mu1_re", "mu1_im",
                               "mu2_re", "mu2_im", "event"), rows)
        out.json("branch_events.json", [{
            "kind": e.kind, "r": e.r, "bracket": list(e.bracket),
            "multiplier": None if e.multiplier is None else
            {"re": e.multiplier.real, "im": e.multiplier.imag},
            "note": e.note,
        } for e in branch.events])

    elif args.command == "return-map":
        samples = lorenz_return_map(p, State(1.0, 1.0, 1.0), n_maxima=args.n,
                                    discard=args.discard, tol=_tolerance(cfg))
        out.csv("return_map.csv", ("zmax_i", "zmax_next"),
                ((s.zmax_current, s.zmax_next) for s in samples))

    elif args.command == "lyapunov":
        spec = lyapunov_spectrum(p, transient=args.transient, total=args.total,
                                 renorm=args.renorm, tol=_tolerance(cfg))
        out.json("lyapunov.json", spec)

    elif args.command == "sweep":
        settings = SweepSettings(tol=_tolerance(cfg), full_spectrum=True)
        records = sweep(LorenzParams(cfg.sigma, cfg.b, 28.0),
                        _grid(args.r_from, args.r_to, args.step), settings)
        out.csv("sweep.csv",
                ("r", "lam1", "lam2", "lam3", "verdict", "n_clusters"),
                ((rec.r, *(rec.exponents if rec.exponents is not None
                           else (rec.leading_exponent, math.nan, math.nan)),
                  rec.verdict, rec.n_clusters) for rec in records))
        out.csv("sweep_maxima.csv", ("r", "zmax"),
                ((rec.r, z) for rec in records for z in rec.maxima))
        failures = [{"r": rec.r, "error": rec.error}
                    for rec in records if rec.error]
        if failures:
            out.json("sweep_failures.json", failures)

    elif args.command == "scenario-report":
        probes = (tuple(args.probes.split(",")) if args.probes else None)
        rep = scenario_report(ReportConfig(
            sigma=cfg.sigma, b=cfg.b, battery_budget=args.battery_budget,
            g_battery_budget=args.g_budget, fate_t_max=args.fate_tmax,
            rng_seed=cfg.seed, probes=probes))
        out.json("report.json", rep)

    else:  # pragma: no cover - argparse enforces the choices
        raise DomainError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)

    try:
        cfg = RunConfig()
        if args.config:
            cfg = load_config(args.config, cfg)
        cfg = apply_overrides(
            cfg, sigma=args.sigma, b=args.b, out=args.out,
            tol_rel=args.tol_rel, tol_abs=args.tol_abs, t_max=args.t_max,
            seed=args.seed)
    except (DomainError, OSError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2

    out = OutputDir(cfg.out)
    start = time.perf_counter()
    try:
        _run(args, cfg, out)
    except ToolkitError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return 1
    out.write_manifest(cfg, __version__,
                       {args.command: time.perf_counter() - start})
    return 0


if __name__ == "__main__":
    sys.exit(main())
