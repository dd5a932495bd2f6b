"""Command-line frontend.

Every operation is exposed as a subcommand; series go to CSV, scalar
reports to JSON (stdout unless --output is given), plots to SVG.  Exit
codes: 0 success, 2 bad configuration, 3 numerical failure, 4 golden
mismatch.  FRONTLAB_THREADS caps the parallelism of parameter scans.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import bargmann, dynamics, evans, golden, profile, spectral
from .errors import ConfigError, FrontlabError, GoldenMismatch

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_GOLDEN = 4


class _Parser(argparse.ArgumentParser):
    """argparse that emits a JSON error record instead of bare usage text."""

    def error(self, message):
        _emit_error("ConfigError", message, command=self.prog)
        raise SystemExit(EXIT_CONFIG)


def _emit_error(kind: str, message: str, command: str = "", origin: str = "") -> None:
    record = {"error": kind, "message": message}
    if command:
        record["command"] = command
    if origin:
        record["origin"] = origin
    print(json.dumps(record, sort_keys=True))


def _emit(obj: dict, output: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2)
    if output:
        Path(output).write_text(text + "\n")
        print(json.dumps({"written": str(output)}, sort_keys=True))
    else:
        print(text)


def _write_csv(path: str | Path, header: list[str], rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(c)) for c in row])
    return path


def _scan_workers() -> int:
    raw = os.environ.get("FRONTLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"FRONTLAB_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def _scan_map(fn, values):
    """Order-stable fan-out over scan values, capped by FRONTLAB_THREADS."""
    workers = _scan_workers()
    if workers == 1:
        return [fn(v) for v in values]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, values))


def _front_kwargs(args) -> dict:
    kw = {}
    if args.half_length is not None:
        if args.half_length <= 0:
            raise ConfigError("--half-length must be positive")
        kw["half_length"] = args.half_length
    if args.grid_points is not None:
        if args.grid_points < 64:
            raise ConfigError("--grid-points must be at least 64")
        kw["grid_points"] = args.grid_points
    if args.ode_tol is not None:
        if args.ode_tol <= 0:
            raise ConfigError("--ode-tol must be positive")
        kw["ode_tol"] = args.ode_tol
    return kw


def _add_front_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--half-length", type=float, default=None,
                   help="half-width L of the profile window (default 40*max(1,|nu|))")
    p.add_argument("--grid-points", type=int, default=None,
                   help="number of grid points (default gives spacing ~0.02)")
    p.add_argument("--ode-tol", type=float, default=None,
                   help="shooting tolerance (default 1e-10)")


def _golden_gate(checks: list[tuple[str, float]]) -> None:
    """Raise GoldenMismatch if any computed value misses its reference."""
    failures = []
    for name, value in checks:
        ok, ref, tol = golden.check(name, value)
        if not ok:
            failures.append(f"{name}: got {value!r}, want {ref} +/- {tol}")
    if failures:
        raise GoldenMismatch("; ".join(failures))


# ----------------------------------------------------------------- commands

def _cmd_front(args) -> int:
    fr = profile.solve_front(args.nu, **_front_kwargs(args))
    out = Path(args.output or f"front_nu{args.nu:g}.csv")
    fr.to_csv(out)
    if args.plot:
        from .plotting import line_plot
        line_plot(out.with_suffix(".svg"), fr.grid,
                  {"phi": fr.phi, "dphi": fr.dphi}, xlabel="x", title=f"front nu={fr.nu:g}")
    _emit({"nu": fr.nu, "half_length": fr.half_length, "residual": fr.residual,
           "phase": fr.phase, "csv": str(out)}, None)
    return EXIT_OK


def _cmd_tau(args) -> int:
    key = None
    if args.golden:
        key = {0.0: "tau@nu=0", 0.25: "tau@nu=0.25"}.get(args.nu)
        if key is None:
            raise ConfigError(f"no golden tau value for nu={args.nu}")
    fr = profile.solve_front(args.nu, **_front_kwargs(args))
    report = bargmann.bargmann_report(fr)
    if key is not None:
        _golden_gate([(key, report.tau)])
    _emit(report.to_dict(), args.output)
    return EXIT_OK


def _tau_point(nu: float) -> float:
    return bargmann.tau(profile.solve_front(nu).potential())[0]


def _require_ordered(lo: float, hi: float) -> None:
    if not lo < hi:
        raise ConfigError(f"--lo must be below --hi (got {lo}, {hi})")


def _cmd_tau_scan(args) -> int:
    if args.steps < 2:
        raise ConfigError("--steps must be at least 2")
    _require_ordered(args.lo, args.hi)
    nus = np.linspace(args.lo, args.hi, args.steps)
    taus = _scan_map(_tau_point, [float(v) for v in nus])
    out = _write_csv(args.output or "tau_scan.csv", ["nu", "tau"], zip(nus, taus))
    if args.plot:
        from .plotting import line_plot
        line_plot(out.with_suffix(".svg"), nus, {"tau": taus}, xlabel="nu", ylabel="tau")
    _emit({"csv": str(out), "lo": args.lo, "hi": args.hi, "steps": args.steps}, None)
    return EXIT_OK


def _cmd_tau_crossing(args) -> int:
    if args.golden and args.target != 1.0:
        raise ConfigError("golden crossing is recorded for target 1 only")
    _require_ordered(args.lo, args.hi)
    if args.nu_tol <= 0:
        raise ConfigError("--nu-tol must be positive")
    nu = bargmann.find_tau_crossing(args.target, args.lo, args.hi, nu_tol=args.nu_tol)
    if args.golden:
        _golden_gate([("tau_crossing@target=1", nu)])
    _emit({"target": args.target, "nu": nu, "lo": args.lo, "hi": args.hi}, args.output)
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    if not 0.0 <= args.epsilon < 1.0:
        raise ConfigError("--epsilon must lie in [0, 1)")
    if args.tol is not None and args.tol <= 0:
        raise ConfigError("--tol must be positive")
    fr = profile.solve_front(args.nu, **_front_kwargs(args))
    op = spectral.build_operator(fr.potential(), args.epsilon)
    report = spectral.count_negative_eigenvalues(op, tol=args.tol, nu=fr.nu)
    d = report.to_dict()
    if args.gamma is not None:
        if args.gamma < 0:
            raise ConfigError("--gamma must be nonnegative")
        d["gamma"] = args.gamma
        d["min_eig_perturbed"] = spectral.rank_one_min_eigenvalue(op, args.gamma)
    _emit(d, args.output)
    return EXIT_OK


def _cmd_rank_one(args) -> int:
    if args.gamma < 0:
        raise ConfigError("--gamma must be nonnegative")
    if not 0.0 <= args.epsilon < 1.0:
        raise ConfigError("--epsilon must lie in [0, 1)")
    fr = profile.solve_front(args.nu, **_front_kwargs(args))
    op = spectral.build_operator(fr.potential(), args.epsilon)
    q = fr.potential().values
    mass = float(op.h * np.sum(q))
    _emit({"nu": fr.nu, "epsilon": args.epsilon, "gamma": args.gamma,
           "min_eig_perturbed": spectral.rank_one_min_eigenvalue(op, args.gamma),
           "threshold_gamma": -1.0 / mass}, args.output)
    return EXIT_OK


def _cmd_evans(args) -> int:
    if args.lambda_min >= 0:
        raise ConfigError("--lambda-min must be negative")
    if args.points < 2:
        raise ConfigError("--points must be at least 2")
    fr = profile.solve_front(args.nu, **_front_kwargs(args))
    lams = evans.default_lambda_grid(args.lambda_min, args.points)
    curve = evans.evans_curve(fr, lams)
    out = Path(args.output or f"evans_nu{args.nu:g}.csv")
    curve.to_csv(out)
    if args.plot:
        from .plotting import line_plot
        # scale by the leftmost sample so curves for different nu are comparable
        scale = abs(curve.deltas[0]) or 1.0
        line_plot(out.with_suffix(".svg"), curve.lambdas,
                  {"delta": curve.deltas / scale},
                  xlabel="lambda", ylabel="delta (scaled)", title=f"nu={fr.nu:g}")
    _emit({"nu": fr.nu, "negative_roots": curve.negative_roots,
           "count": evans.count_negative_roots(curve),
           "delta_at_zero": curve.delta_at_zero, "csv": str(out)}, None)
    return EXIT_OK


def _evans_zero_point(nu: float) -> float:
    return evans.shoot_evans(profile.solve_front(nu), 0.0)


def _cmd_evans_scan(args) -> int:
    if args.steps < 2:
        raise ConfigError("--steps must be at least 2")
    _require_ordered(args.lo, args.hi)
    nus = np.linspace(args.lo, args.hi, args.steps)
    d0 = _scan_map(_evans_zero_point, [float(v) for v in nus])
    out = _write_csv(args.output or "evans_scan.csv", ["nu", "delta_at_zero"], zip(nus, d0))
    if args.plot:
        from .plotting import line_plot
        line_plot(out.with_suffix(".svg"), nus, {"delta_at_zero": d0}, xlabel="nu")
    _emit({"csv": str(out), "lo": args.lo, "hi": args.hi, "steps": args.steps}, None)
    return EXIT_OK


def _cmd_nu_critical(args) -> int:
    _require_ordered(args.lo, args.hi)
    if args.nu_tol <= 0:
        raise ConfigError("--nu-tol must be positive")
    nu_c = evans.find_nu_critical(args.lo, args.hi, nu_tol=args.nu_tol)
    if args.golden:
        _golden_gate([("nu_critical", nu_c)])
    _emit({"nu_c": nu_c, "lo": args.lo, "hi": args.hi}, args.output)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    for name in ("T", "amplitude", "width"):
        if getattr(args, name) <= 0:
            raise ConfigError(f"--{name} must be positive")
    if args.gamma < 0:
        raise ConfigError("--gamma must be nonnegative")
    if args.dt is not None and args.dt <= 0:
        raise ConfigError("--dt must be positive")
    if args.points < 64:
        raise ConfigError("--points must be at least 64")
    if args.sponge < 0:
        raise ConfigError("--sponge must be nonnegative")
    if args.record_every < 1:
        raise ConfigError("--record-every must be at least 1")
    if args.domain is not None and args.domain <= 0:
        raise ConfigError("--domain must be positive")
    fr = profile.solve_front(args.nu, **_front_kwargs(args))
    D = args.domain if args.domain is not None else 2.0 * fr.half_length
    n = args.points
    v0 = dynamics.gaussian_bump(D, n, args.amplitude, args.width, args.center)
    trace = dynamics.simulate(fr, v0, args.gamma, T=args.T, dt=args.dt,
                              sponge_strength=args.sponge,
                              record_every=args.record_every)
    out = Path(args.output or f"sim_nu{args.nu:g}.csv")
    trace.to_csv(out)
    dt_used = args.dt if args.dt is not None else float(trace.times[1] - trace.times[0])
    dynamics.run_config_json(fr, args.gamma, args.T, dt_used, D, n,
                             f"{args.amplitude:g}*gaussian(width={args.width:g}, "
                             f"center={args.center:g})", out.with_suffix(".json"))
    if args.plot:
        from .plotting import line_plot
        line_plot(out.with_suffix(".svg"), trace.times,
                  {"l2_v": trace.l2_v, "l2_vx": trace.l2_vx}, xlabel="t")
    dl = np.diff(trace.l2_v)
    _emit({"csv": str(out), "l2_v_initial": float(trace.l2_v[0]),
           "l2_v_final": float(trace.l2_v[-1]),
           "x0_final": float(trace.x0_series[-1]),
           "monotone_violations": int(np.sum(dl > 1e-9 * np.maximum(trace.l2_v[:-1], 1e-300))),
           "median_energy_residual": float(np.nanmedian(trace.energy_residual))}, None)
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.figure == "tau-vs-nu":
        nus = np.linspace(0.25, 1.25, args.steps)
        taus = _scan_map(_tau_point, [float(v) for v in nus])
        out = _write_csv(outdir / "tau_vs_nu.csv", ["nu", "tau"], zip(nus, taus))
        from .plotting import line_plot
        line_plot(out.with_suffix(".svg"), nus, {"tau": taus}, xlabel="nu", ylabel="tau")
        crossing = float(np.interp(1.0, taus, nus))
        _emit({"csv": str(out), "tau_equals_one_at_nu": crossing}, None)
    elif args.figure == "evans-curves":
        artifacts = {}
        series = {}
        lambdas = None
        for nu in (4.09, 4.096, 4.10):
            fr = profile.solve_front(nu)
            curve = evans.evans_curve(fr)
            out = outdir / f"evans_nu{nu:g}.csv"
            curve.to_csv(out)
            artifacts[f"{nu:g}"] = {"csv": str(out),
                                    "count": evans.count_negative_roots(curve),
                                    "delta_at_zero": curve.delta_at_zero}
            lambdas = curve.lambdas
            series[f"nu={nu:g}"] = curve.deltas / (abs(curve.deltas[0]) or 1.0)
        from .plotting import line_plot
        line_plot(outdir / "evans_curves.svg", lambdas, series,
                  xlabel="lambda", ylabel="delta (scaled)")
        _emit({"curves": artifacts, "svg": str(outdir / "evans_curves.svg")}, None)
    elif args.figure == "front-gallery":
        fr = profile.solve_front(args.nu)
        m, m_inf = bargmann.monotonize(fr.phi_sampled(), fr.dphi)
        x0 = bargmann.shock_offset(m, m_inf)
        shock = np.where(fr.grid < x0, m_inf, -m_inf)
        out = _write_csv(outdir / f"front_gallery_nu{args.nu:g}.csv",
                         ["x", "phi", "m", "s"],
                         zip(fr.grid, fr.phi, m.values, shock))
        from .plotting import line_plot
        line_plot(out.with_suffix(".svg"), fr.grid,
                  {"phi": fr.phi, "M(phi)": m.values, "S": shock}, xlabel="x")
        _emit({"csv": str(out), "m_infinity": m_inf, "shock_offset": x0}, None)
    else:
        raise ConfigError(f"unknown figure {args.figure!r}")
    return EXIT_OK


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="frontlab",
                description="Numerical laboratory for traveling-front stability "
                            "of diffusive-dispersive Burgers-type equations.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("front", _cmd_front, "compute a front profile, write CSV + JSON sidecar")
    sp.add_argument("--nu", type=float, required=True)
    _add_front_options(sp)
    sp.add_argument("--output", default=None)
    sp.add_argument("--plot", action="store_true")

    sp = add("tau", _cmd_tau, "Bargmann integral report for one front")
    sp.add_argument("--nu", type=float, required=True)
    _add_front_options(sp)
    sp.add_argument("--output", default=None)
    sp.add_argument("--golden", action="store_true")

    sp = add("tau-scan", _cmd_tau_scan, "tau(phi'/2) over a nu range, CSV nu,tau")
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.add_argument("--steps", type=int, default=41)
    sp.add_argument("--output", default=None)
    sp.add_argument("--plot", action="store_true")

    sp = add("tau-crossing", _cmd_tau_crossing, "bisect nu where tau hits a target")
    sp.add_argument("--target", type=float, default=1.0)
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.add_argument("--nu-tol", type=float, default=1e-4)
    sp.add_argument("--output", default=None)
    sp.add_argument("--golden", action="store_true")

    sp = add("spectrum", _cmd_spectrum, "negative-eigenvalue census of the front operator")
    sp.add_argument("--nu", type=float, required=True)
    sp.add_argument("--epsilon", type=float, default=0.0)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--gamma", type=float, default=None)
    _add_front_options(sp)
    sp.add_argument("--output", default=None)

    sp = add("rank-one", _cmd_rank_one, "smallest eigenvalue of the rank-one-perturbed operator")
    sp.add_argument("--nu", type=float, required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--epsilon", type=float, default=0.0)
    _add_front_options(sp)
    sp.add_argument("--output", default=None)

    sp = add("evans", _cmd_evans, "rescaled Evans function curve for one front")
    sp.add_argument("--nu", type=float, required=True)
    sp.add_argument("--lambda-min", type=float, default=-2.0)
    sp.add_argument("--points", type=int, default=200)
    _add_front_options(sp)
    sp.add_argument("--output", default=None)
    sp.add_argument("--plot", action="store_true")

    sp = add("evans-scan", _cmd_evans_scan, "determinant at the origin over a nu range")
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.add_argument("--steps", type=int, default=21)
    sp.add_argument("--output", default=None)
    sp.add_argument("--plot", action="store_true")

    sp = add("nu-critical", _cmd_nu_critical, "bisect the critical dispersion")
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.add_argument("--nu-tol", type=float, default=1e-3)
    sp.add_argument("--output", default=None)
    sp.add_argument("--golden", action="store_true")

    sp = add("simulate", _cmd_simulate, "time-integrate the perturbation equation")
    sp.add_argument("--nu", type=float, required=True)
    sp.add_argument("--gamma", type=float, default=2.0)
    sp.add_argument("--T", type=float, default=50.0)
    sp.add_argument("--dt", type=float, default=None)
    sp.add_argument("--amplitude", type=float, default=0.1)
    sp.add_argument("--width", type=float, default=1.0)
    sp.add_argument("--center", type=float, default=0.0)
    sp.add_argument("--domain", type=float, default=None,
                    help="periodic half-width D (default 2x front half-length)")
    sp.add_argument("--points", type=int, default=4096)
    sp.add_argument("--sponge", type=float, default=1.0)
    sp.add_argument("--record-every", type=int, default=1)
    _add_front_options(sp)
    sp.add_argument("--output", default=None)
    sp.add_argument("--plot", action="store_true")

    sp = add("reproduce", _cmd_reproduce, "regenerate a canned figure data set")
    sp.add_argument("figure", choices=["tau-vs-nu", "evans-curves", "front-gallery"])
    sp.add_argument("--nu", type=float, default=1.0, help="front-gallery dispersion")
    sp.add_argument("--steps", type=int, default=41, help="tau-vs-nu scan resolution")
    sp.add_argument("--outdir", default=".")

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except GoldenMismatch as exc:
        _emit_error("GoldenMismatch", str(exc), command=args.command)
        return EXIT_GOLDEN
    except ConfigError as exc:
        _emit_error("ConfigError", str(exc), command=args.command, origin=_origin(exc))
        return EXIT_CONFIG
    except FrontlabError as exc:
        _emit_error(type(exc).__name__, str(exc), command=args.command, origin=_origin(exc))
        return EXIT_NUMERICAL


def _origin(exc: BaseException) -> str:
    tb = traceback.extract_tb(exc.__traceback__)
    if not tb:
        return ""
    return f"{Path(tb[-1].filename).stem}:{tb[-1].lineno}"


if __name__ == "__main__":
    sys.exit(main())
