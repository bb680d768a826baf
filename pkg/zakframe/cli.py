# zakframe/cli.py
"""
Command-line front end.

    python -m zakframe constants   WINDOW [--grid N] [--tol T] [--mode raw|certified] [--profile-csv F]
    python -m zakframe complexity  WINDOW --alpha A --beta B --eps E [--override-K/q/C/R/Kprime X]
    python -m zakframe certify     WINDOW (--points "x1,..." | --sample M --seed S) [--alpha] [--beta]
    python -m zakframe montecarlo  WINDOW --m M --trials T --eps E [--alpha] [--beta] --seed S [--mode]
    python -m zakframe reconstruct WINDOW (--sample M --seed S | --points ...) [--signal F] [--strict]
    python -m zakframe zak         WINDOW [--shift X] [--nt N] [--nxi N] [--csv F]

Exit codes: 0 ok, 1 usage/parse/validation, 2 assumption or hypothesis
violation, 3 numerical infeasibility.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from .config import NumericsConfig, load_config, use_config
from .constants import (HEURISTIC_C_WARNING, WindowConstants, assemble_constants,
                        constants_from_values, periodization_sq)
from .errors import EXIT_OK, EXIT_USAGE, AssumptionViolation, SpecValidationError, ZakFrameError
from .frame import (PointSet, certify_frame, frame_operator_apply, parseval_gap, reconstruct,
                    relative_error)
from .grammar import parse_window
from .montecarlo import TRIAL_CSV_HEADER, MonteCarloConfig, doubling_scan, run_trials
from .report import RunReport
from .state import read_columns, save_report, write_csv
from .theory import ComplexityQuery, failure_probability_bounds, mesh_width, sample_complexity
from .types import CONSTANT_MODES, EVENT_MODE_KEYS
from .windows import WindowSpec
from .zak import SignalGrid, zak_grid

log = logging.getLogger("zakframe")

LOG_FORMAT = "[%(name)s] %(message)s"

# default random signal for `reconstruct`
SIGNAL_HALF_WIDTH = 4
SIGNAL_NT = 32

_OVERRIDES = ("K", "Kprime", "q", "R", "C")


class UsageError(SpecValidationError):
    """Raised in place of argparse's own exit on bad usage."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


# ------------------------------------------------------------------------------
# Commands
# ------------------------------------------------------------------------------
def cmd_constants(args: argparse.Namespace, cfg: NumericsConfig, report: RunReport) -> None:
    spec = parse_window(args.window)
    wc = assemble_constants(spec, cfg)
    delta, points = mesh_width(wc)
    report.outputs["constants"] = wc.to_dict()
    report.outputs["mesh"] = {"delta": delta, "mesh_points": points}
    _heuristic_c_warning(wc, report)
    if args.profile_csv:
        prof = periodization_sq(spec, "frequency", cfg.constants_grid, cfg.zak_tol)
        write_csv(args.profile_csv, ["xi", "phi"], ([repr(x), repr(p)] for x, p in prof.csv_rows()))


def cmd_complexity(args: argparse.Namespace, cfg: NumericsConfig, report: RunReport) -> None:
    spec = parse_window(args.window)
    wc = _constants_for(spec, cfg, args, report)
    result = sample_complexity(ComplexityQuery(wc, args.alpha, args.beta, args.eps))
    bounds = failure_probability_bounds(wc, args.alpha, args.beta, result.m_threshold)
    report.outputs["constants"] = wc.to_dict()
    report.outputs["complexity"] = result.to_dict()
    report.outputs["failure_bounds_at_threshold"] = bounds.to_dict()


def cmd_certify(args: argparse.Namespace, cfg: NumericsConfig, report: RunReport) -> None:
    spec = parse_window(args.window)
    pts = _point_set(args)
    try:
        wc: Optional[WindowConstants] = _constants_for(spec, cfg, args, report)
    except AssumptionViolation as e:
        if e.assumption != 3:
            raise
        report.warn(f"{e}; falling back to a grid-only verdict")
        wc = None
    cert = certify_frame(spec, pts, wc, args.alpha, args.beta, cfg, keep_grid=bool(args.grid_csv))
    report.outputs["certificate"] = cert.to_dict()
    if args.grid_csv:
        write_csv(args.grid_csv, None, ([repr(float(v)) for v in row] for row in cert.grid))


def cmd_montecarlo(args: argparse.Namespace, cfg: NumericsConfig, report: RunReport) -> None:
    spec = parse_window(args.window)
    wc = None
    if args.mode == "certified_event" or _has_overrides(args):
        wc = _constants_for(spec, cfg, args, report)
    grid = args.grid if args.mode == "raw_grid_event" else None
    mc = MonteCarloConfig(spec=spec, constants=wc, alpha=args.alpha, beta=args.beta, eps=args.eps,
                          m=args.m, trials=args.trials, master_seed=args.seed, Nt=grid, Nxi=grid,
                          mode=args.mode, tol=cfg.zak_tol, workers=cfg.workers)
    if args.scan is not None:
        scan = doubling_scan(mc, args.m, args.scan, cfg)
        report.outputs["scan"] = {
            "m_found": scan.m_found,
            "runs": [{"m": r.config.m, "empirical_success": r.empirical_success,
                      "lower_success": r.lower_success, "upper_success": r.upper_success}
                     for r in scan.reports],
        }
        result = scan.reports[-1]
    else:
        result = run_trials(mc, cfg)
    report.outputs["montecarlo"] = result.to_dict()
    for w in result.warnings:
        report.warn(w)
    if args.trials_csv:
        write_csv(args.trials_csv, TRIAL_CSV_HEADER, (r.csv_row() for r in result.records))


def cmd_reconstruct(args: argparse.Namespace, cfg: NumericsConfig, report: RunReport) -> None:
    spec = parse_window(args.window)
    pts = _point_set(args)
    wc = _constants_for(spec, cfg, args, report)
    f = _load_signal(args.signal, args.nt) if args.signal else _random_signal(args)
    cert = certify_frame(spec, pts, wc, None, None, cfg) if args.strict else None

    Sf = frame_operator_apply(f, spec, pts, cfg.zak_tol, cfg.workers)
    rec = reconstruct(Sf, spec, pts, wc, cert, cfg.zak_tol, cfg.workers)
    err = relative_error(rec, f)
    gap = parseval_gap(f, spec, pts, cfg.zak_tol)
    report.outputs["reconstruction"] = {
        "relative_error": err,
        "parseval_gap": gap,
        "signal": {"Nt": f.Nt, "L_sig": f.L_sig, "energy": f.energy},
        "frame_operator_support": Sf.L_sig,
        "points": pts.to_dict(),
        "certificate": None if cert is None else cert.to_dict(),
    }
    if args.signal_out:
        out = rec.padded(max(rec.L_sig, f.L_sig))
        write_csv(args.signal_out, ["t", "value"],
                  ([repr(float(t)), repr(complex(v)) if np.iscomplexobj(out.samples) else repr(float(v))]
                   for t, v in zip(out.t, out.samples)))


def cmd_zak(args: argparse.Namespace, cfg: NumericsConfig, report: RunReport) -> None:
    spec = parse_window(args.window)
    grid = zak_grid(spec, args.shift, args.nt, args.nxi, cfg.zak_tol)
    mod = np.abs(grid.values)
    report.outputs["zak"] = {
        "Nt": grid.Nt, "Nxi": grid.Nxi, "shift": grid.time_shift,
        "truncation_radius": grid.truncation_radius, "truncation_error": grid.truncation_error,
        "min_modulus": float(mod.min()), "max_modulus": float(mod.max()),
    }
    if args.csv:
        write_csv(args.csv, None, grid.csv_rows())


COMMANDS: Dict[str, Callable[[argparse.Namespace, NumericsConfig, RunReport], None]] = {
    "constants": cmd_constants,
    "complexity": cmd_complexity,
    "certify": cmd_certify,
    "montecarlo": cmd_montecarlo,
    "reconstruct": cmd_reconstruct,
    "zak": cmd_zak,
}


# ------------------------------------------------------------------------------
# Entry point
# ------------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON config file (default: $GABOR_RP_CONFIG)")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("-q", "--quiet", action="store_true")
    common.add_argument("--tol", type=float, help="series truncation tolerance")
    common.add_argument("--workers", type=int, help="threads for accumulating G")

    parser = _Parser(prog="zakframe", description="Random-periodic Gabor frames via the Zak transform")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", parents=[common], help="estimate K, K', q, R, C")
    p.add_argument("window")
    p.add_argument("--grid", type=int, help="1-D constants grid size")
    p.add_argument("--mode", choices=CONSTANT_MODES)
    p.add_argument("--profile-csv", help="write the periodization profile (xi,phi)")

    p = sub.add_parser("complexity", parents=[common], help="sample-complexity threshold")
    p.add_argument("window")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    _add_constant_flags(p)

    p = sub.add_parser("certify", parents=[common], help="frame certificate for a point set")
    p.add_argument("window")
    _add_point_flags(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--grid-csv", help="write G on the certificate grid")
    _add_constant_flags(p)

    p = sub.add_parser("montecarlo", parents=[common], help="empirical event probability")
    p.add_argument("window")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=1.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=EVENT_MODE_KEYS, default="raw_grid_event")
    p.add_argument("--grid", type=int, help="raw-mode grid size (Nt = Nxi)")
    p.add_argument("--trials-csv", help="write per-trial records")
    p.add_argument("--scan", type=int, metavar="MMAX", help="double m until success >= 1-eps or m > MMAX")
    _add_constant_flags(p)

    p = sub.add_parser("reconstruct", parents=[common], help="frame operator round trip")
    p.add_argument("window")
    _add_point_flags(p)
    p.add_argument("--signal", help="signal file: t,value rows, or one value per line with --nt")
    p.add_argument("--signal-seed", type=int, help="seed of the default random signal (default: --seed)")
    p.add_argument("--nt", type=int, default=SIGNAL_NT, help="samples per unit length")
    p.add_argument("--strict", action="store_true", help="refuse unless the certificate has A_cert > 0")
    p.add_argument("--signal-out", help="write the reconstruction (t,value)")
    _add_constant_flags(p)

    p = sub.add_parser("zak", parents=[common], help="export a Zak transform grid")
    p.add_argument("window")
    p.add_argument("--shift", type=float, default=0.0)
    p.add_argument("--nt", type=int, default=64)
    p.add_argument("--nxi", type=int, default=64)
    p.add_argument("--csv", help="write the grid (rows t, columns xi, cells re,im)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:          # --help
        return int(e.code or 0)

    _setup_logging(args.verbose, args.quiet)
    report = RunReport(command=args.command, inputs=_echo_inputs(args))
    code = EXIT_OK
    try:
        cfg = load_config(args.config).with_overrides(
            zak_tol=args.tol, workers=args.workers,
            constants_grid=getattr(args, "grid", None) if args.command == "constants" else None,
            mode=getattr(args, "mode", None) if args.command == "constants" else None,
        )
        report.inputs["config"] = cfg.as_dict()
        with use_config(cfg):
            COMMANDS[args.command](args, cfg, report)
    except ZakFrameError as e:
        code = e.exit_code
        report.outputs["error"] = {"type": type(e).__name__, "message": str(e), "exit_code": code}
        log.error("%s", e)
    report.outputs["exit_code"] = code

    if args.out:
        save_report(report.to_dict(), args.out)
    else:
        sys.stdout.write(report.to_json())
    return code


# ------------------------------------------------------------------------------
# Internals
# ------------------------------------------------------------------------------
_handler: Optional[logging.Handler] = None


def _setup_logging(verbose: int, quiet: bool) -> None:
    global _handler
    if _handler is not None:
        log.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT))
    log.addHandler(_handler)
    if quiet:
        log.setLevel(logging.ERROR)
    else:
        log.setLevel({0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG))


def _add_point_flags(p: argparse.ArgumentParser) -> None:
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--points", help='comma-separated translates in [0,1), e.g. "0,0.5"')
    grp.add_argument("--sample", type=int, metavar="M", help="draw M uniform translates")
    p.add_argument("--seed", type=int, default=0, help="master seed for --sample")


def _add_constant_flags(p: argparse.ArgumentParser) -> None:
    for name in _OVERRIDES:
        p.add_argument(f"--override-{name}", dest=f"override_{name}", type=float, metavar="X")


def _has_overrides(args: argparse.Namespace) -> bool:
    return any(getattr(args, f"override_{n}", None) is not None for n in _OVERRIDES)


def _constants_for(spec: WindowSpec, cfg: NumericsConfig, args: argparse.Namespace,
                   report: RunReport) -> WindowConstants:
    ov = {n: getattr(args, f"override_{n}", None) for n in _OVERRIDES}
    if all(ov[n] is not None for n in ("K", "q", "C")):
        # nothing left to estimate for the theorem quantities
        return constants_from_values(ov["K"], ov["q"], ov["C"], ov["R"], ov["Kprime"], spec_id=spec.spec_id)
    wc = assemble_constants(spec, cfg, ov)
    _heuristic_c_warning(wc, report)
    return wc


def _heuristic_c_warning(wc: WindowConstants, report: RunReport) -> None:
    if wc.heuristic_C and wc.mode == "certified":
        report.warn(HEURISTIC_C_WARNING)


def _point_set(args: argparse.Namespace) -> PointSet:
    if args.points is not None:
        try:
            values = [float(v) for v in args.points.replace(" ", "").split(",") if v]
        except ValueError as e:
            raise UsageError(f"--points must be comma-separated numbers, got {args.points!r}") from e
        return PointSet.explicit(values)
    return PointSet.sampled(args.sample, args.seed, 0)


def _random_signal(args: argparse.Namespace) -> SignalGrid:
    seed = args.signal_seed if args.signal_seed is not None else args.seed
    n = 2 * SIGNAL_HALF_WIDTH * args.nt
    rng = np.random.Generator(np.random.Philox(key=seed))
    return SignalGrid(rng.standard_normal(n), args.nt, SIGNAL_HALF_WIDTH)


def _load_signal(path: str, nt: int) -> SignalGrid:
    rows = read_columns(Path(path))
    if not rows:
        raise SpecValidationError(f"signal file {path} holds no samples")
    if all(len(r) == 2 for r in rows):
        t = np.array([float(r[0]) for r in rows])
        vals = np.array([complex(r[1].replace("i", "j")) for r in rows])
        step = (t[-1] - t[0]) / (len(t) - 1) if len(t) > 1 else 0.0
        if not step > 0:
            raise SpecValidationError("signal t column must increase")
        nt = int(round(1.0 / step))
        L_sig = int(round(-t[0]))
        if abs(nt * step - 1.0) > 1e-9 or abs(t[0] + L_sig) > 1e-9:
            raise SpecValidationError("signal t column must be -L, -L + 1/Nt, ... with integer L and Nt")
    elif all(len(r) == 1 for r in rows):
        vals = np.array([complex(r[0].replace("i", "j")) for r in rows])
        if len(vals) % (2 * nt):
            raise SpecValidationError(f"{len(vals)} samples do not fill [-L, L) at Nt={nt}")
        L_sig = len(vals) // (2 * nt)
    else:
        raise SpecValidationError(f"signal file {path} must have one or two columns per line")
    if not np.any(vals.imag):
        vals = vals.real
    return SignalGrid(vals, nt, L_sig)


def _echo_inputs(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"out", "verbose", "quiet"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}
