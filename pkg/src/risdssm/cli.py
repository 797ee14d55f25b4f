"""Command-line front end.

    risdssm simulate  --config cfg.txt [--detector optimal] [--system ssm]
    risdssm analyze   --config cfg.txt [--method series]
    risdssm compare   --config cfg.txt
    risdssm crossover --rho-db 10 20 30 --eta-bar 2 --sym-energy 1
    risdssm complexity --max-M 8 --max-N 8 --max-K 64

Output is CSV (or a JSON array with --json) on stdout or --out PATH.
Exit status: 0 success, 1 runtime failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import replace

from . import analysis
from .analysis import Method, abep_union_bound
from .config import ConfigError, SystemConfig, load_config, validate
from .detectors import DetectorKind, complexity_counts
from .montecarlo import AbepCurve, SystemKind, run_abep, run_detector_comparison

log = logging.getLogger("risdssm")

CURVE_COLUMNS = ["scenario_id", "system", "detector", "snr_db", "abep_sim", "errors", "trials",
                 "abep_bound_integral", "abep_bound_series", "abep_asymptotic", "low_confidence"]
CROSSOVER_COLUMNS = ["rho_db", "eta_bar", "sym_energy", "L_correct", "L_wrong",
                     "lhs_correct", "lhs_wrong", "min_L_beats_ssm_correct", "min_L_beats_ssm_wrong"]
COMPLEXITY_COLUMNS = ["M", "N", "K", "subopt_mults", "subopt_adds", "opt_mults", "opt_adds",
                      "mult_ratio"]


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return "" if math.isnan(x) else format(x, ".16e")
    return str(x)


def scenario_id(cfg: SystemConfig) -> str:
    return f"N{cfg.N}-M{cfg.M}-K{cfg.K}{cfg.modulation_kind.value}-L{cfg.L}"


def _bounds(cfg: SystemConfig, snr_db: float, methods) -> dict:
    rho = 10 ** (snr_db / 10)
    out = {}
    for col, method in methods:
        out[col] = abep_union_bound(cfg, rho, method, strict=False)
    return out


ALL_BOUND_COLUMNS = [("abep_bound_integral", Method.INTEGRAL),
                     ("abep_bound_series", Method.SERIES),
                     ("abep_asymptotic", Method.ASYMPTOTIC)]


def _curve_rows(cfg: SystemConfig, curve: AbepCurve, with_bounds: bool) -> list[dict]:
    rows = []
    for p in curve.points:
        row = dict(scenario_id=scenario_id(cfg), system=curve.system.value,
                   detector=curve.detector.value, snr_db=p.snr_db, abep_sim=p.abep,
                   errors=p.errors, trials=p.trials, low_confidence=p.low_confidence)
        if with_bounds:
            row.update(_bounds(cfg, p.snr_db, ALL_BOUND_COLUMNS))
        rows.append(row)
    return rows


def _emit(rows: list[dict], columns: list[str], args) -> None:
    if args.json:
        def clean(v):
            return None if isinstance(v, float) and math.isnan(v) else v
        text = json.dumps([{c: clean(r.get(c)) for c in columns} for r in rows], indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(r.get(c)) for c in columns])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args) -> SystemConfig:
    if not args.config:
        raise UsageError("--config is required for this command")
    cfg = load_config(args.config)
    changes = {}
    if args.seed is not None:
        changes["rng_seed"] = args.seed
    if args.trials is not None:
        changes["trials_per_snr"] = args.trials
    return validate(replace(cfg, **changes)) if changes else cfg


def cmd_simulate(args) -> None:
    cfg = _config(args)
    system = SystemKind(args.system)
    curve = run_abep(cfg, args.detector, system, threads=args.threads,
                     early_stop=10_000 if args.early_stop else None)
    _emit(_curve_rows(cfg, curve, system is SystemKind.RIS_DSSM), CURVE_COLUMNS, args)


def cmd_analyze(args) -> None:
    cfg = _config(args)
    method = args.method
    if method == "all":
        columns = ALL_BOUND_COLUMNS
    elif method == "bound":
        # the closed-form UPEP bound replaces the integral in the integral column
        columns = [("abep_bound_integral", Method.UPPER_BOUND)]
    else:
        columns = [c for c in ALL_BOUND_COLUMNS if c[1] is Method(method)]
    sid = scenario_id(cfg) + ("" if method == "all" else f":{method}")
    rows = []
    for snr in cfg.snr_grid_db:
        row = dict(scenario_id=sid, system=SystemKind.RIS_DSSM.value,
                   detector=DetectorKind.SUBOPTIMAL.value, snr_db=float(snr))
        row.update(_bounds(cfg, snr, columns))
        # a series that failed its convergence guard is flagged, not fatal
        row["low_confidence"] = any(isinstance(v, float) and math.isnan(v)
                                    for k, v in row.items() if k.startswith("abep_"))
        rows.append(row)
    _emit(rows, CURVE_COLUMNS, args)


def cmd_compare(args) -> None:
    cfg = _config(args)
    sub, opt = run_detector_comparison(cfg, threads=args.threads)
    ssm = run_abep(cfg, DetectorKind.SUBOPTIMAL, SystemKind.SSM, threads=args.threads)
    rows = (_curve_rows(cfg, sub, True) + _curve_rows(cfg, opt, True)
            + _curve_rows(cfg, ssm, False))
    _emit(rows, CURVE_COLUMNS, args)


def cmd_crossover(args) -> None:
    rows = []
    for rho_db in args.rho_db:
        rho = 10 ** (rho_db / 10)
        lc, lw = analysis.crossover_min_L(rho, args.eta_bar, args.sym_energy, args.scan_limit)
        bc, bw = analysis.min_L_outperforming_ssm(rho, args.eta_bar, args.sym_energy,
                                                  args.scan_limit)
        rows.append(dict(
            rho_db=float(rho_db), eta_bar=float(args.eta_bar), sym_energy=float(args.sym_energy),
            L_correct="none" if lc is None else lc, L_wrong="none" if lw is None else lw,
            lhs_correct=None if lc is None else analysis.crossover_lhs_correct(lc, rho, args.eta_bar),
            lhs_wrong=None if lw is None else analysis.crossover_lhs_wrong(lw, rho, args.sym_energy),
            min_L_beats_ssm_correct=bc, min_L_beats_ssm_wrong=bw))
    _emit(rows, CROSSOVER_COLUMNS, args)


def _powers(limit: int) -> list[int]:
    out, v = [], 2
    while v <= limit:
        out.append(v)
        v *= 2
    return out


def cmd_complexity(args) -> None:
    rows = []
    for M in _powers(args.max_M):
        for N in _powers(args.max_N):
            for K in _powers(args.max_K):
                sm, sa = complexity_counts(M, N, K, DetectorKind.SUBOPTIMAL)
                om, oa = complexity_counts(M, N, K, DetectorKind.OPTIMAL)
                rows.append(dict(M=M, N=N, K=K, subopt_mults=sm, subopt_adds=sa,
                                 opt_mults=om, opt_adds=oa, mult_ratio=om / sm))
    _emit(rows, COMPLEXITY_COLUMNS, args)


def build_parser() -> argparse.ArgumentParser:
    def globals_parser(suppress: bool) -> argparse.ArgumentParser:
        # subcommand copies must not overwrite values given before the command name
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--config", metavar="PATH", default=d(None))
        g.add_argument("--out", metavar="PATH", default=d(None))
        g.add_argument("--seed", type=int, metavar="U64", default=d(None))
        g.add_argument("--trials", type=int, metavar="N", default=d(None))
        g.add_argument("--threads", type=int, metavar="N", default=d(1))
        g.add_argument("--json", action="store_true", default=d(False),
                       help="emit a JSON array instead of CSV")
        g.add_argument("-v", "--verbose", action="store_true", default=d(False))
        return g

    common = globals_parser(True)
    p = argparse.ArgumentParser(prog="risdssm", description=__doc__.splitlines()[0],
                                parents=[globals_parser(False)])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo ABEP")
    s.add_argument("--detector", choices=[d.value for d in DetectorKind],
                   default=DetectorKind.SUBOPTIMAL.value)
    s.add_argument("--system", choices=[k.value for k in SystemKind],
                   default=SystemKind.RIS_DSSM.value)
    s.add_argument("--early-stop", action="store_true",
                   help="stop a point after 10^4 bit errors")
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("analyze", parents=[common], help="analytical ABEP union bound")
    a.add_argument("--method", choices=["all", "integral", "series", "asymptotic", "bound"],
                   default="all")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("compare", parents=[common],
                       help="both detectors, SSM baseline and analytical curves")
    c.set_defaults(func=cmd_compare)

    x = sub.add_parser("crossover", parents=[common], help="minimum-L report vs. SSM")
    x.add_argument("--rho-db", type=float, nargs="+", default=[10.0, 20.0, 30.0])
    x.add_argument("--eta-bar", type=float, default=2.0)
    x.add_argument("--sym-energy", type=float, default=1.0)
    x.add_argument("--scan-limit", type=int, default=analysis.bounds.DEFAULT_SCAN_LIMIT)
    x.set_defaults(func=cmd_crossover)

    k = sub.add_parser("complexity", parents=[common], help="detector operation counts")
    k.add_argument("--max-M", type=int, default=8)
    k.add_argument("--max-N", type=int, default=8)
    k.add_argument("--max-K", type=int, default=64)
    k.set_defaults(func=cmd_complexity)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        args.func(args)
    except (ConfigError, UsageError, FileNotFoundError) as exc:
        print(f"risdssm: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.debug("failure", exc_info=True)
        print(f"risdssm: failed: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
