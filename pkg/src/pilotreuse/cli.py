"""Command-line front end.

Exit codes: 0 success, 1 reproduction/verification mismatch, 2 invalid
configuration or empty range, 3 non-positive coherence time.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import warnings
from fractions import Fraction

from . import reproduce as rep
from .channel import DepthRates
from .errors import PilotReuseError
from .kernels import BACKEND
from .scenario import (
    SWEEP_SCHEMA_VERSION,
    ConfigError,
    ScenarioConfig,
    dump_record,
    parse_range,
    rates_record,
    resolve_rates,
    row_values,
    solve,
    sweep,
    sweep_columns,
    with_overrides,
)

EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3

log = logging.getLogger("pilotreuse")


def _linear(text: str | None):
    if text is None:
        return None
    try:
        c0, slope = (Fraction(x.strip()) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"--linear-rates expects c0,slope, got {text!r}") from None
    return c0, slope


def _scenario(args) -> ScenarioConfig:
    scn = ScenarioConfig.load(args.config) if args.config else ScenarioConfig()
    return with_overrides(scn, seed=args.seed, trials=args.trials)


def _rates(args, scn: ScenarioConfig) -> DepthRates:
    return resolve_rates(scn, _linear(args.linear_rates), args.cache_dir, args.workers)


def _emit_json(obj) -> None:
    json.dump(obj, sys.stdout, indent=1, sort_keys=True, default=str)
    sys.stdout.write("\n")


def _emit_csv(columns, rows) -> None:
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([json.dumps(v) if isinstance(v, list) else v for v in r])


def _provenance(scn: ScenarioConfig, rates: DepthRates) -> dict:
    return {"config_hash": scn.digest(), "config": scn.to_dict(), "rates": dict(rates.provenance),
            "kernel_backend": BACKEND}


def cmd_rates(args) -> int:
    scn = _scenario(args)
    rates = _rates(args, scn)
    if args.linear_rates is not None:
        rec = {"kind": "linear-model", "rates": [str(c) for c in rates]}
        if args.format == "json":
            _emit_json(rec)
        else:
            for i, c in enumerate(rates):
                print(f"C_{i} = {float(c):.6f}")
        return 0
    rec = rates_record(rates, scn)
    if args.format == "json":
        sys.stdout.write(dump_record(rec))
    elif args.format == "csv":
        _emit_csv(["depth", "mean", "std_error"],
                  [[d["depth"], d["mean"], d["std_error"]] for d in rec["depths"]])
    else:
        for d in rec["depths"]:
            print(f"C_{d['depth']} = {d['mean']:.6f} +/- {d['std_error']:.6f}")
        inc = rates.increments
        print("increments: " + ", ".join(f"{x:.4f}" for x in inc))
    return 0


def _check_ncoh(values) -> int | None:
    bad = [v for v in values if not v > 0]
    if bad:
        print(f"error: normalized coherence time must be positive, got {bad[0]}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return None


def _solver(args, scn):
    if args.groups == "2" and scn.n_groups != 2:
        raise ConfigError(f"--groups 2 needs a two-group config, got {scn.n_groups} groups")
    return args.groups


def cmd_optimize(args) -> int:
    scn = _scenario(args)
    if args.ncoh is None:
        raise ConfigError("optimize needs --ncoh")
    try:
        n = Fraction(args.ncoh)
    except ValueError:
        raise ConfigError(f"--ncoh must be a number, got {args.ncoh!r}") from None
    code = _check_ncoh([n])
    if code:
        return code
    solver = _solver(args, scn)
    rates = _rates(args, scn)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sol = solve(scn, n, rates, solver, args.linear_greedy)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    rec = sol.to_record()
    rec["provenance"] = _provenance(scn, rates)
    _emit_json(rec)
    return 0


def cmd_sweep(args) -> int:
    scn = _scenario(args)
    text = args.ncoh_range or scn.ncoh_range
    if text is None:
        raise ConfigError("sweep needs --ncoh-range a:b:step (or ncoh_range in the config)")
    values = parse_range(text)
    code = _check_ncoh(values)
    if code:
        return code
    solver = _solver(args, scn)
    rates = _rates(args, scn)
    rows = sweep(scn, rates, values, solver, args.linear_greedy)
    cols = sweep_columns(len(rows[0].lengths))
    if args.format == "json":
        _emit_json({
            "schema_version": SWEEP_SCHEMA_VERSION,
            "columns": cols,
            "rows": [row_values(r, scn.K) for r in rows],
            "provenance": _provenance(scn, rates),
        })
    else:
        _emit_csv(cols, [row_values(r, scn.K) for r in rows])
    return 0


def _print_outcome(out: rep.Outcome, fmt: str | None) -> None:
    if fmt == "json":
        _emit_json({
            "target": out.target,
            "ok": out.ok,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in out.checks],
            "columns": out.columns,
            "rows": out.rows,
            "summary": out.summary,
        })
        return
    if fmt == "csv":
        _emit_csv(out.columns, out.rows)
    else:
        for r in out.rows:
            print("  ".join(str(v) for v in r))
    for c in out.checks:
        line = f"{'PASS' if c.ok else 'FAIL'}  {c.name}" + (f": {c.detail}" if c.detail else "")
        print(line, file=sys.stderr)


def cmd_reproduce(args) -> int:
    target = args.target
    base = _scenario(args)
    linear = _linear(args.linear_rates)

    def rates_for(L):
        return resolve_rates(_at(base, L), linear, args.cache_dir, args.workers)

    if target == "table4":
        out = rep.table4()
    elif target == "table3":
        out = rep.table3(rates_for(81))
    elif target == "fig3":
        out = rep.fig3(rates_for(81))
    elif target == "fig4":
        out = rep.fig4(rates_for(81))
    else:
        out = rep.fig5(rates_for(27))
    _print_outcome(out, args.format)
    return 0 if out.ok else EXIT_MISMATCH


def _at(scn: ScenarioConfig, L: int) -> ScenarioConfig:
    # rates only depend on the channel part; keep a trivially valid grouping
    return ScenarioConfig(L=L, K=10, gamma=scn.gamma, trials=scn.trials, seed=scn.seed,
                          hole_ratio=scn.hole_ratio, cell_radius=scn.cell_radius,
                          power_control=scn.power_control)


def cmd_verify(args) -> int:
    c0, slope = _linear(args.linear_rates) or (Fraction(4), Fraction(6))
    out = rep.verify(args.scale, c0, slope)
    fmt = args.format or "json"
    if fmt == "json":
        _emit_json({"ok": out.ok, **out.summary,
                    "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in out.checks]})
    else:
        _emit_csv(["check", "ok", "detail"], [[c.name, c.ok, c.detail] for c in out.checks])
    return 0 if out.ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario JSON file")
    common.add_argument("--seed", type=int, help="Monte-Carlo seed (unsigned 64-bit)")
    common.add_argument("--trials", type=int, help="Monte-Carlo trials per depth")
    common.add_argument("--linear-rates", metavar="C0,SLOPE",
                        help="use the exact model C_i = C0 + SLOPE*i instead of Monte Carlo")
    common.add_argument("--cache-dir", help="directory for cached rate tables")
    common.add_argument("--workers", type=int, default=1, help="threads for rate estimation")
    common.add_argument("--format", choices=["json", "csv"], help="output format")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="pilotreuse",
                                description="Priority-weighted pilot reuse optimizer for massive MIMO.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("rates", parents=[common], help="estimate (or load) per-depth rates")

    for name, helptext in (("optimize", "optimal assignment for one N_coh"),
                           ("sweep", "optimal vs conventional over an N_coh range")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--ncoh", help="normalized coherence time (may be a fraction)")
        sp.add_argument("--ncoh-range", metavar="A:B:STEP")
        sp.add_argument("--groups", choices=["auto", "2", "n"], default="auto",
                        help="two-group closed form or n-group greedy (default: by config)")
        sp.add_argument("--linear-greedy", action="store_true",
                        help="n-group greedy compares omega_i 3^-d_i only")

    sp = sub.add_parser("reproduce", parents=[common], help="reproduce a published table or figure")
    sp.add_argument("target", choices=["table3", "table4", "fig3", "fig4", "fig5"])

    sp = sub.add_parser("verify", parents=[common], help="certify closed forms by brute force")
    sp.add_argument("--scale", choices=["small", "full-small-grid"], default="small")
    return p


COMMANDS = {
    "rates": cmd_rates,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "reproduce": cmd_reproduce,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except PilotReuseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
