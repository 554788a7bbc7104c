"""Command-line interface for scans, sweeps, ellipsoids and bounds."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import scenario
from .errors import SteershareError
from .steering import StrengthHistory, classical_bound, closed_form_local, \
    closed_form_nonlocal


def _parse_fix(items: list[str]) -> dict[str, float]:
    fixed = {}
    for item in items:
        name, _, value = item.partition("=")
        if not value:
            raise SystemExit(f"--fix expects NAME=VAL, got {item!r}")
        fixed[name] = float(value)
    return fixed


def cmd_demo(_args) -> None:
    c2 = scenario.SQRT_HALF
    print(f"two-setting classical bound C2 = {c2:.6f}")

    results = scenario.run_scenario(scenario.make_config("nonlocal", [0.5, 0.8]))
    local = scenario.run_scenario(scenario.make_config("local", [0.5, 0.8]))
    print(f"lambda(1)=0.5, lambda(2)=0.8:  S2(2) = {results[1].steering_value:.4f}"
          f"  (local S~2(2) = {local[1].steering_value:.4f})")

    h = StrengthHistory.nonlocal_history([(0.4, 0.4), (0.8, 0.8), (0.95, 0.95)])
    hl = StrengthHistory.local_sqrt([(0.4, 0.4), (0.8, 0.8), (0.95, 0.95)])
    print("lambda = 0.4 / 0.8 / 0.95:  "
          f"S2(2) = {closed_form_nonlocal(h, 2):.4f}, "
          f"S2(3) = {closed_form_nonlocal(h, 3):.4f}, "
          f"S~2(2) = {closed_form_local(hl, 2):.4f}, "
          f"S~2(3) = {closed_form_local(hl, 3):.4f}")

    for case in ("unequal_local", "equal_nonlocal", "unequal_nonlocal"):
        lo, hi = scenario.simultaneous_window(case)
        print(f"simultaneous steering window, {case}: ({lo:.4f}, {hi:.4f})")

    series = scenario.ellipsoid_series([(scenario.SQRT_HALF, l2)
                                        for l2 in (0.75, 0.85, 0.95)])
    axes = [max(r.charlie.semiaxes) for r in series]
    print(f"constant Charlie semiaxis at lambda1(1)=1/sqrt(2): "
          f"{axes[0]:.4f} (spread {max(axes) - min(axes):.2e} over lambda2)")

    best = scenario.max_simultaneous_pairs(resolution=200)
    print(f"max pairs sharing steering simultaneously (grid 200x200): {best}")


def cmd_scan(args) -> None:
    records = scenario.scan_region(pairs=args.pairs, resolution=args.grid,
                                   mode=args.mode)
    scenario.save_records(records, "scan", args.out)
    print(f"wrote {len(records)} rows to {args.out}")


def cmd_sweep(args) -> None:
    records = scenario.sweep_curve(_parse_fix(args.fix), args.vary, args.from_,
                                   args.to, args.samples, pairs=args.pairs,
                                   mode=args.mode)
    scenario.save_records(records, "sweep", args.out)
    print(f"wrote {len(records)} rows to {args.out}")


def cmd_ellipsoids(args) -> None:
    records = scenario.ellipsoid_series([(args.lambda1, args.lambda2)])
    scenario.save_ellipsoids(records, args.out)
    r = records[0]
    print(f"Charlie semiaxes: {np.round(r.charlie.semiaxes, 6).tolist()}, "
          f"volume {r.charlie.volume:.6f} -> {args.out}")


def cmd_bound(args) -> None:
    labels = [s.strip() for s in args.settings.split(",")]
    ops = [scenario.charlie_operator(lbl) for lbl in labels]
    print(f"{classical_bound(ops):.12f}")


def cmd_run(args) -> None:
    with open(args.config) as fh:
        cfg = scenario.ScenarioConfig.from_json(json.load(fh))
    results = scenario.run_scenario(cfg)
    payload = []
    for r in results:
        payload.append({
            "pair": r.pair,
            "steering_value": r.steering_value,
            "state": r.state.to_json(),
            "charlie_ellipsoid":
                r.charlie_ellipsoid.to_json() if r.charlie_ellipsoid else None,
            "ab_ellipsoid":
                r.ab_ellipsoid.to_json() if r.ab_ellipsoid else None,
        })
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    for r in results:
        marker = ">" if r.steering_value > scenario.SQRT_HALF else "<="
        print(f"pair {r.pair}: S = {r.steering_value:.6f} {marker} C2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steershare",
        description="Sequential unsharp-measurement steering-sharing simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo", help="print the headline scenario numbers")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("scan", help="equal-strength region scan to CSV")
    p.add_argument("--pairs", type=int, default=3)
    p.add_argument("--mode", choices=("nonlocal", "local", "compare"),
                   default="compare")
    p.add_argument("--grid", type=int, default=400)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sweep", help="sweep one strength parameter to CSV")
    p.add_argument("--fix", action="append", default=[], metavar="NAME=VAL")
    p.add_argument("--vary", required=True)
    p.add_argument("--from", dest="from_", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--pairs", type=int, default=2)
    p.add_argument("--mode", choices=("nonlocal", "local", "compare"),
                   default="compare")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ellipsoids", help="post-pair-1 steering ellipsoids to JSON")
    p.add_argument("--lambda1", type=float, required=True)
    p.add_argument("--lambda2", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ellipsoids)

    p = sub.add_parser("bound", help="classical bound for Charlie's settings")
    p.add_argument("--settings", required=True, metavar="x,y[,z]")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("run", help="run a scenario config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except SteershareError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
