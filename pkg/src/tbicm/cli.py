"""Command-line entry point: BER campaigns, EXIT analyses, complexity report.

Every command is reproducible from its config file alone; the effective
configuration is echoed into the CSV output as '#'-prefixed header lines.
"""

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import complexity, exit_analysis, scheduler
from .config import RunConfig, load_config
from .errors import TbicmError


def _resolve_workers(args, cfg):
    env = os.environ.get("SIM_WORKERS")
    if args.workers is not None:
        return args.workers
    if env is not None:
        return int(env)
    return cfg.workers


def _apply_overrides(args, cfg):
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.workers = _resolve_workers(args, cfg)
    if args.out is not None:
        cfg.out_path = args.out
    return cfg


def _write_csv(path, header_lines, columns, rows):
    with open(path, "w") as f:
        for line in header_lines:
            f.write(line + "\n")
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(str(v) for v in row) + "\n")


def _build_system(cfg, rotation_override=None):
    rotation = cfg.rotation_deg if rotation_override is None \
        else rotation_override
    return scheduler.LinkSystem(
        modulation_bits=cfg.modulation_bits,
        code_rate=cfg.code_rate,
        info_bits=cfg.info_bits,
        rotation_deg=rotation,
        erasure_p=cfg.erasure_p,
        channel_type=cfg.channel,
        block_len=cfg.block_len,
        sf=cfg.sf,
        case_mode=cfg.case_mode,
    )


def cmd_ber(args):
    cfg = _apply_overrides(args, load_config(args.config))
    system = _build_system(cfg)
    points = scheduler.run_ber_campaign(
        system, list(cfg.schedules), cfg.ebn0_grid(), seed=cfg.seed,
        max_frames=cfg.max_frames,
        target_frame_errors=cfg.target_frame_errors,
        workers=cfg.workers)
    rows = [(p.schedule, p.ebn0_db, p.frames_run, p.bit_errors,
             p.frame_errors, f"{p.ber:.6e}", f"{p.fer:.6e}")
            for p in points]
    _write_csv(cfg.out_path, cfg.header_lines(),
               ["schedule", "ebn0_db", "frames", "bit_errors",
                "frame_errors", "ber", "fer"], rows)
    print(f"wrote {len(rows)} BER points to {cfg.out_path}")
    return 0


def cmd_exit(args):
    cfg = _apply_overrides(args, load_config(args.config))
    ia_grid = np.linspace(0.0, 0.99, cfg.ia_points)
    variants = {"on": [True], "off": [False],
                "both": [True, False]}[cfg.rotation_variants]
    rows = []
    for rotated in variants:
        system = _build_system(cfg, rotation_override=None if rotated
                               else "off")
        for depth in cfg.demap_depths:
            label = f"{'rot' if rotated else 'norot'}_depth{depth}"
            curve = exit_analysis.decoder_transfer(
                system, cfg.exit_ebn0_db, ia_grid, demap_depth=depth,
                n_frames=cfg.exit_frames, seed=cfg.seed, label=label)
            for i, ia in enumerate(curve.ia):
                rows.append((label, int(rotated), depth, f"{ia:.4f}", 1,
                             f"{curve.ie_dec1[i]:.6f}"))
                rows.append((label, int(rotated), depth, f"{ia:.4f}", 2,
                             f"{curve.ie_dec2[i]:.6f}"))
    _write_csv(cfg.out_path, cfg.header_lines(),
               ["curve", "rotated", "demap_depth", "ia", "decoder", "ie"],
               rows)
    print(f"wrote {len(rows)} EXIT rows to {cfg.out_path}")
    return 0


def cmd_complexity(args):
    rates = tuple(Fraction(r.strip()) for r in args.rates.split(","))
    cases = tuple(c.strip() for c in args.cases.split(","))
    for c in cases:
        if c not in ("case1", "case2"):
            raise TbicmError(f"cases: unknown {c!r} (use case1/case2)")
    results = complexity.emit_gain_table(n_it=args.n_it, rates=rates,
                                         cases=cases)
    header = [f"# n_it = {args.n_it}",
              f"# rates = {args.rates}",
              f"# cases = {args.cases}"]
    rows = [(r.case_mode, str(r.code_rate), r.m,
             f"{100 * r.arith:.4f}", f"{100 * r.load:.4f}",
             f"{100 * r.store:.4f}") for r in results]
    out = args.out or "complexity.csv"
    _write_csv(out, header,
               ["case", "code_rate", "modulation_bits",
                "gain_arith_pct", "gain_load_pct", "gain_store_pct"], rows)

    print(f"Complexity saving of dropping 2 of {args.n_it} demapping "
          "iterations (percent):")
    print(f"{'case':6} {'rate':6} {'M':>2} {'arith':>8} {'load':>8} "
          f"{'store':>8}")
    for r in results:
        print(f"{r.case_mode:6} {str(r.code_rate):6} {r.m:2d} "
              f"{100 * r.arith:8.1f} {100 * r.load:8.1f} "
              f"{100 * r.store:8.1f}")
    print(f"wrote {len(rows)} gain cells to {out}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="tbicm",
        description="Link-level simulator for turbo-coded iterative "
                    "demapping with rotated constellations")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True,
                           help="path to key=value config file")
        p.add_argument("--out", default=None, help="output CSV path")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None,
                       help="worker processes (SIM_WORKERS env overrides "
                            "config)")

    p_ber = sub.add_parser("ber", help="Monte-Carlo BER/FER sweep")
    common(p_ber)
    p_ber.set_defaults(func=cmd_ber)

    p_exit = sub.add_parser("exit", help="extrinsic-information transfer "
                                         "curves")
    common(p_exit)
    p_exit.set_defaults(func=cmd_exit)

    p_cx = sub.add_parser("complexity", help="analytical complexity report")
    p_cx.add_argument("--n-it", type=int, default=6)
    p_cx.add_argument("--cases", default="case1,case2")
    p_cx.add_argument("--rates", default="1/2,6/7")
    p_cx.add_argument("--out", default=None)
    p_cx.set_defaults(func=cmd_complexity)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except TbicmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
