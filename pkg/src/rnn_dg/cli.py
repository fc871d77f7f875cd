"""Command-line interface.

    rnn-dg-solve run       --config cfg.json --out outdir [--threads N] [--seed-override K]
    rnn-dg-solve table     --which 1..10     --out outdir [--threads N] [--seed-override K]
    rnn-dg-solve dump-grid --config cfg.json --out grid.csv [--resolution R] [--field F]

Exit codes: 0 on success (solver failures are flagged in-row), 2 on config
errors.
"""

from __future__ import annotations

import argparse
import sys

from .harness import ConfigError, dump_grid, load_config, run_table, run_to_dir


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rnn-dg-solve",
        description="Randomized-neural-network / discontinuous-Galerkin PDE solver harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config and write CSVs")
    p_run.add_argument("--config", required=True, help="JSON experiment config")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--threads", type=int, default=1)
    p_run.add_argument("--seed-override", type=int, default=None)

    p_table = sub.add_parser("table", help="run a built-in table sweep (1..10)")
    p_table.add_argument("--which", type=int, required=True)
    p_table.add_argument("--out", required=True)
    p_table.add_argument("--threads", type=int, default=1)
    p_table.add_argument("--seed-override", type=int, default=None)

    p_dump = sub.add_parser("dump-grid", help="solve one cell and dump an evaluation grid CSV")
    p_dump.add_argument("--config", required=True)
    p_dump.add_argument("--out", required=True, help="output CSV path")
    p_dump.add_argument("--resolution", type=int, default=101)
    p_dump.add_argument("--field", default="abs_error",
                        choices=("abs_error", "solution", "exact"))
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config)
            if args.seed_override is not None:
                cfg.seeds = [args.seed_override]
            run_to_dir(cfg, args.out, threads=args.threads)
        elif args.command == "table":
            run_table(args.which, args.out, threads=args.threads,
                      seed_override=args.seed_override)
        elif args.command == "dump-grid":
            cfg = load_config(args.config)
            dump_grid(cfg, args.out, resolution=args.resolution,
                      field_name=args.field)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
