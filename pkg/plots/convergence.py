#!/usr/bin/env python3
"""Log-scale error-vs-DoF convergence curves from harness results CSVs.

Consumes the documented results.csv contract (header
example,scheme,lambda,h,m,seed,...,l2_error,h1_error,...), draws one log-log
line per scheme (per h when several element sizes are present) of the chosen
metric's seed-median against the total number of degrees of freedom N_e * M,
and writes a PNG. Output is deterministic for identical input.

    python plots/convergence.py --csv results.csv --metric l2_error --out fig.png
"""

import argparse
import csv
import math
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

EXAMPLE_DIM = {"helmholtz1d": 1, "poisson2d": 2, "heat1d": 2}


def fail(msg: str) -> "NoReturn":  # noqa: F821
    print(f"error: {msg}", file=sys.stderr)
    raise SystemExit(1)


def read_rows(paths, metric):
    rows = []
    for path in paths:
        try:
            with open(path, newline="", encoding="utf-8") as fh:
                reader = csv.DictReader(fh)
                header = reader.fieldnames or []
                for col in ("example", "scheme", "h", "m", "seed", metric):
                    if col not in header:
                        fail(f"missing column {col!r} in {path}")
                rows.extend(reader)
        except OSError as exc:
            fail(str(exc))
    if not rows:
        fail("no rows in input CSV")
    return rows


def total_dof(example: str, h: float, m: int) -> int:
    try:
        dim = EXAMPLE_DIM[example]
    except KeyError:
        fail(f"unknown example {example!r}: cannot infer element count from h")
    return round(1.0 / h) ** dim * m


def median(values):
    vals = sorted(values)
    k = len(vals) // 2
    if len(vals) % 2:
        return vals[k]
    return 0.5 * (vals[k - 1] + vals[k])


def build_curves(rows, metric):
    cells = {}
    for row in rows:
        try:
            h = float(row["h"])
            m = int(row["m"])
            val = float(row[metric])
        except (TypeError, ValueError):
            fail(f"malformed row: {row}")
        if not math.isfinite(val):
            continue
        key = (row["scheme"], h, row["example"])
        cells.setdefault(key, {}).setdefault(m, []).append(val)
    multiple_h = len({h for _, h, _ in cells}) > 1
    curves = {}
    for (scheme, h, example), per_m in sorted(cells.items()):
        label = f"{scheme}, h={h:g}" if multiple_h else scheme
        pts = sorted((total_dof(example, h, m), median(vals))
                     for m, vals in per_m.items())
        curves[label] = pts
    if not curves:
        fail("no finite data rows to plot")
    return curves


def render(curves, metric, out_path):
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for label, pts in sorted(curves.items()):
        dof = [p[0] for p in pts]
        err = [p[1] for p in pts]
        ax.loglog(dof, err, marker="o", label=label)
    ax.set_xlabel("total degrees of freedom")
    ax.set_ylabel(metric)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=110)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--csv", action="append", required=True,
                        help="results CSV (repeatable)")
    parser.add_argument("--metric", default="l2_error",
                        choices=("l2_error", "h1_error"))
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    rows = read_rows(args.csv, args.metric)
    curves = build_curves(rows, args.metric)
    render(curves, args.metric, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
