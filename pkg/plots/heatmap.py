#!/usr/bin/env python3
"""Pointwise heatmap from a solution-dump grid CSV.

Input: three columns, header `<coord0>,<coord1>,<value>` (e.g. x,y,abs_error
or t,x,abs_error as written by `rnn-dg-solve dump-grid`), one row per grid
point of a structured rectangular grid. Writes a PNG; deterministic for
identical input.

    python plots/heatmap.py --grid grid.csv --out fig.png
"""

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def fail(msg: str):
    print(f"error: {msg}", file=sys.stderr)
    raise SystemExit(1)


def read_grid(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if not header or len(header) != 3:
                fail("grid file needs exactly three columns: coord0,coord1,value")
            rows = []
            for line in reader:
                if len(line) != 3:
                    fail(f"malformed grid row: {line}")
                try:
                    rows.append((float(line[0]), float(line[1]), float(line[2])))
                except ValueError:
                    fail(f"non-numeric grid row: {line}")
    except OSError as exc:
        fail(str(exc))
    if not rows:
        fail("no rows in grid file")
    return header, np.array(rows)


def pivot(points):
    c0 = np.unique(points[:, 0])
    c1 = np.unique(points[:, 1])
    z = np.full((len(c0), len(c1)), np.nan)
    i0 = np.searchsorted(c0, points[:, 0])
    i1 = np.searchsorted(c1, points[:, 1])
    z[i0, i1] = points[:, 2]
    return c0, c1, z


def render(header, c0, c1, z, out_path):
    fig, ax = plt.subplots(figsize=(5.4, 4.4))
    # transpose so coord0 runs along the horizontal axis
    im = ax.imshow(
        z.T, origin="lower", aspect="auto",
        extent=(c0[0], c0[-1], c1[0], c1[-1]) if len(c0) > 1 and len(c1) > 1 else None,
    )
    ax.set_xlabel(header[0])
    ax.set_ylabel(header[1])
    fig.colorbar(im, ax=ax, label=header[2])
    fig.tight_layout()
    fig.savefig(out_path, dpi=110)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--grid", required=True, help="grid CSV path")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    header, points = read_grid(args.grid)
    c0, c1, z = pivot(points)
    render(header, c0, c1, z, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
