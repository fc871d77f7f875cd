"""Secondary acceptance: convergence plot on a table-1-shaped CSV.

Must produce an image, be pixel-deterministic across two runs, and finish
within 10 seconds.  Runs against the documented CSV contract only; no
in-process coupling to the solver package.
"""

import hashlib
import subprocess
import sys
import time
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parent.parent

HEADER = (
    "example,scheme,lambda,h,m,seed,w0,eta_e,l2_error,h1_error,"
    "effective_rank,residual_norm,solver_path,wall_ms"
)

# table-1 grid shape: lambda in {10, 1}, h in {2^-2, 2^-3, 2^-4}, 8 M values,
# 5 seeds; error magnitudes follow the published decay-then-plateau pattern
ERRS = [1.6e-2, 3.6e-5, 1.2e-7, 6.0e-9, 1.5e-9, 8.0e-10, 6.0e-10, 5.5e-10]


def table1_like_csv(path: Path):
    rows = [HEADER]
    for lam, eta, w0 in ((10.0, 0.0625, 5.5), (1.0, 70.0, 4.8)):
        for h in (0.25, 0.125, 0.0625):
            for m, err in zip((10, 20, 40, 80, 160, 320, 640, 1280), ERRS):
                for seed in (1, 2, 3, 4, 5):
                    e = err * (1.0 + 0.07 * seed) * (0.25 / h)
                    rows.append(
                        f"helmholtz1d,dg,{lam!r},{h!r},{m},{seed},{w0!r},{eta!r},"
                        f"{e!r},{e * 20!r},{min(8 * m, 560)},1.2e-11,least_squares,33.0"
                    )
    path.write_text("\n".join(rows) + "\n")


def test_convergence_on_table1_csv(tmp_path):
    csv_path = tmp_path / "results.csv"
    table1_like_csv(csv_path)
    start = time.perf_counter()
    hashes = []
    for name in ("one.png", "two.png"):
        out = tmp_path / name
        res = subprocess.run(
            [sys.executable, str(SCRIPTS / "convergence.py"),
             "--csv", str(csv_path), "--metric", "l2_error", "--out", str(out)],
            capture_output=True, text=True,
        )
        assert res.returncode == 0, res.stderr
        assert out.exists() and out.stat().st_size > 1000
        hashes.append(hashlib.sha256(out.read_bytes()).hexdigest())
    elapsed = time.perf_counter() - start
    assert hashes[0] == hashes[1], "plot output not pixel-deterministic"
    assert elapsed < 10.0, f"secondary acceptance exceeded budget: {elapsed:.1f}s"
    print(f"ACCEPTANCE secondary-plot-convergence: PASS ({elapsed:.1f}s)",
          file=sys.__stderr__, flush=True)
