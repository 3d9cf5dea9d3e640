"""Server counts of GASP_r for K = L = 4 with and without precomputation.

Writes one CSV per panel: columns T, r, N (or N_pre), plus the lower-bound
series.  Usage: python3 scripts/server_count_series.py [--out-dir results] [--T-max 15]
"""

import argparse
import io
from pathlib import Path

from sdmmpre.cli import main


def series(K, L, T_max, precompute):
    buf = io.StringIO()
    argv = ["tables", "--K", str(K), "--L", str(L), "--T-max", str(T_max), "--r-list", ",".join(map(str, range(1, K + 1)))]
    if precompute:
        argv.append("--precompute")
    main(argv, out=buf)
    return buf.getvalue()


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--K", type=int, default=4)
    ap.add_argument("--L", type=int, default=4)
    ap.add_argument("--T-max", type=int, default=15)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for pre, name in ((False, "servers_no_precompute.csv"), (True, "servers_precompute.csv")):
        (out / name).write_text(series(args.K, args.L, args.T_max, pre))
        print(f"wrote {out / name}")
