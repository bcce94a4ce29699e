"""Scan biharmonic Hopf tubes over (type, n, c) and write a CSV plus a per-type summary."""
import argparse
from collections import Counter
from pathlib import Path

import numpy as np

from biharmonic_sasakian import hopf
from biharmonic_sasakian.io import write_csv


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--types", nargs="+", default=["A1", "A2"], choices=["A1", "A2"])
    ap.add_argument("--n-min", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--c-min", type=float, default=-2.9)
    ap.add_argument("--c-max", type=float, default=5.0)
    ap.add_argument("--c-steps", type=int, default=80)
    ap.add_argument("--out", default="hopf_scan.csv")
    args = ap.parse_args(argv)

    cs = np.linspace(args.c_min, args.c_max, args.c_steps)
    grid = hopf.scan_grid(args.types, range(args.n_min, args.n_max + 1), cs)
    rows = [r for g in grid for r in hopf.scan_rows(*g)]
    write_csv(Path(args.out), list(hopf.SCAN_COLUMNS), rows)

    # smallest c on the grid with a proper root, per (type, n, p, q)
    first = {}
    for r in rows:
        key = (r["type"], r["n"], r["p"], r["q"])
        if r["verdict"] == "ProperBiharmonic" and key not in first:
            first[key] = r["c"]
    counts = Counter(r["verdict"] for r in rows)
    print(f"{len(grid)} points, {len(rows)} rows -> {args.out}; verdicts {dict(counts)}")
    for (kind, n, p, q), c in sorted(first.items(), key=lambda kv: tuple(str(x) for x in kv[0])):
        try:
            thr = hopf.existence_threshold(kind, n, p, q)
        except ValueError:
            thr = float("nan")
        label = f"{kind} n={n}" + (f" p={p} q={q}" if p is not None else "")
        print(f"  {label:20s} first proper c on grid {c:8.4f}   threshold {thr:8.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
