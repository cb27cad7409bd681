"""Memory time of the 2D Ising bit and the 2D toric qubit against system size.

Trials that never fail within --max-sweeps are censored and counted at
max_sweeps + 1, so a censored median is only a lower bound.
"""

import argparse
import csv
import sys
import time

from stslab.lattice import build_ising, build_toric, toric_logical
from stslab.pauli import PauliOperator
from stslab.thermal import ThermalConfig, bootstrap_median_ci, memory_time


def setup(model, L):
    if model == "ising2":
        code, _ = build_ising(2, L)
        return code, PauliOperator.from_sparse(code.n_qubits, {0: "Z"})
    code, layout = build_toric(2, 1, L)
    return code, toric_logical(layout, 2, 1, (0,), "Z")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", choices=["ising2", "toric2"], default="toric2")
    ap.add_argument("--sizes", default="8,12,16")
    ap.add_argument("--T", type=float, default=1.0)
    ap.add_argument("--trials", type=int, default=40)
    ap.add_argument("--max-sweeps", type=int, default=20_000)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["model", "L", "T", "trials", "censored", "median", "ci_low", "ci_high", "seconds"])
    for L in (int(x) for x in args.sizes.split(",")):
        code, logical = setup(args.model, L)
        t0 = time.perf_counter()
        cfg = ThermalConfig(T=args.T, seed=args.seed + L, threads=args.threads, block=4096)
        res = memory_time(code, logical, cfg, args.trials, args.max_sweeps)
        lo, hi = bootstrap_median_ci(res.times_array(), seed=args.seed)
        w.writerow([args.model, L, args.T, args.trials, res.censored, res.median, lo, hi,
                    f"{time.perf_counter() - t0:.1f}"])
        sys.stdout.flush()


if __name__ == "__main__":
    main()
