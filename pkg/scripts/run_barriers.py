"""Energy barriers of standard logical operators for a range of sizes.

The exhaustive search is exponential in the operator weight, so sizes stop
where the weight reaches --max-weight.
"""

import argparse
import csv
import sys

from stslab.barrier import CapacityError, barrier_for_representative
from stslab.lattice import build_ising, build_toric, toric_logical
from stslab.pauli import PauliOperator


def cases(max_weight):
    for L in range(2, max_weight + 1):
        code, _ = build_ising(1, L)
        yield "ising1", "global X", L, code, PauliOperator.from_string("X" * L)
    for L in range(2, max_weight + 1):
        code, layout = build_toric(2, 1, L)
        yield "toric2", "Z string", L, code, toric_logical(layout, 2, 1, (0,), "Z")
    for L in range(2, 5):
        code, _ = build_ising(2, L)
        yield "ising2", "global X", L, code, PauliOperator.from_string("X" * L * L)
    code, layout = build_toric(3, 1, 2)
    yield "toric3m1", "X membrane", 2, code, toric_logical(layout, 3, 1, (0,), "X")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-weight", type=int, default=16)
    args = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["model", "logical", "L", "weight", "barrier", "states_explored"])
    for model, label, L, code, op in cases(args.max_weight):
        try:
            res = barrier_for_representative(code, op, args.max_weight, max_states=1 << args.max_weight)
        except CapacityError:
            w.writerow([model, label, L, op.weight, "", ""])
            continue
        w.writerow([model, label, L, op.weight, res.barrier, res.states_explored])
        sys.stdout.flush()


if __name__ == "__main__":
    main()
