"""Write the JSON fixtures used by the test suite.

Newman-Moore three-body codes: Z on (i, j), (i+1, j), (i, j+1) for every
site of a periodic L x L lattice. Their logical count depends on L, which
makes them the negative case for scale symmetry.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def newman_moore(L: int) -> dict:
    n = L * L
    gens = []
    for i in range(L):
        for j in range(L):
            ops = ["I"] * n
            for a, b in ((i, j), ((i + 1) % L, j), (i, (j + 1) % L)):
                ops[a * L + b] = "Z"
            gens.append("+" + "".join(ops))
    return {"n_qubits": n, "generators": gens, "layout": {"dims": [L, L], "v": 1}}


COLUMNS = {
    "characteristic": [
        {"column": ["X", "X", "X", "X"], "b": [1, 1], "V": "X"},
        {"column": ["X", "I", "X", "I"], "b": [0, 1], "V": "X"},
        {"column": ["X", "X", "I", "I"], "b": [1, 0], "V": "X"},
        {"column": ["X", "I", "I", "I"], "b": [0, 0], "V": "X"},
    ],
    "worked_product": {
        "ell": [["XI"], ["IX"], ["ZI"], ["XX"]],
        "B": [[1], [1], [0], [1]],
        "full": [["XI"], ["IX"], ["YI"], ["II"], ["ZX"], ["YX"], ["XX"]],
    },
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for L in (2, 3, 4):
        (OUT / f"newman_moore_L{L}.json").write_text(json.dumps(newman_moore(L), indent=1) + "\n")
    (OUT / "columns.json").write_text(json.dumps(COLUMNS, indent=1) + "\n")


if __name__ == "__main__":
    main()
