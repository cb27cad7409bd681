"""Energy barriers of logical operators under local error paths.

A path applies the single-qubit factors of a logical operator one at a time;
its cost is the largest excitation energy met on the way. The search is a
minimax best-first search over subsets of the operator's support.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from itertools import combinations

from .code import StabilizerCode
from .gf2 import iter_bits
from .pauli import PauliOperator, multiply


class CapacityError(RuntimeError):
    pass


def excitation_energy(code: StabilizerCode, error: PauliOperator) -> int:
    """Energy above the ground state: 2 per violated generator."""
    return 2 * code.syndrome(error).bit_count()


@dataclass(frozen=True)
class ErrorPath:
    steps: tuple[tuple[int, str], ...]
    energies: tuple[int, ...]

    def to_json(self) -> list[dict]:
        return [{"qubit": q, "pauli": p, "energy_after": e} for (q, p), e in zip(self.steps, self.energies)]


@dataclass(frozen=True)
class BarrierResult:
    barrier: int
    path: ErrorPath
    states_explored: int

    def to_json(self) -> dict:
        return {"barrier": self.barrier, "path": self.path.to_json()}


def _factors(op: PauliOperator) -> list[tuple[int, str, PauliOperator]]:
    n = op.n_qubits
    return [(q, op.char(q), PauliOperator.from_sparse(n, {q: op.char(q)})) for q in iter_bits(op.support)]


def barrier_for_representative(
    code: StabilizerCode, logical: PauliOperator, max_weight: int = 20, max_states: int = 1 << 20
) -> BarrierResult:
    if not code.in_centralizer(logical):
        raise ValueError("operator does not commute with the stabilizers")
    factors = _factors(logical)
    w = len(factors)
    if w > max_weight:
        raise CapacityError(f"weight {w} exceeds max_weight {max_weight}")
    if (1 << w) > max_states:
        raise CapacityError(f"2^{w} states exceed max_states {max_states}")
    syn = [code.syndrome(p) for _, _, p in factors]
    full = (1 << w) - 1
    best = {0: 0}
    parent: dict[int, tuple[int, int]] = {}
    syndromes = {0: 0}
    heap = [(0, 0)]
    explored = 0
    while heap:
        cost, mask = heapq.heappop(heap)
        if cost > best.get(mask, cost):
            continue
        explored += 1
        if mask == full:
            break
        s = syndromes[mask]
        free = full & ~mask
        for i in iter_bits(free):
            nm = mask | (1 << i)
            ns = s ^ syn[i]
            c = max(cost, 2 * ns.bit_count())
            if c < best.get(nm, c + 1):
                best[nm] = c
                parent[nm] = (mask, i)
                syndromes[nm] = ns
                heapq.heappush(heap, (c, nm))
    order = []
    mask = full
    while mask:
        mask, i = parent[mask]
        order.append(i)
    order.reverse()
    steps, energies = [], []
    s = 0
    for i in order:
        s ^= syn[i]
        steps.append((factors[i][0], factors[i][1]))
        energies.append(2 * s.bit_count())
    return BarrierResult(best[full], ErrorPath(tuple(steps), tuple(energies)), explored)


def path_barrier(code: StabilizerCode, logical: PauliOperator, order) -> int:
    """Maximum energy along the path that applies factors in the given qubit order."""
    n = code.n_qubits
    cur = PauliOperator.identity(n)
    top = 0
    for q in order:
        cur = multiply(cur, PauliOperator.from_sparse(n, {q: logical.char(q)}))
        top = max(top, excitation_energy(code, cur))
    return top


def barrier_min_over_class(
    code: StabilizerCode, logical: PauliOperator, budget: int, max_weight: int = 20, max_representatives: int = 4096
) -> BarrierResult:
    """Lowest representative barrier over products with stabilizers from the first ``budget`` generators."""
    gens = code.generators[:budget]
    if (1 << len(gens)) > max_representatives:
        raise CapacityError(f"2^{len(gens)} representatives exceed {max_representatives}")
    seen = set()
    best = None
    for r in range(len(gens) + 1):
        for sub in combinations(range(len(gens)), r):
            rep = logical
            for j in sub:
                rep = multiply(rep, gens[j])
            if rep.symplectic in seen or rep.weight > max_weight:
                continue
            seen.add(rep.symplectic)
            res = barrier_for_representative(code, rep, max_weight)
            if best is None or res.barrier < best.barrier:
                best = res
    if best is None:
        raise CapacityError("every representative exceeds max_weight")
    return best


def barrier_json(result: BarrierResult) -> str:
    return json.dumps(result.to_json(), sort_keys=True)
