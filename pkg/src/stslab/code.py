"""Stabilizer codes: validation, logical operators, distance, region counts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .gf2 import EchelonBasis, gf2_rank, iter_bits
from .pauli import PauliOperator, multiply, symplectic_form, symplectic_product


class CodeValidationError(ValueError):
    pass


@dataclass(frozen=True)
class StabilizerCode:
    n_qubits: int
    generators: tuple[PauliOperator, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.n_qubits != self.n_qubits:
                raise ValueError("generator qubit count mismatch")

    @classmethod
    def from_strings(cls, gens: Sequence[str]) -> "StabilizerCode":
        ops = tuple(PauliOperator.from_string(s) for s in gens)
        n = ops[0].n_qubits if ops else 0
        return cls(n, ops)

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @cached_property
    def stabilizer_basis(self) -> EchelonBasis:
        return EchelonBasis(g.symplectic for g in self.generators)

    @cached_property
    def rank(self) -> int:
        return len(self.stabilizer_basis)

    @property
    def k(self) -> int:
        return self.n_qubits - self.rank

    @cached_property
    def commutation_rows(self) -> list[int]:
        """Rows [g_z | g_x] so that row . v is the symplectic product with v."""
        n = self.n_qubits
        return [g.z | (g.x << n) for g in self.generators]

    def in_stabilizer_group(self, p: PauliOperator) -> bool:
        """Membership up to phase."""
        return self.stabilizer_basis.contains(p.symplectic)

    def in_centralizer(self, p: PauliOperator) -> bool:
        return all(symplectic_product(p, g) == 0 for g in self.generators)

    def is_logical(self, p: PauliOperator) -> bool:
        return self.in_centralizer(p) and not self.in_stabilizer_group(p)

    def syndrome(self, p: PauliOperator) -> int:
        out = 0
        for j, g in enumerate(self.generators):
            if symplectic_product(p, g):
                out |= 1 << j
        return out

    def stabilizer_element(self, mask: int) -> PauliOperator:
        out = PauliOperator.identity(self.n_qubits)
        for j in iter_bits(mask):
            out = multiply(out, self.generators[j])
        return out

    def to_json(self) -> dict:
        return {"n_qubits": self.n_qubits, "generators": [g.to_string() for g in self.generators]}


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = ""
    offending: tuple[int, ...] = ()


def validate(code: StabilizerCode) -> ValidationReport:
    gens = code.generators
    for i, g in enumerate(gens):
        if not g.is_hermitian:
            return ValidationReport(False, f"generator {i} is not Hermitian", (i,))
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if symplectic_product(gens[i], gens[j]):
                return ValidationReport(False, f"generators {i} and {j} anticommute", (i, j))
    # Phase-tracked elimination: an identity-valued combination must be +I.
    pivots: dict[int, tuple[PauliOperator, int]] = {}
    for i, g in enumerate(gens):
        cur, combo = g, 1 << i
        while cur.symplectic:
            p = cur.symplectic.bit_length() - 1
            if p not in pivots:
                pivots[p] = (cur, combo)
                break
            op, c = pivots[p]
            cur, combo = multiply(cur, op), combo ^ c
        else:
            if cur.phase != 0:
                return ValidationReport(False, "-I is in the stabilizer group", tuple(iter_bits(combo)))
    return ValidationReport(True)


def check(code: StabilizerCode) -> StabilizerCode:
    rep = validate(code)
    if not rep.ok:
        raise CodeValidationError(rep.message)
    return code


def centralizer_basis(code: StabilizerCode) -> list[int]:
    """Symplectic vectors spanning the centralizer, lightest first."""
    from .gf2 import gf2_kernel

    ker = gf2_kernel(code.commutation_rows, 2 * code.n_qubits)
    return sorted(ker.rows, key=lambda v: (_sym_weight(v, code.n_qubits), v))


def _sym_weight(v: int, n: int) -> int:
    return ((v & ((1 << n) - 1)) | (v >> n)).bit_count()


@dataclass(frozen=True)
class LogicalSet:
    operators: tuple[PauliOperator, ...]

    def __len__(self) -> int:
        return len(self.operators)


def logical_basis(code: StabilizerCode) -> LogicalSet:
    """2k operators that together with the stabilizers span the centralizer."""
    basis = EchelonBasis(g.symplectic for g in code.generators)
    out = []
    for v in centralizer_basis(code):
        if basis.add(v):
            out.append(PauliOperator.from_symplectic(code.n_qubits, v))
    assert len(out) == 2 * code.k
    return LogicalSet(tuple(out))


@dataclass(frozen=True)
class CanonicalPairs:
    pairs: tuple[tuple[PauliOperator, PauliOperator], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def flat(self) -> list[PauliOperator]:
        return [p for pair in self.pairs for p in pair]


def canonical_pairs(code: StabilizerCode, basis: Sequence[PauliOperator] | None = None) -> CanonicalPairs:
    """Symplectic Gram-Schmidt, processing the basis in the given order.

    Each pair takes the first remaining element as left partner and the first
    later element anticommuting with it as right partner.
    """
    n = code.n_qubits
    if basis is None:
        basis = logical_basis(code).operators
    vecs = [p.symplectic for p in basis]
    if len(vecs) != 2 * code.k:
        raise ValueError(f"expected {2 * code.k} logical operators, got {len(vecs)}")
    pairs = []
    while vecs:
        u = vecs.pop(0)
        j = next((i for i, w in enumerate(vecs) if symplectic_form(u, w, n)), None)
        if j is None:
            raise ValueError("basis is degenerate modulo the stabilizer group")
        w = vecs.pop(j)
        rest = []
        for v in vecs:
            v ^= (w if symplectic_form(v, u, n) else 0) ^ (u if symplectic_form(v, w, n) else 0)
            rest.append(v)
        vecs = rest
        pairs.append((PauliOperator.from_symplectic(n, u), PauliOperator.from_symplectic(n, w)))
    return CanonicalPairs(tuple(pairs))


def code_distance_exact(code: StabilizerCode, max_weight: int) -> int | None:
    """Minimum weight of a logical operator, or None if it exceeds max_weight."""
    if code.k == 0:
        raise ValueError("code encodes no qubits")
    n = code.n_qubits
    single = []
    for q in range(n):
        row = []
        for ch in "XYZ":
            p = PauliOperator.from_sparse(n, {q: ch})
            row.append((p.symplectic, code.syndrome(p)))
        single.append(row)
    basis = code.stabilizer_basis

    def search(start: int, left: int, vec: int, syn: int) -> bool:
        if left == 0:
            return syn == 0 and not basis.contains(vec)
        for q in range(start, n - left + 1):
            for v, s in single[q]:
                if search(q + 1, left - 1, vec ^ v, syn ^ s):
                    return True
        return False

    for w in range(1, min(max_weight, n) + 1):
        if search(0, w, 0, 0):
            return w
    return None


def region_mask(qubits: Iterable[int]) -> int:
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


def _restrict_vec(v: int, mask: int, n: int) -> int:
    return (v & mask) | (v & (mask << n))


def g_region(code: StabilizerCode, qubits: Iterable[int] | int) -> int:
    """dim(centralizer restricted to R) minus dim(stabilizers restricted to R)."""
    n = code.n_qubits
    mask = qubits if isinstance(qubits, int) else region_mask(qubits)
    size = mask.bit_count()
    comp = ((1 << n) - 1) & ~mask
    rows = code.commutation_rows
    dim_c = 2 * size - gf2_rank([_restrict_vec(r, mask, n) for r in rows])
    dim_s = code.rank - gf2_rank([_restrict_vec(g.symplectic, comp, n) for g in code.generators])
    return dim_c - dim_s


def load_code(path_or_text: str | Path | dict) -> StabilizerCode:
    if isinstance(path_or_text, dict):
        data = path_or_text
    else:
        text = str(path_or_text)
        if text.lstrip().startswith("{"):
            data = json.loads(text)
        else:
            data = json.loads(Path(text).read_text())
    gens = tuple(PauliOperator.from_string(s) for s in data["generators"])
    n = int(data["n_qubits"])
    for g in gens:
        if g.n_qubits != n:
            raise CodeValidationError("generator length does not match n_qubits")
    return StabilizerCode(n, gens)


def dump_code(code: StabilizerCode, **extra) -> str:
    data = code.to_json()
    data.update(extra)
    return json.dumps(data, indent=2, sort_keys=True)
