"""Column operators, characteristic vectors and identity-generating matrices.

A column operator is a stack of ``2**m`` Pauli operators on one composite
particle each, compared modulo phase. A binary column matrix ``B`` of width
``x`` selects translations of an operator laid out on ``x`` such columns.
Bit ``j`` of a column int is row ``j`` (least index first).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .code import StabilizerCode
from .gf2 import EchelonBasis, gf2_kernel, iter_bits, transpose
from .lattice import LatticeLayout, translate_operator
from .pauli import PauliOperator, multiply


@dataclass(frozen=True)
class ColumnOperator:
    entries: tuple[PauliOperator, ...]

    def __post_init__(self):
        ents = tuple(e.without_phase() for e in self.entries)
        h = len(ents)
        if h == 0 or h & (h - 1):
            raise ValueError("column height must be a power of two")
        if len({e.n_qubits for e in ents}) != 1:
            raise ValueError("entries must act on the same number of qubits")
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_strings(cls, labels: Sequence[str]) -> "ColumnOperator":
        return cls(tuple(PauliOperator.from_string(s) for s in labels))

    @classmethod
    def identity(cls, m: int, v: int) -> "ColumnOperator":
        return cls((PauliOperator.identity(v),) * (1 << m))

    @property
    def height(self) -> int:
        return len(self.entries)

    @property
    def m(self) -> int:
        return self.height.bit_length() - 1

    @property
    def v(self) -> int:
        return self.entries[0].n_qubits

    def is_identity(self) -> bool:
        return all(e.is_identity() for e in self.entries)

    def __mul__(self, other: "ColumnOperator") -> "ColumnOperator":
        if self.height != other.height:
            raise ValueError("height mismatch")
        return ColumnOperator(tuple(multiply(a, b) for a, b in zip(self.entries, other.entries)))

    def shift(self, k: int) -> "ColumnOperator":
        """Cyclic translation by k rows: entry j moves to row j + k."""
        h = self.height
        return ColumnOperator(tuple(self.entries[(j - k) % h] for j in range(h)))

    def apply_column(self, column: int) -> "ColumnOperator":
        """Product of the row translations selected by the bits of ``column``."""
        out = ColumnOperator.identity(self.m, self.v)
        for j in iter_bits(column):
            out = out * self.shift(j)
        return out

    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple((e.x, e.z) for e in self.entries)

    def to_json(self) -> list[str]:
        return [e.to_string()[1:] for e in self.entries]


def f_map(u: ColumnOperator, which: int) -> ColumnOperator:
    if u.m == 0:
        raise ValueError("cannot halve a column of height 1")
    half = u.height // 2
    top = u.entries[:half]
    if which == 1:
        return ColumnOperator(top)
    if which == 0:
        return ColumnOperator(tuple(multiply(a, b) for a, b in zip(top, u.entries[half:])))
    raise ValueError("which must be 0 or 1")


@dataclass(frozen=True)
class CharacteristicData:
    b: tuple[int, ...]
    V: PauliOperator

    @property
    def g(self) -> int:
        return vector_index(self.b)


def vector_index(b: Sequence[int]) -> int:
    return sum(bit << j for j, bit in enumerate(b))


def index_vector(g: int, m: int) -> tuple[int, ...]:
    return tuple((g >> j) & 1 for j in range(m))


def characteristic_vector(u: ColumnOperator) -> CharacteristicData:
    if u.is_identity():
        raise ValueError("characteristic vector of the identity column is undefined")
    b = [0] * u.m
    cur = u
    for j in reversed(range(u.m)):
        f0 = f_map(cur, 0)
        if f0.is_identity():
            b[j] = 1
            cur = f_map(cur, 1)
        else:
            cur = f0
    return CharacteristicData(tuple(b), cur.entries[0])


def characteristic_column(b: Sequence[int]) -> int:
    """Column with bit p set iff the binary digits of p are a subset of b."""
    g = vector_index(b)
    out = 0
    for p in range(1 << len(b)):
        if p & ~g == 0:
            out |= 1 << p
    return out


def rotate(column: int, k: int, m: int) -> int:
    h = 1 << m
    k %= h
    mask = (1 << h) - 1
    return ((column << k) | (column >> (h - k))) & mask


def column_star(a: int, b: int, m: int) -> int:
    out = 0
    for j in iter_bits(b):
        out ^= rotate(a, j, m)
    return out


def binomial_parity(alpha: int, beta: int) -> int:
    """1 if C(alpha, beta) is odd, else 0."""
    if beta < 0 or alpha < 0:
        raise ValueError("arguments must be non-negative")
    if beta > alpha:
        raise ValueError("beta exceeds alpha")
    return int(beta & ~alpha == 0)


@dataclass(frozen=True)
class BinaryColumnMatrix:
    m: int
    cols: tuple[int, ...]

    @classmethod
    def zeros(cls, x: int, m: int) -> "BinaryColumnMatrix":
        return cls(m, (0,) * x)

    @classmethod
    def unit(cls, x: int, m: int, i: int, j: int = 0) -> "BinaryColumnMatrix":
        cols = [0] * x
        cols[i] = 1 << j
        return cls(m, tuple(cols))

    @property
    def x(self) -> int:
        return len(self.cols)

    def parity(self) -> tuple[int, ...]:
        return tuple(c.bit_count() & 1 for c in self.cols)

    def is_odd(self) -> bool:
        return any(self.parity())

    def __xor__(self, other: "BinaryColumnMatrix") -> "BinaryColumnMatrix":
        return BinaryColumnMatrix(self.m, tuple(a ^ b for a, b in zip(self.cols, other.cols)))

    def star(self, column: int) -> "BinaryColumnMatrix":
        return BinaryColumnMatrix(self.m, tuple(column_star(c, column, self.m) for c in self.cols))

    def to_lists(self) -> list[list[int]]:
        return [[(c >> j) & 1 for j in range(1 << self.m)] for c in self.cols]


def apply_matrix(ell: Sequence[ColumnOperator], B: BinaryColumnMatrix) -> tuple[list[ColumnOperator], ColumnOperator]:
    """Product of translations of ``ell`` selected by B.

    Column i of B (0-based) selects copies shifted by x-1-i columns, so the
    result spans 2x-1 columns; the second return value is column x-1.
    """
    x = len(ell)
    if B.x != x or any(u.m != B.m for u in ell):
        raise ValueError("matrix shape does not match the operator")
    m, v = B.m, ell[0].v
    out = [ColumnOperator.identity(m, v) for _ in range(2 * x - 1)]
    for i, col in enumerate(B.cols):
        if not col:
            continue
        offset = x - 1 - i
        for c, u in enumerate(ell):
            out[c + offset] = out[c + offset] * u.apply_column(col)
    return out, out[x - 1]


def last_column(ell: Sequence[ColumnOperator], B: BinaryColumnMatrix) -> ColumnOperator:
    out = ColumnOperator.identity(B.m, ell[0].v)
    for u, col in zip(ell, B.cols):
        out = out * u.apply_column(col)
    return out


def find_odd_identity_matrix(ell: Sequence[ColumnOperator], budget: int | None = None) -> BinaryColumnMatrix | None:
    """Odd B with the x-th column of ell(B) equal to I, via characteristic-vector escalation.

    Each column i keeps a matrix E_i whose parity is 1 at i and 0 beyond i,
    with U_i its last column. A dependency among the characteristic operators
    of the U_i combines into a new U with a strictly larger characteristic
    vector, so the loop terminates within 2**m * x rounds.
    """
    x = len(ell)
    m, v = ell[0].m, ell[0].v
    if budget is None:
        budget = (1 << m) * x
    E = [BinaryColumnMatrix.unit(x, m, i) for i in range(x)]
    U = list(ell)
    for _ in range(budget + 1):
        for i in range(x):
            if U[i].is_identity():
                return E[i]
        data = [characteristic_vector(u) for u in U]
        vecs = [d.V.symplectic for d in data]
        ker = gf2_kernel(transpose(vecs, 2 * v), x)
        if not ker.rows:
            return None
        members = list(iter_bits(ker.rows[0]))
        top = max(data[i].g for i in members)
        alpha = max(i for i in members if data[i].g == top)
        new = BinaryColumnMatrix.zeros(x, m)
        for i in members:
            shift = characteristic_column(index_vector(top - data[i].g, m))
            new = new ^ E[i].star(shift)
        E[alpha] = new
        U[alpha] = last_column(ell, new)
        if U[alpha].is_identity():
            return new
    return None


def is_odd_identity_matrix(ell: Sequence[ColumnOperator], B: BinaryColumnMatrix) -> bool:
    return B.is_odd() and last_column(ell, B).is_identity()


def columns_of(layout: LatticeLayout, op: PauliOperator, x: int, m: int, origin: Sequence[int] | None = None) -> list[ColumnOperator]:
    """Read an operator on P(x, 2**m, 1) as x column operators along axis 0."""
    if layout.D < 2:
        raise ValueError("need at least two axes")
    origin = tuple(origin) if origin is not None else (0,) * layout.D
    v = layout.v
    cols = []
    for i in range(x):
        ents = []
        for j in range(1 << m):
            c = list(origin)
            c[0] += i
            c[1] += j
            base = layout.particle_index(c) * v
            mask = ((1 << v) - 1) << base
            ents.append(PauliOperator(v, (op.x & mask) >> base, (op.z & mask) >> base))
        cols.append(ColumnOperator(tuple(ents)))
    return cols


def load_columns(text: str) -> list[ColumnOperator]:
    return [ColumnOperator.from_strings(c) for c in json.loads(text)]


@dataclass(frozen=True)
class Decomposition:
    ell_a: PauliOperator
    ell_b: PauliOperator
    period: int
    stabilizer: PauliOperator


def _box_mask(layout: LatticeLayout, extent: Sequence[int]) -> int:
    from .sts import region_P

    return region_P(layout, extent).qubit_mask


def _centralizer_on(code: StabilizerCode, mask: int) -> list[int]:
    n = code.n_qubits
    sym = mask | (mask << n)
    rows = [r & sym for r in code.commutation_rows]
    return [v for v in gf2_kernel(rows, 2 * n).rows if not v & ~sym]


def _periodic_centralizer(code: StabilizerCode, layout: LatticeLayout, mask: int, period: int) -> list[int]:
    """Centralizer elements on ``mask`` invariant under translation by ``period`` along axis 0."""
    n = code.n_qubits
    reps = []
    seen = 0
    probe = PauliOperator(n, 0, 0)
    for q in range(n):
        if not (mask >> q) & 1:
            continue
        for pauli in "XZ":
            p = PauliOperator.from_sparse(n, {q: pauli})
            if p.symplectic & seen:
                continue
            orbit = probe
            cur = p
            while True:
                orbit = multiply(orbit, cur)
                cur = translate_operator(layout, cur, 0, period)
                if cur.symplectic == p.symplectic:
                    break
            if orbit.support & ~mask:
                continue
            seen |= orbit.symplectic
            reps.append(orbit.symplectic)
    rows = [[(r & o).bit_count() & 1 for o in reps] for r in code.commutation_rows]
    mat = [sum(b << j for j, b in enumerate(row)) for row in rows]
    out = []
    for combo in gf2_kernel(mat, len(reps)).rows:
        vec = 0
        for j in iter_bits(combo):
            vec ^= reps[j]
        out.append(vec)
    return out


def decompose_periodic(
    code: StabilizerCode,
    layout: LatticeLayout,
    ell: PauliOperator,
    extent: Sequence[int] | None = None,
) -> Decomposition | None:
    """Split ell ~ ell_a * ell_b with ell_b periodic along axis 0 and ell_a narrow.

    ``extent`` is the box holding ell; ell_a is confined to the first
    min(2v, n_0) layers of that box. Candidate periods are the proper
    divisors of n_0, smallest first; ell_a = I is tried before allowing a
    narrow part. Returns None when no candidate works.
    """
    n = code.n_qubits
    dims = layout.dims
    if extent is None:
        extent = [dims[0]] + [dims[1] if layout.D == 3 else 1] + [1] * (layout.D - 2)
        extent = extent[: layout.D]
    plane = _box_mask(layout, extent)
    if ell.support & ~plane:
        raise ValueError("operator leaves the stated box")
    if not code.is_logical(ell):
        raise ValueError("operator is not a nontrivial logical")
    narrow = list(extent)
    narrow[0] = min(2 * layout.v, extent[0])
    narrow_mask = _box_mask(layout, narrow)
    stab = [g.symplectic for g in code.generators]
    periods = [b for b in range(1, dims[0]) if dims[0] % b == 0] or [dims[0]]
    for allow_narrow in (False, True):
        for beta in periods:
            per = _periodic_centralizer(code, layout, plane, beta)
            nar = _centralizer_on(code, narrow_mask) if allow_narrow else []
            basis = EchelonBasis(stab + per + nar)
            combo = basis.express(ell.symplectic)
            if combo is None:
                continue
            s_mask = combo & ((1 << len(stab)) - 1)
            b_vec = 0
            for j in iter_bits((combo >> len(stab)) & ((1 << len(per)) - 1)):
                b_vec ^= per[j]
            a_vec = 0
            for j in iter_bits(combo >> (len(stab) + len(per))):
                a_vec ^= nar[j]
            return Decomposition(
                PauliOperator.from_symplectic(n, a_vec),
                PauliOperator.from_symplectic(n, b_vec),
                beta,
                code.stabilizer_element(s_mask),
            )
    return None
