"""Regions, translation equivalence and the dimension of logical operators."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .code import StabilizerCode, canonical_pairs, g_region
from .gf2 import EchelonBasis, gf2_kernel, gf2_solve, transpose
from .lattice import LatticeLayout, translate_operator
from .pauli import PauliOperator, multiply


@dataclass(frozen=True)
class Region:
    layout: LatticeLayout
    particles: frozenset[tuple[int, ...]]

    @property
    def qubit_mask(self) -> int:
        m = 0
        v = self.layout.v
        full = (1 << v) - 1
        for c in self.particles:
            m |= full << (self.layout.particle_index(c) * v)
        return m

    @property
    def qubits(self) -> list[int]:
        return sorted(q for c in self.particles for q in self.layout.particle_qubits(c))

    def __len__(self) -> int:
        return len(self.particles)

    def __or__(self, other: "Region") -> "Region":
        return Region(self.layout, self.particles | other.particles)

    def complement(self) -> "Region":
        return Region(self.layout, frozenset(self.layout.coords()) - self.particles)

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in sorted(self.particles)]

    @classmethod
    def from_json(cls, layout: LatticeLayout, coords: Iterable[Sequence[int]]) -> "Region":
        return cls(layout, frozenset(tuple(int(x) % d for x, d in zip(c, layout.dims)) for c in coords))


def complement(region: Region) -> Region:
    return region.complement()


def region_P(layout: LatticeLayout, extent: Sequence[int]) -> Region:
    """Box of particles with 0 <= r_a < extent[a]."""
    if len(extent) != layout.D:
        raise ValueError("extent length must equal D")
    if any(not 0 <= x <= n for x, n in zip(extent, layout.dims)):
        raise ValueError("extent outside the lattice")
    return Region(layout, frozenset(product(*(range(x) for x in extent))))


def region_Q(layout: LatticeLayout, direction: Sequence[int]) -> Region:
    """Full extent along axes with direction bit 1, a single layer otherwise."""
    return region_P(layout, [n if d else 1 for n, d in zip(layout.dims, direction)])


def region_R(layout: LatticeLayout, m: int) -> Region:
    """Union of the Q boxes spanned by exactly m axes."""
    if not 0 <= m <= layout.D:
        raise ValueError("need 0 <= m <= D")
    parts: frozenset = frozenset()
    for d in product((0, 1), repeat=layout.D):
        if sum(d) == m:
            parts |= region_Q(layout, d).particles
    return Region(layout, parts)


def g_of(code: StabilizerCode, region: Region) -> int:
    return g_region(code, region.qubit_mask)


def g_by_dimension(code: StabilizerCode, layout: LatticeLayout) -> list[int]:
    cum = [g_of(code, region_R(layout, m)) for m in range(layout.D + 1)]
    return [cum[0]] + [cum[m] - cum[m - 1] for m in range(1, layout.D + 1)]


@dataclass(frozen=True)
class TranslationCheck:
    passed: bool
    failing_axis: int | None = None


def translation_equivalence_check(
    code: StabilizerCode, layout: LatticeLayout, logical: PauliOperator, axes: Sequence[int] | None = None
) -> TranslationCheck:
    """Whether logical * T_a(logical) is a stabilizer for every axis a."""
    if not code.is_logical(logical):
        raise ValueError("operator is not a nontrivial logical")
    for a in range(layout.D) if axes is None else axes:
        moved = translate_operator(layout, logical, a)
        if not code.in_stabilizer_group(multiply(logical, moved)):
            return TranslationCheck(False, a)
    return TranslationCheck(True)


def deform_logical(code: StabilizerCode, logical: PauliOperator, target_qubits: int | Iterable[int]) -> PauliOperator | None:
    """Multiply by a stabilizer so the result lives on the target qubits, if possible."""
    n = code.n_qubits
    mask = target_qubits if isinstance(target_qubits, int) else sum(1 << q for q in set(target_qubits))
    outside = ((1 << n) - 1) & ~mask
    out_sym = outside | (outside << n)
    cols = [g.symplectic & out_sym for g in code.generators]
    rows = transpose(cols, 2 * n)
    coeffs = gf2_solve(rows, logical.symplectic & out_sym, len(cols))
    if coeffs is None:
        return None
    return multiply(logical, code.stabilizer_element(coeffs))


def logical_dimension(code: StabilizerCode, layout: LatticeLayout, logical: PauliOperator) -> int:
    for m in range(layout.D + 1):
        if deform_logical(code, logical, region_R(layout, m).qubit_mask) is not None:
            return m
    raise AssertionError("every operator fits in the whole lattice")


def _adapted_basis(code: StabilizerCode, layout: LatticeLayout) -> list[tuple[int, PauliOperator]]:
    """Logicals extended along the filtration R_0 < R_1 < ... < R_D."""
    n = code.n_qubits
    span = EchelonBasis(g.symplectic for g in code.generators)
    out = []
    for m in range(layout.D + 1):
        mask = region_R(layout, m).qubit_mask
        sym_mask = mask | (mask << n)
        rows = [r & sym_mask for r in code.commutation_rows]
        # Kernel over all 2n columns, keeping vectors supported on R_m.
        cands = [v for v in gf2_kernel(rows, 2 * n).rows if not v & ~sym_mask]
        for v in sorted(cands, key=lambda v: (v.bit_count(), v)):
            if span.add(v):
                out.append((m, PauliOperator.from_symplectic(n, v)))
    return out


@dataclass(frozen=True)
class LogicalPair:
    left: PauliOperator
    right: PauliOperator
    left_dim: int
    right_dim: int


@dataclass(frozen=True)
class DualityReport:
    D: int
    g_by_dimension: tuple[int, ...]
    pairs: tuple[LogicalPair, ...]

    @property
    def pair_dims(self) -> list[tuple[int, int]]:
        return [(p.left_dim, p.right_dim) for p in self.pairs]

    @property
    def g_symmetric(self) -> bool:
        g = self.g_by_dimension
        return all(g[m] == g[self.D - m] for m in range(self.D + 1))

    @property
    def pairs_dual(self) -> bool:
        return all(a + b == self.D for a, b in self.pair_dims)

    @property
    def passed(self) -> bool:
        return self.g_symmetric and self.pairs_dual

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "g_by_dimension": list(self.g_by_dimension),
            "pairs": [
                {"left": p.left.to_string(), "right": p.right.to_string(), "left_dim": p.left_dim, "right_dim": p.right_dim}
                for p in self.pairs
            ],
            "passed": self.passed,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pair", "left_dim", "right_dim", "left", "right"])
        for i, p in enumerate(self.pairs):
            w.writerow([i, p.left_dim, p.right_dim, p.left.to_string(), p.right.to_string()])
        return buf.getvalue()


def classify_dimensions(code: StabilizerCode, layout: LatticeLayout) -> DualityReport:
    if code.k == 0:
        return DualityReport(layout.D, tuple(g_by_dimension(code, layout)), ())
    adapted = _adapted_basis(code, layout)
    pairs = canonical_pairs(code, [op for _, op in adapted])
    out = []
    for a, b in pairs.pairs:
        out.append(LogicalPair(a, b, logical_dimension(code, layout, a), logical_dimension(code, layout, b)))
    return DualityReport(layout.D, tuple(g_by_dimension(code, layout)), tuple(out))


def verify_duality(code: StabilizerCode, layout: LatticeLayout) -> DualityReport:
    return classify_dimensions(code, layout)


@dataclass(frozen=True)
class TopologicalOrderReport:
    passed: bool
    corner_box_g: int
    max_particle_g: int


def topological_order_check(code: StabilizerCode, layout: LatticeLayout) -> TopologicalOrderReport:
    """No logical fits in the box one short of the lattice, nor on any particle."""
    box = g_of(code, region_P(layout, [n - 1 for n in layout.dims]))
    single = max(g_of(code, Region(layout, frozenset([c]))) for c in layout.coords())
    return TopologicalOrderReport(box == 0 and single == 0, box, single)


def equivalence_relations(layout: LatticeLayout) -> list[tuple[str, Region, Region]]:
    """Pairs of regions expected to carry the same g, each given as (R, complement of S)."""
    D = layout.D
    Q = lambda *d: region_Q(layout, d)  # noqa: E731
    R = lambda m: region_R(layout, m)  # noqa: E731
    if D == 2:
        return [
            ("R0 ~ ~R1", R(0), R(1).complement()),
            ("R1 ~ ~R0", R(1), R(0).complement()),
            ("Q10 ~ ~Q10", Q(1, 0), Q(1, 0).complement()),
            ("Q01 ~ ~Q01", Q(0, 1), Q(0, 1).complement()),
        ]
    if D != 3:
        raise ValueError("relations are tabulated for D = 2 and 3")
    return [
        ("R0 ~ ~R2", R(0), R(2).complement()),
        ("Q100 ~ ~(Q110|Q101)", Q(1, 0, 0), (Q(1, 1, 0) | Q(1, 0, 1)).complement()),
        ("Q010 ~ ~(Q110|Q011)", Q(0, 1, 0), (Q(1, 1, 0) | Q(0, 1, 1)).complement()),
        ("Q001 ~ ~(Q101|Q011)", Q(0, 0, 1), (Q(1, 0, 1) | Q(0, 1, 1)).complement()),
        ("Q100|Q010 ~ ~(Q110|Q001)", Q(1, 0, 0) | Q(0, 1, 0), (Q(1, 1, 0) | Q(0, 0, 1)).complement()),
        ("Q010|Q001 ~ ~(Q011|Q100)", Q(0, 1, 0) | Q(0, 0, 1), (Q(0, 1, 1) | Q(1, 0, 0)).complement()),
        ("Q001|Q100 ~ ~(Q101|Q010)", Q(0, 0, 1) | Q(1, 0, 0), (Q(1, 0, 1) | Q(0, 1, 0)).complement()),
        ("R1 ~ ~R1", R(1), R(1).complement()),
        ("Q110 ~ ~Q110", Q(1, 1, 0), Q(1, 1, 0).complement()),
        ("Q011 ~ ~Q011", Q(0, 1, 1), Q(0, 1, 1).complement()),
        ("Q101 ~ ~Q101", Q(1, 0, 1), Q(1, 0, 1).complement()),
    ]


def check_equivalences(code: StabilizerCode, layout: LatticeLayout) -> list[tuple[str, int, int]]:
    return [(name, g_of(code, a), g_of(code, b)) for name, a, b in equivalence_relations(layout)]


def regions_json(layout: LatticeLayout) -> str:
    data = {
        "layout": layout.to_json(),
        "R": {str(m): region_R(layout, m).to_json() for m in range(layout.D + 1)},
        "Q": {
            "".join(map(str, d)): region_Q(layout, d).to_json() for d in product((0, 1), repeat=layout.D)
        },
    }
    return json.dumps(data, sort_keys=True)
