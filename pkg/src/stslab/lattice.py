"""Translation-invariant lattice codes built from composite particles.

A composite particle sits at each vertex of a periodic D-dimensional lattice
and holds ``v`` qubits. Qubit index = row-major particle index * v + local slot.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb, prod
from pathlib import Path
from typing import Callable, Sequence

from .code import StabilizerCode
from .pauli import PauliOperator


@dataclass(frozen=True)
class LatticeLayout:
    dims: tuple[int, ...]
    v: int

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValueError("dims must be positive")
        if self.v < 1:
            raise ValueError("v must be positive")

    @property
    def D(self) -> int:
        return len(self.dims)

    @property
    def n_particles(self) -> int:
        return prod(self.dims)

    @property
    def n_qubits(self) -> int:
        return self.n_particles * self.v

    def coords(self):
        return product(*(range(d) for d in self.dims))

    def particle_index(self, coord: Sequence[int]) -> int:
        idx = 0
        for c, d in zip(coord, self.dims):
            idx = idx * d + (c % d)
        return idx

    def particle_coord(self, index: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.dims):
            out.append(index % d)
            index //= d
        return tuple(reversed(out))

    def qubit(self, coord: Sequence[int], slot: int) -> int:
        return self.particle_index(coord) * self.v + slot

    def particle_qubits(self, coord: Sequence[int]) -> range:
        base = self.particle_index(coord) * self.v
        return range(base, base + self.v)

    def shift(self, coord: Sequence[int], axis: int, amount: int = 1) -> tuple[int, ...]:
        c = list(coord)
        c[axis] = (c[axis] + amount) % self.dims[axis]
        return tuple(c)

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "v": self.v}

    @classmethod
    def from_json(cls, data: dict) -> "LatticeLayout":
        return cls(tuple(data["dims"]), int(data["v"]))


def translation_permutation(layout: LatticeLayout, axis: int, amount: int = 1) -> list[int]:
    perm = [0] * layout.n_qubits
    for c in layout.coords():
        src = layout.particle_index(c) * layout.v
        dst = layout.particle_index(layout.shift(c, axis, amount)) * layout.v
        for s in range(layout.v):
            perm[src + s] = dst + s
    return perm


def translate_operator(layout: LatticeLayout, p: PauliOperator, axis: int, amount: int = 1) -> PauliOperator:
    if not 0 <= axis < layout.D:
        raise ValueError(f"axis {axis} out of range")
    return p.permute(translation_permutation(layout, axis, amount))


def build_ising(D: int, dims: Sequence[int] | int) -> tuple[StabilizerCode, LatticeLayout]:
    """Z_r Z_{r+e} for every site r and axis e."""
    dims = _dims(D, dims)
    layout = LatticeLayout(dims, 1)
    n = layout.n_qubits
    gens = []
    for c in layout.coords():
        for a in range(D):
            i = layout.particle_index(c)
            j = layout.particle_index(layout.shift(c, a))
            if i == j:
                continue
            gens.append(PauliOperator.from_sparse(n, {i: "Z", j: "Z"}))
    return StabilizerCode(n, tuple(gens)), layout


def _dims(D: int, dims) -> tuple[int, ...]:
    if isinstance(dims, int):
        dims = (dims,) * D
    dims = tuple(dims)
    if len(dims) != D:
        raise ValueError("dims length must equal D")
    return dims


def cell_slots(D: int, m: int) -> list[tuple[int, ...]]:
    """Axis subsets of size m in lexicographic order; slot index = position."""
    return list(combinations(range(D), m))


def build_toric(D: int, m: int, L: int | Sequence[int]) -> tuple[StabilizerCode, LatticeLayout]:
    """Qubits on m-cells, Z checks on (m+1)-cells, X checks on (m-1)-cells."""
    if not 0 <= m <= D:
        raise ValueError("need 0 <= m <= D")
    dims = _dims(D, L)
    if min(dims) < 2:
        raise ValueError("toric code needs linear size >= 2")
    slots = {A: i for i, A in enumerate(cell_slots(D, m))}
    layout = LatticeLayout(dims, len(slots))
    n = layout.n_qubits
    gens = []
    if m < D:
        for c in layout.coords():
            for A in combinations(range(D), m + 1):
                qs = set()
                for a in A:
                    face = tuple(x for x in A if x != a)
                    for base in (c, layout.shift(c, a)):
                        qs ^= {layout.qubit(base, slots[face])}
                if qs:
                    gens.append(PauliOperator.from_sparse(n, {q: "Z" for q in qs}))
    if m > 0:
        for c in layout.coords():
            for A in combinations(range(D), m - 1):
                qs = set()
                for a in range(D):
                    if a in A:
                        continue
                    cell = tuple(sorted(A + (a,)))
                    for base in (c, layout.shift(c, a, -1)):
                        qs ^= {layout.qubit(base, slots[cell])}
                if qs:
                    gens.append(PauliOperator.from_sparse(n, {q: "X" for q in qs}))
    return StabilizerCode(n, tuple(gens)), layout


def toric_logical(layout: LatticeLayout, D: int, m: int, axes: Sequence[int], pauli: str) -> PauliOperator:
    """Z on the m-plane spanned by ``axes`` or X on the dual (D-m)-plane.

    Both act on the cells whose orientation is ``axes``; the pair with the
    same ``axes`` anticommutes.
    """
    A = tuple(sorted(axes))
    slot = cell_slots(D, m).index(A)
    terms = {}
    for c in layout.coords():
        on_plane = all(c[j] == 0 for j in range(D) if j not in A)
        on_dual = all(c[j] == 0 for j in A)
        if (pauli == "Z" and on_plane) or (pauli == "X" and on_dual):
            terms[layout.qubit(c, slot)] = pauli
    return PauliOperator.from_sparse(layout.n_qubits, terms)


def coarse_grain(code: StabilizerCode, layout: LatticeLayout, factors: Sequence[int]) -> tuple[StabilizerCode, LatticeLayout]:
    """Group blocks of particles into larger composite particles."""
    factors = tuple(factors)
    if len(factors) != layout.D or any(d % f for d, f in zip(layout.dims, factors)):
        raise ValueError("factors must divide the lattice dimensions")
    new = LatticeLayout(tuple(d // f for d, f in zip(layout.dims, factors)), layout.v * prod(factors))
    block = LatticeLayout(factors, 1)
    perm = [0] * layout.n_qubits
    for c in layout.coords():
        outer = tuple(x // f for x, f in zip(c, factors))
        inner = block.particle_index(tuple(x % f for x, f in zip(c, factors)))
        for s in range(layout.v):
            perm[layout.qubit(c, s)] = new.qubit(outer, inner * layout.v + s)
    gens = tuple(g.permute(perm) for g in code.generators)
    return StabilizerCode(code.n_qubits, gens), new


def interaction_window(code: StabilizerCode, layout: LatticeLayout) -> tuple[int, ...]:
    """Largest per-axis cyclic extent, in particles, of any generator."""
    out = [0] * layout.D
    for g in code.generators:
        pts = {layout.particle_coord(q // layout.v) for q in range(code.n_qubits) if (g.support >> q) & 1}
        for a in range(layout.D):
            out[a] = max(out[a], _cyclic_span(sorted({p[a] for p in pts}), layout.dims[a]))
    return tuple(out)


def _cyclic_span(points: list[int], n: int) -> int:
    if not points:
        return 0
    gaps = [(points[(i + 1) % len(points)] - points[i]) % n or n for i in range(len(points))]
    return n - max(gaps) + 1


@dataclass(frozen=True)
class CodeFamily:
    name: str
    builder: Callable[[int], tuple[StabilizerCode, LatticeLayout]]
    params: dict = field(default_factory=dict)

    def build(self, L: int) -> tuple[StabilizerCode, LatticeLayout]:
        return self.builder(L)


def ising_family(D: int) -> CodeFamily:
    return CodeFamily("ising", lambda L: build_ising(D, L), {"D": D})


def toric_family(D: int, m: int) -> CodeFamily:
    return CodeFamily("toric", lambda L: build_toric(D, m, L), {"D": D, "m": m})


def fixture_family(name: str, paths: dict[int, str | Path]) -> CodeFamily:
    """Family backed by JSON files carrying a "layout" entry, keyed by size."""
    from .code import load_code

    def build(L: int):
        data = json.loads(Path(paths[L]).read_text())
        return load_code(data), LatticeLayout.from_json(data["layout"])

    return CodeFamily(name, build, {"sizes": sorted(paths)})


@dataclass(frozen=True)
class ScaleReport:
    family: str
    ks: dict[int, int]
    passed: bool


def check_scale_symmetry(family: CodeFamily, sizes: Sequence[int]) -> ScaleReport:
    ks = {L: family.build(L)[0].k for L in sizes}
    return ScaleReport(family.name, ks, len(set(ks.values())) == 1)


def expected_toric_k(D: int, m: int) -> int:
    return comb(D, m)


@dataclass(frozen=True)
class LatticeSpec:
    family: str
    D: int
    dims: tuple[int, ...]
    m: int | None = None

    @classmethod
    def from_json(cls, data: dict) -> "LatticeSpec":
        D = int(data["D"])
        dims = data.get("dims") or data.get("L")
        dims = _dims(D, dims if isinstance(dims, int) else tuple(dims))
        m = data.get("m")
        return cls(str(data["family"]), D, dims, None if m is None else int(m))

    def build(self) -> tuple[StabilizerCode, LatticeLayout]:
        if self.family == "ising":
            return build_ising(self.D, self.dims)
        if self.family == "toric":
            if self.m is None:
                raise ValueError("toric family requires m")
            return build_toric(self.D, self.m, self.dims)
        raise ValueError(f"unknown family {self.family!r}")

    def to_json(self) -> dict:
        out = {"family": self.family, "D": self.D, "dims": list(self.dims)}
        if self.m is not None:
            out["m"] = self.m
        return out
