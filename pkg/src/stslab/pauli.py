"""Phase-tracked Pauli operators on packed bit vectors.

An operator is ``i**phase * prod_q sigma(x_q, z_q)`` with sigma(1, 1) = Y.
The symplectic vector places the x bits in positions ``0..n-1`` and the z
bits in ``n..2n-1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf2 import iter_bits

_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_CHAR = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {c: xz for xz, c in _CHAR.items()}


@dataclass(frozen=True)
class PauliOperator:
    n_qubits: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        limit = 1 << self.n_qubits
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError("bits exceed qubit count")
        if not 0 <= self.phase < 4:
            object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_string(cls, text: str) -> "PauliOperator":
        text = text.strip()
        phase = 0
        for pre, ph in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
            if text.startswith(pre):
                phase, text = ph, text[len(pre):]
                break
        x = z = 0
        for q, ch in enumerate(text):
            if ch not in _BITS:
                raise ValueError(f"bad Pauli character {ch!r}")
            bx, bz = _BITS[ch]
            x |= bx << q
            z |= bz << q
        return cls(len(text), x, z, phase)

    @classmethod
    def from_sparse(cls, n: int, terms: dict[int, str], phase: int = 0) -> "PauliOperator":
        x = z = 0
        for q, ch in terms.items():
            bx, bz = _BITS[ch]
            x |= bx << q
            z |= bz << q
        return cls(n, x, z, phase)

    @classmethod
    def from_symplectic(cls, n: int, vec: int, phase: int = 0) -> "PauliOperator":
        mask = (1 << n) - 1
        return cls(n, vec & mask, vec >> n, phase)

    def to_string(self) -> str:
        return _PREFIX[self.phase] + "".join(self.char(q) for q in range(self.n_qubits))

    def __str__(self) -> str:
        return self.to_string()

    def char(self, q: int) -> str:
        return _CHAR[((self.x >> q) & 1, (self.z >> q) & 1)]

    @property
    def symplectic(self) -> int:
        return self.x | (self.z << self.n_qubits)

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return self.support.bit_count()

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def is_identity(self, up_to_phase: bool = True) -> bool:
        if self.x or self.z:
            return False
        return up_to_phase or self.phase == 0

    def same_up_to_phase(self, other: "PauliOperator") -> bool:
        return self.x == other.x and self.z == other.z

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def commutes_with(self, other: "PauliOperator") -> bool:
        return symplectic_product(self, other) == 0

    def restrict(self, qubits: int) -> "PauliOperator":
        return PauliOperator(self.n_qubits, self.x & qubits, self.z & qubits, 0)

    def without_phase(self) -> "PauliOperator":
        return PauliOperator(self.n_qubits, self.x, self.z, 0)

    def permute(self, perm) -> "PauliOperator":
        """Move qubit q to perm[q]."""
        x = z = 0
        for q in iter_bits(self.x):
            x |= 1 << perm[q]
        for q in iter_bits(self.z):
            z |= 1 << perm[q]
        return PauliOperator(self.n_qubits, x, z, self.phase)


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    if a.n_qubits != b.n_qubits:
        raise ValueError("qubit count mismatch")
    x = a.x ^ b.x
    z = a.z ^ b.z
    # sigma(x,z) = i^{xz} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{z1.x2}.
    phase = (
        a.phase
        + b.phase
        + (a.x & a.z).bit_count()
        + (b.x & b.z).bit_count()
        + 2 * (a.z & b.x).bit_count()
        - (x & z).bit_count()
    ) % 4
    return PauliOperator(a.n_qubits, x, z, phase)


def product(ops, n_qubits: int) -> PauliOperator:
    out = PauliOperator.identity(n_qubits)
    for op in ops:
        out = multiply(out, op)
    return out


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    return ((a.x & b.z) ^ (a.z & b.x)).bit_count() & 1


def symplectic_form(u: int, v: int, n: int) -> int:
    mask = (1 << n) - 1
    return (((u & mask) & (v >> n)) ^ ((u >> n) & (v & mask))).bit_count() & 1


def weight(p: PauliOperator) -> int:
    return p.weight
