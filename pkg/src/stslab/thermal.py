"""Exact partition functions and Metropolis sampling of CSS codes.

Sampling works in the error picture: the Hamiltonian is minus the sum of the
generators, a CSS code splits into an X-error sector (seen by Z checks) and a
Z-error sector (seen by X checks), and each sector is a classical spin model.
An optional bias adds ``-eps * sum_j <bias_j>`` for Pauli bias operators.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._kernels import metropolis_sweeps
from .code import StabilizerCode
from .gf2 import gf2_kernel, iter_bits, transpose
from .lattice import LatticeLayout, translate_operator
from .pauli import PauliOperator


class CapacityError(RuntimeError):
    pass


# ---------------------------------------------------------------- exact log Z


def _weight_distribution(vectors: Sequence[int], n_bits: int) -> np.ndarray:
    """Counts of each Hamming weight over the span of linearly independent vectors."""
    n_bytes = max(1, (n_bits + 7) // 8)
    rows = np.zeros((1, n_bytes), dtype=np.uint8)
    for v in vectors:
        vb = np.frombuffer(v.to_bytes(n_bytes, "little"), dtype=np.uint8)
        rows = np.concatenate([rows, rows ^ vb])
    weights = np.unpackbits(rows, axis=1).sum(axis=1)
    return np.bincount(weights, minlength=n_bits + 1)


def _logsumexp(values: np.ndarray) -> float:
    top = float(np.max(values))
    return top + math.log(float(np.sum(np.exp(values - top))))


def log_partition_function(code: StabilizerCode, beta: float, max_enumeration_dim: int = 24) -> float:
    """Exact log Tr exp(beta * sum_j g_j) for a valid stabilizer code.

    The spectrum is fixed by the syndrome space: allowed syndromes form a
    binary code of dimension rank(S) with multiplicity 2**(N - rank). The
    weight enumerator comes from that code or from its dual (the generator
    dependencies), whichever is smaller.
    """
    n, M, r = code.n_qubits, code.n_generators, code.rank
    if M == 0:
        return n * math.log(2.0)
    base = (n - r) * math.log(2.0)
    if r == M:
        return base + M * math.log(2.0 * math.cosh(beta))
    gens = [g.symplectic for g in code.generators]
    deps = gf2_kernel(transpose(gens, 2 * n), M).rows
    if min(r, len(deps)) > max_enumeration_dim:
        raise CapacityError(f"syndrome space of dimension {min(r, len(deps))} is too large")
    if r <= len(deps):
        # Allowed syndromes: kernel of the dependency matrix.
        syn_basis = gf2_kernel(list(deps), M).rows
        counts = _weight_distribution(syn_basis, M)
        w = np.nonzero(counts)[0]
        terms = np.log(counts[w].astype(float)) + beta * (M - 2.0 * w)
        return base + _logsumexp(terms)
    counts = _weight_distribution(deps, M)
    w = np.nonzero(counts)[0]
    if beta == 0.0:
        return base + M * math.log(2.0) - len(deps) * math.log(2.0)
    # MacWilliams: sum over dual words of (2 cosh b)^(M-|u|) (2 sinh b)^|u| / |dual|.
    lc, ls = math.log(2.0 * math.cosh(beta)), math.log(2.0 * math.sinh(abs(beta)))
    sign = np.where((w % 2 == 1) & (beta < 0), -1.0, 1.0)
    terms = np.log(counts[w].astype(float)) + (M - w) * lc + w * ls
    top = float(terms.max())
    total = float(np.sum(sign * np.exp(terms - top)))
    return base + top + math.log(total) - len(deps) * math.log(2.0)


def partition_function_exact(code: StabilizerCode, beta: float) -> float:
    return log_partition_function(code, beta)


def sandwich_bounds(n: int, k: int, beta: float) -> tuple[float, float]:
    """Lower and upper bounds on log Z: (N-k) log(2 cosh b) and that plus k*b."""
    lc = (n - k) * math.log(2.0 * math.cosh(beta))
    return lc, lc + k * beta


# ------------------------------------------------------------------ sampling


@dataclass(frozen=True)
class ThermalConfig:
    T: float
    eps: float = 0.0
    sweeps: int = 1000
    burn_in: int = 0
    seed: int = 0
    chains: int = 1
    threads: int = 1
    block: int = 256

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("temperature must be positive")
        if self.eps < 0:
            raise ValueError("bias must be non-negative")
        if self.sweeps < 0 or self.burn_in < 0 or self.chains < 1:
            raise ValueError("bad sweep or chain counts")

    @property
    def beta(self) -> float:
        return 1.0 / self.T


def is_css(code: StabilizerCode) -> bool:
    return all(not (g.x and g.z) for g in code.generators)


@dataclass(frozen=True)
class Sector:
    """One CSS error sector with bias operators, in flat CSR form."""

    n: int
    n_checks: int
    q_ptr: np.ndarray
    q_idx: np.ndarray
    b_ptr: np.ndarray
    b_idx: np.ndarray
    n_bias: int
    check_rows: tuple[int, ...]


def build_sector(code: StabilizerCode, sector: str, bias_ops: Sequence[PauliOperator] = ()) -> Sector:
    """sector 'x': X errors seen by Z checks; sector 'z': Z errors seen by X checks."""
    if not is_css(code):
        raise ValueError("sampler needs a CSS code")
    if sector not in ("x", "z"):
        raise ValueError("sector must be 'x' or 'z'")
    n = code.n_qubits
    checks = [g.z if sector == "x" else g.x for g in code.generators]
    checks = [c for c in checks if c]
    biases = [b.z if sector == "x" else b.x for b in bias_ops]
    q_checks = [[] for _ in range(n)]
    for j, c in enumerate(checks):
        for q in iter_bits(c):
            q_checks[q].append(j)
    q_bias = [[] for _ in range(n)]
    for j, c in enumerate(biases):
        for q in iter_bits(c):
            q_bias[q].append(j)

    def csr(lists):
        ptr = np.zeros(n + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(x) for x in lists])
        idx = np.array([j for x in lists for j in x], dtype=np.int64)
        return ptr, idx

    qp, qi = csr(q_checks)
    bp, bi = csr(q_bias)
    return Sector(n, len(checks), qp, qi, bp, bi, len(biases), tuple(checks))


def chain_generators(seed: int, chains: int) -> list[np.random.Generator]:
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(chains)]


@dataclass
class ChainState:
    err: np.ndarray
    syn: np.ndarray
    bias: np.ndarray

    @classmethod
    def zero(cls, sec: Sector) -> "ChainState":
        return cls(
            np.zeros(sec.n, dtype=np.uint8),
            np.zeros(sec.n_checks, dtype=np.uint8),
            np.ones(sec.n_bias, dtype=np.int8),
        )


def acceptance_table(sec: Sector, beta: float, eps: float) -> np.ndarray:
    """min(1, exp(-beta * (2 dc + 2 eps db))) over the reachable (dc, db)."""
    cmax = int(np.diff(sec.q_ptr).max(initial=0))
    bmax = int(np.diff(sec.b_ptr).max(initial=0))
    dc = np.arange(-cmax, cmax + 1)[:, None]
    db = np.arange(-bmax, bmax + 1)[None, :]
    dE = 2.0 * dc + 2.0 * eps * db
    with np.errstate(over="ignore"):
        return np.where(dE <= 0, 2.0, np.exp(-beta * np.maximum(dE, 0.0)))


def draw_moves(rng: np.random.Generator, sweeps: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniforms and proposal sites for ``sweeps`` sweeps of ``n`` moves each."""
    u = rng.random((sweeps, n))
    return u, rng.integers(0, n, size=(sweeps, n), dtype=np.int32)


def run_sweeps(
    sec: Sector,
    state: ChainState,
    beta: float,
    eps: float,
    uniforms: np.ndarray,
    sites: np.ndarray,
    record_snapshots: bool = False,
):
    """Sweeps of single-site Metropolis moves; row s of ``sites``/``uniforms`` is one sweep."""
    s = uniforms.shape[0]
    energy = np.empty(s)
    order = np.empty(s)
    snaps = np.empty((s if record_snapshots else 0, sec.n), dtype=np.uint8)
    acc = metropolis_sweeps(
        state.err, state.syn, state.bias, sec.q_ptr, sec.q_idx, sec.b_ptr, sec.b_idx,
        acceptance_table(sec, beta, eps), float(eps), uniforms, sites, energy, order, snaps, record_snapshots,
    )
    return energy, order, snaps, int(acc)


@dataclass
class Trajectory:
    energy: np.ndarray
    order: np.ndarray
    accepted: np.ndarray
    final_errors: np.ndarray
    states: np.ndarray | None = None


def _run_chain(sec: Sector, config: ThermalConfig, rng: np.random.Generator, record_states: bool):
    state = ChainState.zero(sec)
    total = config.burn_in + config.sweeps
    energy = np.empty(config.sweeps)
    order = np.empty(config.sweeps)
    states = np.empty((config.sweeps, sec.n), dtype=np.uint8) if record_states else None
    accepted = 0
    done = 0
    while done < total:
        size = min(config.block, total - done)
        u, sites = draw_moves(rng, size, sec.n)
        e, o, snaps, acc = run_sweeps(sec, state, config.beta, config.eps, u, sites, record_states)
        accepted += acc
        lo = max(done, config.burn_in)
        hi = done + size
        if hi > lo:
            sl = slice(lo - done, hi - done)
            energy[lo - config.burn_in : hi - config.burn_in] = e[sl]
            order[lo - config.burn_in : hi - config.burn_in] = o[sl]
            if record_states:
                states[lo - config.burn_in : hi - config.burn_in] = snaps[sl]
        done = hi
    return energy, order, accepted, state.err.copy(), states


def sample_gibbs_css(
    code: StabilizerCode,
    config: ThermalConfig,
    bias_ops: Sequence[PauliOperator] = (),
    sector: str = "x",
    record_states: bool = False,
) -> Trajectory:
    sec = build_sector(code, sector, bias_ops)
    rngs = chain_generators(config.seed, config.chains)
    with ThreadPoolExecutor(max_workers=max(1, config.threads)) as pool:
        results = list(pool.map(lambda r: _run_chain(sec, config, r, record_states), rngs))
    return Trajectory(
        energy=np.stack([r[0] for r in results]),
        order=np.stack([r[1] for r in results]),
        accepted=np.array([r[2] for r in results]),
        final_errors=np.stack([r[3] for r in results]),
        states=np.stack([r[4] for r in results]) if record_states else None,
    )


@dataclass(frozen=True)
class OrderParameterEstimate:
    mean: float
    stderr: float
    operator: str
    n_bias: int


def batch_stderr(samples: np.ndarray, batches: int = 20) -> float:
    """Standard error of the grand mean from per-chain batch means."""
    samples = np.atleast_2d(samples)
    size = samples.shape[1] // batches
    if size == 0:
        return float("nan")
    means = samples[:, : size * batches].reshape(samples.shape[0], batches, size).mean(axis=2).ravel()
    return float(means.std(ddof=1) / math.sqrt(len(means)))


def translation_family(layout: LatticeLayout, logical: PauliOperator, axes: Sequence[int]) -> list[PauliOperator]:
    """All translates of the operator by the lattice vectors spanned by ``axes``."""
    ops = [logical]
    for a in axes:
        nxt = []
        for op in ops:
            cur = op
            for _ in range(layout.dims[a]):
                nxt.append(cur)
                cur = translate_operator(layout, cur, a)
        ops = nxt
    return ops


def operator_id(op: PauliOperator) -> str:
    """Sparse label such as ``Z0 Z3 Z6``; the identity is ``I``."""
    return " ".join(f"{op.char(q)}{q}" for q in iter_bits(op.support)) or "I"


def sector_for(logical: PauliOperator) -> str:
    if logical.x and logical.z:
        raise ValueError("logical must be pure X or pure Z for the CSS sampler")
    return "x" if logical.z else "z"


def order_parameter(
    code: StabilizerCode,
    layout: LatticeLayout,
    logical: PauliOperator,
    axes: Sequence[int],
    config: ThermalConfig,
) -> tuple[OrderParameterEstimate, Trajectory]:
    """Mean of the normalized translation sum of ``logical`` under bias eps."""
    family = translation_family(layout, logical, axes)
    traj = sample_gibbs_css(code, config, family, sector_for(logical))
    est = OrderParameterEstimate(
        float(traj.order.mean()), batch_stderr(traj.order), operator_id(logical), len(family)
    )
    return est, traj


def onsager_magnetization(T: float) -> float:
    """Spontaneous magnetization of the square-lattice Ising model, coupling 1."""
    s = math.sinh(2.0 / T)
    val = 1.0 - s ** -4
    return val ** 0.125 if val > 0 else 0.0


# --------------------------------------------------------------- memory time


class CosetDecoder:
    """Minimal-weight correction by enumerating all zero-syndrome patterns."""

    def __init__(self, sec: Sector, logical_mask: int, max_dim: int = 16):
        n = sec.n
        ker = gf2_kernel(list(sec.check_rows), n).rows if sec.check_rows else [1 << q for q in range(n)]
        if len(ker) > max_dim:
            raise CapacityError(f"coset enumeration over 2^{len(ker)} patterns")
        elems = np.zeros((1, n), dtype=np.uint8)
        for v in ker:
            row = np.array([(v >> q) & 1 for q in range(n)], dtype=np.uint8)
            elems = np.concatenate([elems, elems ^ row])
        self.elems = elems
        lmask = np.array([(logical_mask >> q) & 1 for q in range(n)], dtype=np.uint8)
        self.flips = (elems.astype(np.int64) @ lmask.astype(np.int64)) % 2 == 1

    def failures(self, errors: np.ndarray) -> np.ndarray:
        # Weight of e + c over candidates c; the residual after correction is c.
        e = errors.astype(np.int64)
        c = self.elems.astype(np.int64)
        weights = e.sum(axis=1)[:, None] + c.sum(axis=1)[None, :] - 2 * (e @ c.T)
        return self.flips[np.argmin(weights, axis=1)]


class MatchingDecoder:
    """Minimum-weight perfect matching via pymatching; needs graph-like checks."""

    def __init__(self, sec: Sector, logical_mask: int):
        import pymatching
        from scipy.sparse import csr_matrix

        n = sec.n
        rows, cols = [], []
        for j, c in enumerate(sec.check_rows):
            for q in iter_bits(c):
                rows.append(j)
                cols.append(q)
        self.H = csr_matrix((np.ones(len(rows), dtype=np.uint8), (rows, cols)), shape=(len(sec.check_rows), n))
        self.matching = pymatching.Matching.from_check_matrix(self.H)
        self.lmask = np.array([(logical_mask >> q) & 1 for q in range(n)], dtype=np.uint8)

    def failures(self, errors: np.ndarray) -> np.ndarray:
        syn = (self.H @ errors.T).T % 2
        corr = self.matching.decode_batch(syn.astype(np.uint8))
        residual = errors ^ corr
        return (residual.astype(np.int64) @ self.lmask.astype(np.int64)) % 2 == 1


def make_decoder(sec: Sector, logical_mask: int, kind: str = "auto"):
    if kind == "coset":
        return CosetDecoder(sec, logical_mask)
    if kind == "matching":
        return MatchingDecoder(sec, logical_mask)
    if kind != "auto":
        raise ValueError(f"unknown decoder {kind!r}")
    try:
        return CosetDecoder(sec, logical_mask)
    except CapacityError:
        return MatchingDecoder(sec, logical_mask)


@dataclass(frozen=True)
class MemoryTimeResult:
    failure_times: tuple[int | None, ...]
    max_sweeps: int

    @property
    def censored(self) -> int:
        return sum(t is None for t in self.failure_times)

    def times_array(self) -> np.ndarray:
        """Failure times with censored trials set to max_sweeps + 1."""
        return np.array([self.max_sweeps + 1 if t is None else t for t in self.failure_times], dtype=float)

    @property
    def median(self) -> float:
        return float(np.median(self.times_array()))


def memory_time(
    code: StabilizerCode,
    logical: PauliOperator,
    config: ThermalConfig,
    trials: int,
    max_sweeps: int,
    decoder: str = "auto",
) -> MemoryTimeResult:
    """First sweep at which decoding the accumulated error flips ``logical``.

    Runs at eps = 0 from the zero-error state. The logical's partner errors
    live in the sector that anticommutes with it, e.g. X errors for a Z logical.
    """
    sector = sector_for(logical)
    sec = build_sector(code, sector)
    mask = logical.z if sector == "x" else logical.x
    dec = make_decoder(sec, mask, decoder)
    rngs = chain_generators(config.seed, trials)

    def one(rng):
        state = ChainState.zero(sec)
        done = 0
        while done < max_sweeps:
            size = min(config.block, max_sweeps - done)
            u, sites = draw_moves(rng, size, sec.n)
            _, _, snaps, _ = run_sweeps(sec, state, config.beta, 0.0, u, sites, True)
            fails = dec.failures(snaps)
            hit = np.flatnonzero(fails)
            if hit.size:
                return done + int(hit[0]) + 1
            done += size
        return None

    with ThreadPoolExecutor(max_workers=max(1, config.threads)) as pool:
        times = tuple(pool.map(one, rngs))
    return MemoryTimeResult(times, max_sweeps)


def bootstrap_median_ci(times: np.ndarray, seed: int = 0, resamples: int = 2000, level: float = 0.95) -> tuple[float, float]:
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = rng.integers(0, len(times), size=(resamples, len(times)))
    meds = np.median(times[idx], axis=1)
    lo, hi = np.quantile(meds, [(1 - level) / 2, (1 + level) / 2])
    return float(lo), float(hi)
