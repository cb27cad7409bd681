"""Numba kernels for single-flip Metropolis sweeps in one CSS error sector."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def metropolis_sweeps(
    err,
    syn,
    bias,
    q_ptr,
    q_idx,
    b_ptr,
    b_idx,
    accept_table,
    eps,
    uniforms,
    sites,
    out_energy,
    out_order,
    snapshots,
    record_snapshots,
):
    """Run ``uniforms.shape[0]`` sweeps in place; returns the accepted count.

    Move t of sweep s proposes flipping site sites[s, t] and accepts when
    uniforms[s, t] is below the Metropolis ratio. Random sites matter: a fixed
    scan order accepts every zero-cost move and drags excitations
    deterministically, which is not ergodic.

    err: uint8 error bits; syn: uint8 violated checks; bias: int8 eigenvalues
    (+1/-1) of the bias operators. Site q touches checks q_idx[q_ptr[q]:q_ptr[q+1]]
    and bias operators b_idx[b_ptr[q]:b_ptr[q+1]]. A flip changes the energy by
    2*dc + 2*eps*db with integer dc, db; accept_table[dc + C, db + B] holds
    min(1, exp(-beta * dE)) where C and B are the table half-widths.
    """
    c_off = (accept_table.shape[0] - 1) // 2
    b_off = (accept_table.shape[1] - 1) // 2
    n = err.shape[0]
    nb = bias.shape[0]
    accepted = 0
    violated = 0
    for g in range(syn.shape[0]):
        violated += np.int64(syn[g])
    bsum = 0
    for b in range(nb):
        bsum += np.int64(bias[b])
    for s in range(uniforms.shape[0]):
        for t0 in range(sites.shape[1]):
            q = sites[s, t0]
            dc = 0
            for t in range(q_ptr[q], q_ptr[q + 1]):
                if syn[q_idx[t]]:
                    dc -= 1
                else:
                    dc += 1
            db = 0
            for t in range(b_ptr[q], b_ptr[q + 1]):
                db += np.int64(bias[b_idx[t]])
            if uniforms[s, t0] < accept_table[dc + c_off, db + b_off]:
                err[q] ^= 1
                for t in range(q_ptr[q], q_ptr[q + 1]):
                    g = q_idx[t]
                    violated += 1 - 2 * np.int64(syn[g])
                    syn[g] ^= 1
                for t in range(b_ptr[q], b_ptr[q + 1]):
                    b = b_idx[t]
                    bsum -= 2 * np.int64(bias[b])
                    bias[b] = -bias[b]
                accepted += 1
        out_energy[s] = 2.0 * violated - eps * bsum
        if nb > 0:
            out_order[s] = bsum / nb
        else:
            out_order[s] = 0.0
        if record_snapshots:
            for q in range(n):
                snapshots[s, q] = err[q]
    return accepted
