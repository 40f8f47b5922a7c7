"""Jitted solver kernels: the default backend when numba imports.

The exhaustive scan walks assignments in Gray-code order so each step
costs one local-field update.  Energies are integer-scaled, so results
are exact; annealing runs in float64 with caller-side exact re-scoring.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _initial_energy(diag, quad, x):
    e = np.int64(0)
    n = diag.shape[0]
    for a in range(n):
        if x[a]:
            e += diag[a]
            for b in range(a + 1, n):
                if x[b]:
                    e += quad[a, b]
    return e


@njit(cache=True)
def _local_field(diag, quad, x, v):
    local = diag[v]
    n = diag.shape[0]
    for b in range(n):
        if b != v and x[b]:
            local += quad[v, b]
    return local


@njit(cache=True)
def exhaustive_scan(diag, quad, fixed_vals, free_idx, max_states):
    n = diag.shape[0]
    m = free_idx.shape[0]
    x = fixed_vals.astype(np.int8)
    for t in range(m):
        x[free_idx[t]] = 0
    total = np.int64(1) << m

    # Pass 1: Gray-code walk to find the minimum and how often it occurs.
    e = _initial_energy(diag, quad, x)
    best = e
    count = np.int64(1)
    for step in range(1, total):
        bit = 0
        s = step
        while s & 1 == 0:
            s >>= 1
            bit += 1
        v = free_idx[bit]
        local = _local_field(diag, quad, x, v)
        if x[v]:
            e -= local
            x[v] = 0
        else:
            e += local
            x[v] = 1
        if e < best:
            best = e
            count = 1
        elif e == best:
            count += 1

    # Pass 2: identical walk, collecting minimizers up to the cap.
    keep = count if count < max_states else max_states
    states = np.empty((keep, n), dtype=np.int8)
    for t in range(m):
        x[free_idx[t]] = 0
    e = _initial_energy(diag, quad, x)
    filled = 0
    if e == best and filled < keep:
        states[filled] = x
        filled += 1
    for step in range(1, total):
        bit = 0
        s = step
        while s & 1 == 0:
            s >>= 1
            bit += 1
        v = free_idx[bit]
        local = _local_field(diag, quad, x, v)
        if x[v]:
            e -= local
            x[v] = 0
        else:
            e += local
            x[v] = 1
        if e == best and filled < keep:
            states[filled] = x
            filled += 1
    return best, count, states


@njit(cache=True)
def anneal_run(h, jmat, fixed_mask, init_spins, temps, restarts, seed):
    n = h.shape[0]
    sweeps = temps.shape[0]
    best_states = np.empty((restarts, n), dtype=np.int8)
    best_energies = np.empty(restarts, dtype=np.float64)
    for r in range(restarts):
        np.random.seed((seed + 2654435761 * (r + 1)) % 2147483647)
        s = np.empty(n, dtype=np.int8)
        for t in range(n):
            if fixed_mask[t]:
                s[t] = init_spins[t]
            else:
                s[t] = 1 if np.random.random() < 0.5 else -1
        e = 0.0
        for a in range(n):
            e += h[a] * s[a]
            for b in range(a + 1, n):
                e += jmat[a, b] * s[a] * s[b]
        best_e = e
        best_s = s.copy()
        for sw in range(sweeps):
            T = temps[sw]
            for t in range(n):
                if fixed_mask[t]:
                    continue
                local = h[t]
                for b in range(n):
                    local += jmat[t, b] * s[b]
                delta = -2.0 * s[t] * local
                if delta <= 0.0 or np.random.random() < np.exp(-delta / T):
                    s[t] = -s[t]
                    e += delta
                    if e < best_e:
                        best_e = e
                        best_s[:] = s
        best_states[r] = best_s
        best_energies[r] = best_e
    return best_states, best_energies
