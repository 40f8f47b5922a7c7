"""Pure-numpy solver kernels: the fallback backend.

Same contracts as the jitted kernels: exhaustive enumeration works on
integer-scaled coefficients so energies are exact, annealing works in
float64 and leaves exact re-scoring to the caller.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 16


def _free_codes_to_states(base, free_idx, codes):
    m = len(free_idx)
    X = np.repeat(base[None, :], len(codes), axis=0)
    for t in range(m):
        X[:, free_idx[t]] = ((codes >> (m - 1 - t)) & 1).astype(np.int8)
    return X


def _chunk_energies(X, diag, upper):
    X64 = X.astype(np.int64)
    return X64 @ diag + ((X64 @ upper) * X64).sum(axis=1)


def exhaustive_scan(diag, quad, fixed_vals, free_idx, max_states):
    """Scan all assignments of the free bits; exact integer energies.

    Returns (best energy, total minimizer count, minimizer states); the
    states array holds at most max_states rows.
    """
    n = diag.shape[0]
    m = free_idx.shape[0]
    upper = np.triu(quad, 1)
    base = fixed_vals.astype(np.int8).copy()
    base[free_idx] = 0
    total = 1 << m

    best = None
    count = 0
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        E = _chunk_energies(_free_codes_to_states(base, free_idx, codes), diag, upper)
        lo = int(E.min())
        if best is None or lo < best:
            best = lo
            count = int((E == lo).sum())
        elif lo == best:
            count += int((E == best).sum())

    keep = min(count, max_states)
    states = np.empty((keep, n), dtype=np.int8)
    filled = 0
    for start in range(0, total, _CHUNK):
        if filled >= keep:
            break
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        X = _free_codes_to_states(base, free_idx, codes)
        E = _chunk_energies(X, diag, upper)
        hits = X[E == best]
        take = min(len(hits), keep - filled)
        states[filled : filled + take] = hits[:take]
        filled += take
    return best, count, states


def anneal_run(h, jmat, fixed_mask, init_spins, temps, restarts, seed):
    """Metropolis single-flip annealing, vectorized across restarts.

    Returns (best states int8[restarts, n], best energies float64[restarts]),
    tracking each restart's best-seen configuration.
    """
    rng = np.random.default_rng(seed)
    n = h.shape[0]
    S = rng.choice(np.array([-1, 1], dtype=np.int8), size=(restarts, n))
    S[:, fixed_mask] = init_spins[fixed_mask]
    Sf = S.astype(np.float64)
    E = Sf @ h + 0.5 * ((Sf @ jmat) * Sf).sum(axis=1)
    best_S = S.copy()
    best_E = E.copy()
    free = np.flatnonzero(~fixed_mask)
    for T in temps:
        for t in free:
            local = h[t] + S.astype(np.float64) @ jmat[t]
            delta = -2.0 * S[:, t] * local
            exparg = np.where(delta > 0.0, -delta / T, 0.0)
            accept = (delta <= 0.0) | (rng.random(restarts) < np.exp(exparg))
            S[accept, t] = -S[accept, t]
            E = np.where(accept, E + delta, E)
            improved = E < best_E
            best_E = np.where(improved, E, best_E)
            best_S[improved] = S[improved]
    return best_S, best_E
