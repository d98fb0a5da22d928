"""Pure-numpy reference implementations of the hot kernels.

Selected when numba is unavailable or TBICM_NO_NUMBA=1.  Numerically
equivalent to the numba backend (asserted in tests).
"""

import numpy as np

NEG_INF = -np.inf


def bcjr_alpha_beta(gam, from_s, to_s, edges_by_to, alpha0, beta_end):
    """Max-log forward/backward recursions over a duo-binary 8-state trellis.

    gam: (K, 32) branch metrics, edge e = 4*state + input_symbol.
    Returns alpha (K+1, 8), beta (K+1, 8), max-normalized per step.
    """
    k_len = gam.shape[0]
    alpha = np.empty((k_len + 1, 8))
    beta = np.empty((k_len + 1, 8))
    alpha[0] = alpha0
    beta[k_len] = beta_end
    for k in range(k_len):
        vals = alpha[k, from_s] + gam[k]
        nxt = vals[edges_by_to].max(axis=1)
        alpha[k + 1] = nxt - nxt.max()
    for k in range(k_len - 1, -1, -1):
        vals = beta[k + 1, to_s] + gam[k]
        prv = vals.reshape(8, 4).max(axis=1)   # edges grouped by from-state
        beta[k] = prv - prv.max()
    return alpha, beta


def bcjr_soft(gam, alpha, beta, from_s, to_s):
    """A-posteriori symbol metrics so(d), shape (K, 4)."""
    k_len = gam.shape[0]
    vals = alpha[:k_len, :][:, from_s] + gam + beta[1:, :][:, to_s]
    return vals.reshape(k_len, 8, 4).max(axis=1)


def bcjr_feedback(gam, gsys, gpar, alpha, beta, from_s, to_s, par_of_edge):
    """Demapper-feedback metrics: channel intrinsic of the fed-back bits
    excluded, everything else (a-priori and the other streams) kept.

    gam: (K, 32) full branch metrics; gsys/gpar: (K, 4) channel LLR
    contribution per input symbol / per parity pair 2*y + w.  Returns
    zf (K, 4) grouped by input symbol and zp (K, 4) by parity pair.
    """
    k_len = gam.shape[0]
    vals = alpha[:k_len, :][:, from_s] + gam + beta[1:, :][:, to_s]
    zf = vals.reshape(k_len, 8, 4).max(axis=1) - gsys
    zp = np.full((k_len, 4), NEG_INF)
    for pp in range(4):
        sel = par_of_edge == pp
        if sel.any():
            zp[:, pp] = vals[:, sel].max(axis=1) - gpar[:, pp]
    return zf, zp


def euclid_distances(yi, yq, ci, cq, p_i, p_q):
    """Weighted squared distances, shape (N, 2**M)."""
    di = yi[:, None] - p_i[None, :]
    dq = yq[:, None] - p_q[None, :]
    return ci[:, None] * di * di + cq[:, None] * dq * dq


def demap_llrs(dist_minus_sums, sub0, sub1):
    """min over bit-0 subset minus min over bit-1 subset, per bit."""
    n = dist_minus_sums.shape[0]
    m = sub0.shape[0]
    ext = np.empty((n, m))
    for p in range(m):
        ext[:, p] = (
            dist_minus_sums[:, sub0[p]].min(axis=1)
            - dist_minus_sums[:, sub1[p]].min(axis=1)
        )
    return ext


def srandom_attempt(order, s_param, perm, seed, repair_tries=4000):
    """Greedy S-random placement with swap repair.

    order: candidate values in random order; perm: output buffer (len n).
    When no pool value fits a position, a random earlier placement is
    moved there instead and a random pool value takes its old slot,
    provided both spreading constraints hold (random choices come from a
    deterministic LCG seeded with seed).  Returns True on success.
    """
    n = order.shape[0]
    pool = order.copy()
    npool = n
    state = (2 * seed + 1) & 0xFFFFFFFFFFFFFFFF
    i = 0
    while i < n:
        placed = False
        kmax = min(s_param, i)
        for c in range(npool):
            v = pool[c]
            ok = True
            for k in range(1, kmax + 1):
                if abs(v - perm[i - k]) < s_param:
                    ok = False
                    break
            if ok:
                perm[i] = v
                pool[c] = pool[npool - 1]
                npool -= 1
                placed = True
                break
        if not placed:
            for _t in range(repair_tries):
                state = (state * 6364136223846793005
                         + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
                j = (state >> 33) % max(i - s_param, 1)
                state = (state * 6364136223846793005
                         + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
                c = (state >> 33) % npool
                vj = perm[j]
                v = pool[c]
                ok = True
                for k in range(1, kmax + 1):       # vj at position i
                    if abs(vj - perm[i - k]) < s_param:
                        ok = False
                        break
                if ok:                             # v at position j
                    lo = max(j - s_param, 0)
                    hi = min(j + s_param, i - 1)
                    for k in range(lo, hi + 1):
                        if k != j and abs(v - perm[k]) < s_param:
                            ok = False
                            break
                if ok:
                    perm[i] = vj
                    perm[j] = v
                    pool[c] = pool[npool - 1]
                    npool -= 1
                    placed = True
                    break
            if not placed:
                return False
        i += 1
    return True


def rsc_pass(d_seq, next_state, out_y, out_w, start):
    """Run the constituent encoder over a symbol sequence."""
    k_len = d_seq.shape[0]
    y = np.empty(k_len, dtype=np.int64)
    w = np.empty(k_len, dtype=np.int64)
    s = start
    for k in range(k_len):
        d = d_seq[k]
        y[k] = out_y[s, d]
        w[k] = out_w[s, d]
        s = next_state[s, d]
    return y, w, s
