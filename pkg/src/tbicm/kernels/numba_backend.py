"""Numba-jitted hot kernels.  Same contracts as numpy_backend."""

import numpy as np
from numba import njit

NEG_INF = -np.inf


@njit(cache=True)
def bcjr_alpha_beta(gam, from_s, to_s, edges_by_to, alpha0, beta_end):
    k_len = gam.shape[0]
    alpha = np.empty((k_len + 1, 8))
    beta = np.empty((k_len + 1, 8))
    alpha[0] = alpha0
    beta[k_len] = beta_end
    for k in range(k_len):
        mx = NEG_INF
        for s in range(8):
            best = NEG_INF
            for j in range(4):
                e = edges_by_to[s, j]
                v = alpha[k, from_s[e]] + gam[k, e]
                if v > best:
                    best = v
            alpha[k + 1, s] = best
            if best > mx:
                mx = best
        for s in range(8):
            alpha[k + 1, s] -= mx
    for k in range(k_len - 1, -1, -1):
        mx = NEG_INF
        for s in range(8):
            best = NEG_INF
            for d in range(4):
                e = 4 * s + d
                v = beta[k + 1, to_s[e]] + gam[k, e]
                if v > best:
                    best = v
            beta[k, s] = best
            if best > mx:
                mx = best
        for s in range(8):
            beta[k, s] -= mx
    return alpha, beta


@njit(cache=True)
def bcjr_soft(gam, alpha, beta, from_s, to_s):
    k_len = gam.shape[0]
    so = np.full((k_len, 4), NEG_INF)
    for k in range(k_len):
        for e in range(32):
            d = e & 3
            v = alpha[k, from_s[e]] + gam[k, e] + beta[k + 1, to_s[e]]
            if v > so[k, d]:
                so[k, d] = v
    return so


@njit(cache=True)
def bcjr_feedback(gam, gsys, gpar, alpha, beta, from_s, to_s, par_of_edge):
    k_len = gam.shape[0]
    zf = np.full((k_len, 4), NEG_INF)
    zp = np.full((k_len, 4), NEG_INF)
    for k in range(k_len):
        for e in range(32):
            d = e & 3
            v = alpha[k, from_s[e]] + gam[k, e] + beta[k + 1, to_s[e]]
            if v > zf[k, d]:
                zf[k, d] = v
            pp = par_of_edge[e]
            if v > zp[k, pp]:
                zp[k, pp] = v
        for d in range(4):
            zf[k, d] -= gsys[k, d]
            zp[k, d] -= gpar[k, d]
    return zf, zp


@njit(cache=True)
def euclid_distances(yi, yq, ci, cq, p_i, p_q):
    n = yi.shape[0]
    npts = p_i.shape[0]
    out = np.empty((n, npts))
    for q in range(n):
        for j in range(npts):
            di = yi[q] - p_i[j]
            dq = yq[q] - p_q[j]
            out[q, j] = ci[q] * di * di + cq[q] * dq * dq
    return out


@njit(cache=True)
def demap_llrs(dist_minus_sums, sub0, sub1):
    n = dist_minus_sums.shape[0]
    m = sub0.shape[0]
    half = sub0.shape[1]
    ext = np.empty((n, m))
    for q in range(n):
        for p in range(m):
            m0 = NEG_INF
            m1 = NEG_INF
            first = True
            for j in range(half):
                v0 = dist_minus_sums[q, sub0[p, j]]
                v1 = dist_minus_sums[q, sub1[p, j]]
                if first:
                    m0 = v0
                    m1 = v1
                    first = False
                else:
                    if v0 < m0:
                        m0 = v0
                    if v1 < m1:
                        m1 = v1
            ext[q, p] = m0 - m1
    return ext


@njit(cache=True)
def srandom_attempt(order, s_param, perm, seed, repair_tries=4000):
    n = order.shape[0]
    pool = order.copy()
    npool = n
    state = np.uint64(2 * seed + 1)
    i = 0
    while i < n:
        placed = False
        kmax = s_param if s_param < i else i
        for c in range(npool):
            v = pool[c]
            ok = True
            for k in range(1, kmax + 1):
                diff = v - perm[i - k]
                if diff < 0:
                    diff = -diff
                if diff < s_param:
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
                state = state * np.uint64(6364136223846793005) \
                    + np.uint64(1442695040888963407)
                denom = i - s_param if i - s_param > 1 else 1
                j = int(state >> np.uint64(33)) % denom
                state = state * np.uint64(6364136223846793005) \
                    + np.uint64(1442695040888963407)
                c = int(state >> np.uint64(33)) % npool
                vj = perm[j]
                v = pool[c]
                ok = True
                for k in range(1, kmax + 1):       # vj at position i
                    diff = vj - perm[i - k]
                    if diff < 0:
                        diff = -diff
                    if diff < s_param:
                        ok = False
                        break
                if ok:                             # v at position j
                    lo = j - s_param if j - s_param > 0 else 0
                    hi = j + s_param if j + s_param < i - 1 else i - 1
                    for k in range(lo, hi + 1):
                        if k == j:
                            continue
                        diff = v - perm[k]
                        if diff < 0:
                            diff = -diff
                        if diff < s_param:
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


@njit(cache=True)
def rsc_pass(d_seq, next_state, out_y, out_w, start):
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
