"""SISO Max-Log-MAP demapper for rotated constellations with a-priori input.

Organized as three stages: weighted Euclidean distances, a-priori sums,
and the per-bit minimum finder.  Erased components enter with h = 0 and
therefore contribute nothing to the distance.  Distance caching (CASE 2)
changes memory behaviour only; outputs are identical to recomputation
(CASE 1).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import ContractViolationError, FrameFormatError


class CaseMode(str, Enum):
    RECOMPUTE = "case1"     # Euclidean distances recomputed every iteration
    CACHE = "case2"         # computed once, stored, reused afterwards


@dataclass
class DemapResult:
    extrinsic: np.ndarray       # (N, M) bit LLRs, transmit bit order
    distance_cache: np.ndarray  # (N, 2**M) weighted distances


def euclidean_distances(aligned, table):
    """Weighted squared distances A, shape (N, 2**M)."""
    p_i = np.ascontiguousarray(table.points.real)
    p_q = np.ascontiguousarray(table.points.imag)
    inv_s2 = 1.0 / aligned.sigma2
    ci = np.ascontiguousarray(aligned.h_i * aligned.h_i * inv_s2)
    cq = np.ascontiguousarray(aligned.h_q * aligned.h_q * inv_s2)
    # Zero-forcing equalization per component; h^2/sigma^2 * (y/h - s)^2
    # equals (y - h s)^2 / sigma^2, and an erased component (h = 0) drops
    # out of the metric entirely.
    y_i = np.divide(aligned.y_i, aligned.h_i,
                    out=np.zeros_like(aligned.y_i, dtype=np.float64),
                    where=aligned.h_i != 0.0)
    y_q = np.divide(aligned.y_q, aligned.h_q,
                    out=np.zeros_like(aligned.y_q, dtype=np.float64),
                    where=aligned.h_q != 0.0)
    return kernels.euclid_distances(
        np.ascontiguousarray(y_i), np.ascontiguousarray(y_q),
        ci, cq, p_i, p_q)


def apriori_sums(apriori, table):
    """Per-(bit p, point j) a-priori terms B, shape (N, M, 2**M).

    B[p, j] = sum of a-priori LLRs over bits set in label j, minus the
    a-priori LLR of bit p.
    """
    apriori = np.atleast_2d(np.asarray(apriori, dtype=np.float64))
    label_f = table.labels.astype(np.float64)          # (2**M, M)
    s = apriori @ label_f.T                            # (N, 2**M)
    return s[:, None, :] - apriori[:, :, None]


def demap_symbol(aligned, table, apriori, index=0):
    """Extrinsic LLRs for one symbol; reference per-symbol path."""
    one = type(aligned)(
        y_i=np.atleast_1d(aligned.y_i)[index:index + 1],
        y_q=np.atleast_1d(aligned.y_q)[index:index + 1],
        h_i=np.atleast_1d(aligned.h_i)[index:index + 1],
        h_q=np.atleast_1d(aligned.h_q)[index:index + 1],
        sigma2=aligned.sigma2,
    )
    apriori = np.atleast_2d(np.asarray(apriori, dtype=np.float64))
    a = euclidean_distances(one, table)[0]
    b = apriori_sums(apriori, table)[0]
    m = table.order_bits
    ext = np.empty(m)
    for p in range(m):
        metric = a - b[p]
        ext[p] = (metric[table.subsets[p][0]].min()
                  - metric[table.subsets[p][1]].min())
    return ext


def demap_frame(aligned, table, apriori, case_mode=CaseMode.RECOMPUTE,
                cache=None, first_iteration=True):
    """Demap a frame; apriori is (N, M) or a flat (N*M,) bit-LLR frame."""
    m = table.order_bits
    n = aligned.y_i.size
    apriori = np.asarray(apriori, dtype=np.float64)
    if apriori.ndim == 1:
        if apriori.size != n * m:
            raise FrameFormatError(
                f"a-priori frame of {apriori.size} LLRs != {n}x{m}")
        apriori = apriori.reshape(n, m)
    case_mode = CaseMode(case_mode)

    if case_mode is CaseMode.CACHE and not first_iteration:
        if cache is None:
            raise ContractViolationError(
                "CASE 2 reuse requested without a distance cache")
        a = cache
    else:
        a = euclidean_distances(aligned, table)

    label_f = table.labels.astype(np.float64)
    s = apriori @ label_f.T
    # A - B[p, j] = (A - S)[j] + L_p; the per-bit constant cancels in the
    # difference of the two subset minima.
    sub0 = np.stack([table.subsets[p][0] for p in range(m)]).astype(np.int64)
    sub1 = np.stack([table.subsets[p][1] for p in range(m)]).astype(np.int64)
    ext = kernels.demap_llrs(np.ascontiguousarray(a - s), sub0, sub1)
    return DemapResult(extrinsic=ext, distance_cache=a)
