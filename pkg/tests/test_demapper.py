import numpy as np
import pytest

from tbicm import constellation as cst
from tbicm import demapper
from tbicm.channel import AlignedObservation
from tbicm.errors import ContractViolationError


def random_obs(rng, n, sigma2=0.2):
    return AlignedObservation(
        y_i=rng.standard_normal(n), y_q=rng.standard_normal(n),
        h_i=rng.random(n) + 0.05, h_q=rng.random(n) + 0.05,
        sigma2=sigma2)


def naive_llr(aligned, table, apriori, q, p):
    """Direct evaluation: distances against every point, a-priori sums
    B[p, j] = S_j - L_p, LLR = min over bit-0 labels minus min over bit-1."""
    m = table.order_bits
    lp = apriori[q]
    yi = aligned.y_i[q] / aligned.h_i[q]
    yq = aligned.y_q[q] / aligned.h_q[q]
    ci = aligned.h_i[q] ** 2 / aligned.sigma2
    cq = aligned.h_q[q] ** 2 / aligned.sigma2
    m0 = np.inf
    m1 = np.inf
    for j in range(2 ** m):
        s = table.points[j]
        a = ci * (yi - s.real) ** 2 + cq * (yq - s.imag) ** 2
        b = float(lp @ table.labels[j]) - lp[p]
        if table.labels[j, p] == 0:
            m0 = min(m0, a - b)
        else:
            m1 = min(m1, a - b)
    return m0 - m1


@pytest.mark.parametrize("m", [2, 4, 6])
def test_matches_naive_evaluation(m):
    rng = np.random.default_rng(m)
    tab = cst.build_constellation(m)
    n = 8
    obs = random_obs(rng, n)
    apriori = rng.standard_normal((n, m))
    res = demapper.demap_frame(obs, tab, apriori)
    for q in range(n):
        for p in range(m):
            assert abs(res.extrinsic[q, p]
                       - naive_llr(obs, tab, apriori, q, p)) < 1e-12


def test_cases_are_numerically_identical():
    rng = np.random.default_rng(5)
    tab = cst.build_constellation(4)
    obs = random_obs(rng, 32)
    apriori = rng.standard_normal((32, 4))
    r1a = demapper.demap_frame(obs, tab, np.zeros((32, 4)),
                               demapper.CaseMode.RECOMPUTE)
    r2a = demapper.demap_frame(obs, tab, np.zeros((32, 4)),
                               demapper.CaseMode.CACHE, first_iteration=True)
    assert np.array_equal(r1a.extrinsic, r2a.extrinsic)
    r1b = demapper.demap_frame(obs, tab, apriori,
                               demapper.CaseMode.RECOMPUTE,
                               first_iteration=False)
    r2b = demapper.demap_frame(obs, tab, apriori, demapper.CaseMode.CACHE,
                               cache=r2a.distance_cache, first_iteration=False)
    assert np.array_equal(r1b.extrinsic, r2b.extrinsic)


def test_cache_reuse_needs_cache():
    rng = np.random.default_rng(6)
    tab = cst.build_constellation(2)
    obs = random_obs(rng, 4)
    with pytest.raises(ContractViolationError):
        demapper.demap_frame(obs, tab, np.zeros((4, 2)),
                             demapper.CaseMode.CACHE, first_iteration=False)


def test_apriori_shifts_output_by_own_llr():
    # d/dL_p of the output is exactly +1: the a-priori of the bit itself
    # rides through the subset-min difference
    rng = np.random.default_rng(7)
    tab = cst.build_constellation(4)
    obs = random_obs(rng, 6)
    base = rng.standard_normal((6, 4))
    r0 = demapper.demap_frame(obs, tab, base).extrinsic
    eps = 0.125
    for p in range(4):
        bumped = base.copy()
        bumped[:, p] += eps
        r1 = demapper.demap_frame(obs, tab, bumped).extrinsic
        d = r1 - r0
        assert np.allclose(d[:, p], eps, atol=1e-9)


def test_apriori_sums_structure():
    # B[p, j] responds to L_p with slope -1 on bit-0 labels and 0 on bit-1
    tab = cst.build_constellation(2)
    a0 = np.zeros((1, 2))
    a1 = np.zeros((1, 2))
    a1[0, 0] = 1.0
    b0 = demapper.apriori_sums(a0, tab)
    b1 = demapper.apriori_sums(a1, tab)
    slope = b1[0, 0] - b0[0, 0]
    assert np.allclose(slope, tab.labels[:, 0] - 1.0)


def test_erased_component_is_ignored():
    rng = np.random.default_rng(8)
    tab = cst.build_constellation(4)
    n = 5
    obs = AlignedObservation(
        y_i=rng.standard_normal(n), y_q=rng.standard_normal(n),
        h_i=rng.random(n) + 0.1, h_q=np.zeros(n), sigma2=0.3)
    res = demapper.demap_frame(obs, tab, np.zeros((n, 4)))
    # flipping the (erased) quadrature observation changes nothing
    obs2 = AlignedObservation(y_i=obs.y_i, y_q=-obs.y_q, h_i=obs.h_i,
                              h_q=obs.h_q, sigma2=0.3)
    res2 = demapper.demap_frame(obs2, tab, np.zeros((n, 4)))
    assert np.array_equal(res.extrinsic, res2.extrinsic)


def test_exact_map_agreement_at_high_snr():
    # min-distance demapping approaches the exact log-sum-exp posterior
    rng = np.random.default_rng(9)
    m = 4
    tab = cst.build_constellation(m)
    bits = rng.integers(0, 2, size=20 * m)
    sym = cst.map_frame(tab, bits)
    obs = AlignedObservation(y_i=sym.real, y_q=sym.imag,
                            h_i=np.ones(20), h_q=np.ones(20), sigma2=0.005)
    res = demapper.demap_frame(obs, tab, np.zeros((20, m)))
    a = demapper.euclidean_distances(obs, tab)
    for q in range(20):
        for p in range(m):
            s0, s1 = tab.subsets[p]
            exact = (np.logaddexp.reduce(-a[q, s1])
                     - np.logaddexp.reduce(-a[q, s0]))   # log P(1)/P(0)
            assert np.sign(res.extrinsic[q, p]) == np.sign(exact) \
                or abs(exact) < 1e-9
