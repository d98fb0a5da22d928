import numpy as np
import pytest
from scipy import integrate

from tbicm import exit_analysis as ex
from tbicm.errors import ConfigurationError


def j_quadrature(sigma):
    """I(X; L) for L ~ N(sigma^2/2 * x, sigma^2), by numeric integration."""
    if sigma == 0:
        return 0.0
    mu = sigma * sigma / 2.0

    def f(l):
        p = np.exp(-((l - mu) ** 2) / (2 * sigma * sigma)) \
            / np.sqrt(2 * np.pi) / sigma
        return p * np.log2(1 + np.exp(-l))

    lo, hi = mu - 12 * sigma, mu + 12 * sigma
    h, _ = integrate.quad(f, lo, hi, limit=200)
    return 1.0 - h


@pytest.mark.parametrize("sigma", [0.2, 0.8, 1.6363, 2.5, 4.0, 8.0])
def test_j_function_against_quadrature(sigma):
    assert abs(ex.j_function(sigma) - j_quadrature(sigma)) < 5e-3


def test_j_function_limits_and_monotonicity():
    assert ex.j_function(0.0) == 0.0
    assert ex.j_function(10.0) == 1.0
    assert ex.j_function(50.0) == 1.0
    s = np.linspace(0, 12, 400)
    v = ex.j_function(s)
    assert np.all(np.diff(v) >= -1e-12)


@pytest.mark.parametrize("mi", [0.0, 0.1, 0.35, 0.5, 0.75, 0.9, 0.999])
def test_j_inverse_round_trip(mi):
    assert abs(ex.j_function(ex.j_inverse(mi)) - mi) <= 1e-4


def test_j_inverse_domain():
    with pytest.raises(ConfigurationError):
        ex.j_inverse(1.0)
    with pytest.raises(ConfigurationError):
        ex.j_inverse(-0.1)


def test_gen_apriori_is_consistent():
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2, 200_000)
    for mi in (0.3, 0.7):
        llr = ex.gen_apriori(bits, mi, rng)
        sigma = ex.j_inverse(mi)
        x = 2.0 * bits - 1.0
        assert abs(np.mean(llr * x) - sigma * sigma / 2) < 0.02 * sigma ** 2 + 0.01
        assert abs(np.var(llr * x) - sigma * sigma) < 0.03 * sigma ** 2
        assert abs(ex.measure_mi(llr, bits) - mi) < 0.01


def test_measure_mi_extremes():
    bits = np.array([0, 1, 0, 1])
    assert ex.measure_mi(np.zeros(4), bits) == 0.0
    assert ex.measure_mi(1e3 * (2.0 * bits - 1), bits) > 0.999
    # consistently wrong LLRs clamp at zero rather than going negative
    assert ex.measure_mi(-10.0 * (2.0 * bits - 1), bits) == 0.0


def test_symbol_apriori_layout():
    la = np.array([1.0])
    lb = np.array([0.5])
    z = ex.symbol_apriori(la, lb)
    assert np.allclose(z[0], [0.0, 0.5, 1.0, 1.5])


def test_trajectory_staircase():
    ia = np.linspace(0, 1, 11)
    curve = ex.ExitCurve(ia=ia, ie_dec1=np.minimum(ia + 0.3, 1.0),
                         ie_dec2=np.minimum(ia + 0.3, 1.0),
                         ebn0_db=0.0, demap_depth=0)
    pts = ex.trajectory(curve)
    assert pts[0] == (0.0, 0.0)
    ias = [p[0] for p in pts]
    assert all(b > a for a, b in zip(ias[1:], ias[2:]))
    assert pts[-1][1] >= 0.999


def test_trajectory_stops_at_fixed_point():
    ia = np.linspace(0, 1, 11)
    flat = ex.ExitCurve(ia=ia, ie_dec1=np.full(11, 0.4),
                        ie_dec2=np.full(11, 0.4), ebn0_db=0.0, demap_depth=0)
    pts = ex.trajectory(flat)
    assert pts[-1][1] <= 0.4 + 1e-9
    assert len(pts) < 10


def test_tunnel_opening_sign():
    ia = np.linspace(0, 1, 5)
    open_c = ex.ExitCurve(ia=ia, ie_dec1=ia + 0.1, ie_dec2=ia + 0.1,
                          ebn0_db=0.0, demap_depth=0)
    closed = ex.ExitCurve(ia=ia, ie_dec1=ia - 0.1, ie_dec2=ia - 0.1,
                          ebn0_db=0.0, demap_depth=0)
    assert ex.tunnel_opening(open_c) > 0
    assert ex.tunnel_opening(closed) < 0
