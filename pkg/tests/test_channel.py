import numpy as np
import pytest

from tbicm import channel
from tbicm.errors import ConfigurationError


def test_noise_sigma2_values():
    # Es/N0 = Eb/N0 * Rc * M, sigma^2 = N0/2 with Es = 1
    assert np.isclose(channel.noise_sigma2(0.0, 1.0, 2), 0.25)
    assert np.isclose(channel.noise_sigma2(3.0, 0.5, 2),
                      1.0 / (2.0 * 10 ** 0.3))


def test_awgn_has_unit_gain():
    rng = np.random.default_rng(0)
    obs = channel.transmit(np.ones(100, dtype=complex), 10.0, 0.5, 2, rng,
                           channel_type="awgn")
    assert np.all(obs.h_eff == 1.0)


def test_fast_rayleigh_unit_average_power():
    rng = np.random.default_rng(1)
    obs = channel.transmit(np.ones(200_000, dtype=complex), 10.0, 0.5, 2, rng)
    assert np.isclose(np.mean(obs.h_eff ** 2), 1.0, atol=0.02)


def test_block_fading_constant_within_blocks():
    rng = np.random.default_rng(2)
    obs = channel.transmit(np.ones(256, dtype=complex), 10.0, 0.5, 2, rng,
                           channel_type="block_rayleigh", block_len=64)
    h = obs.h_eff.reshape(4, 64)
    assert np.all(h == h[:, :1])
    assert len(np.unique(h[:, 0])) == 4


def test_erasures_zero_h_and_compensate_energy():
    rng = np.random.default_rng(3)
    p = 0.15
    obs = channel.transmit(np.ones(200_000, dtype=complex), 10.0, 0.5, 2, rng,
                           p_erasure=p)
    erased = obs.h_eff == 0.0
    assert np.isclose(erased.mean(), p, atol=0.01)
    # surviving coefficients are scaled so E[h_eff^2] stays 1
    assert np.isclose(np.mean(obs.h_eff ** 2), 1.0, atol=0.02)


def test_noise_variance_matches_sigma2():
    rng = np.random.default_rng(4)
    obs = channel.transmit(np.zeros(200_000, dtype=complex), 6.0, 0.5, 4, rng,
                           channel_type="awgn")
    assert np.isclose(np.var(obs.x.real), obs.sigma2, rtol=0.02)
    assert np.isclose(np.var(obs.x.imag), obs.sigma2, rtol=0.02)


def test_bad_parameters_rejected():
    rng = np.random.default_rng(0)
    with pytest.raises(ConfigurationError):
        channel.transmit(np.ones(4, dtype=complex), 1.0, 0.5, 2, rng,
                         p_erasure=1.0)
    with pytest.raises(ConfigurationError):
        channel.transmit(np.ones(4, dtype=complex), 1.0, 0.5, 2, rng,
                         channel_type="laplace")
