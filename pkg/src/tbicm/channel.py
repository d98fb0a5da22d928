"""Memoryless Rayleigh fast-fading channel with erasures and AWGN.

The effective attenuation stored per symbol is h_eff = h * rho / sqrt(1 - P),
i.e. the erasure energy compensation 1/sqrt(1 - P) is folded into the known
channel coefficient so that the average received symbol energy stays at 1.
Erased symbols have h_eff exactly 0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

CHANNEL_TYPES = ("fast_rayleigh", "block_rayleigh", "awgn")


@dataclass
class ChannelObservation:
    """Received samples in transmit (component-delayed) order."""

    x: np.ndarray          # complex received samples
    h_eff: np.ndarray      # per-symbol effective attenuation, known at rx
    sigma2: float          # noise variance per real dimension (N0/2)
    erasure_prob: float


@dataclass
class AlignedObservation:
    """Per mapped symbol after undoing the Q-component delay.

    The I and Q components of one mapped symbol travelled on different
    channel uses and therefore carry independent fading coefficients.
    """

    y_i: np.ndarray
    y_q: np.ndarray
    h_i: np.ndarray
    h_q: np.ndarray
    sigma2: float


def noise_sigma2(ebn0_db, code_rate, bits_per_symbol):
    """Per-dimension noise variance for a unit-energy constellation."""
    esn0 = 10.0 ** (ebn0_db / 10.0) * code_rate * bits_per_symbol
    return 1.0 / (2.0 * esn0)


def transmit(symbols, ebn0_db, code_rate, bits_per_symbol, rng,
             p_erasure=0.0, channel_type="fast_rayleigh", block_len=64):
    """Pass unit-energy symbols through the configured channel."""
    if not np.isfinite(ebn0_db):
        raise ConfigurationError("ebn0_db must be finite")
    if not 0.0 <= p_erasure < 1.0:
        raise ConfigurationError("p_erasure must be in [0, 1)")
    if channel_type not in CHANNEL_TYPES:
        raise ConfigurationError(f"unknown channel type {channel_type!r}")

    symbols = np.asarray(symbols, dtype=np.complex128)
    n = symbols.size
    sigma2 = noise_sigma2(ebn0_db, code_rate, bits_per_symbol)

    if channel_type == "awgn":
        h = np.ones(n)
    elif channel_type == "fast_rayleigh":
        # unit-power Rayleigh: h = |CN(0,1)|
        h = np.abs(rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
    else:
        n_blocks = (n + block_len - 1) // block_len
        hb = np.abs(
            rng.standard_normal(n_blocks) + 1j * rng.standard_normal(n_blocks)
        ) / np.sqrt(2.0)
        h = np.repeat(hb, block_len)[:n]

    if p_erasure > 0.0:
        rho = rng.random(n) >= p_erasure
        h_eff = h * rho / np.sqrt(1.0 - p_erasure)
    else:
        h_eff = h

    sigma = np.sqrt(sigma2)
    noise = sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    x = h_eff * symbols + noise
    return ChannelObservation(x=x, h_eff=h_eff, sigma2=sigma2,
                              erasure_prob=p_erasure)
