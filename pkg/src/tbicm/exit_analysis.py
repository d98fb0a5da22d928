"""Extrinsic-information transfer analysis of the demapper/decoder pair.

Mutual information between equiprobable bits and Gaussian-consistent LLRs
is handled through the usual three-segment polynomial/exponential fit of
J(sigma); the inverse is obtained by bracketing the forward fit so the
round trip is consistent to well below 1e-4.

A transfer point feeds both constituent decoders synthesized a-priori
information at mutual information IA, runs the demapper and one SISO pass
per decoder (optionally refreshing the demapper with decoder feedback),
and measures the mutual information of each decoder's extrinsic output.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import demapper, interleaving, turbo
from .errors import ConfigurationError

_SIGMA_STAR = 1.6363
_A_J1, _B_J1, _C_J1 = -0.0421061, 0.209252, -0.00640081
_A_J2, _B_J2, _C_J2, _D_J2 = 0.00181491, -0.142675, -0.0822054, 0.0549608


def j_function(sigma):
    """Mutual information of a consistent Gaussian LLR with std dev sigma."""
    sigma = np.asarray(sigma, dtype=np.float64)
    low = ((_A_J1 * sigma + _B_J1) * sigma + _C_J1) * sigma
    high = 1.0 - np.exp(((_A_J2 * sigma + _B_J2) * sigma + _C_J2) * sigma
                        + _D_J2)
    out = np.where(sigma <= _SIGMA_STAR, low, high)
    out = np.where(sigma >= 10.0, 1.0, out)
    return np.clip(out, 0.0, 1.0)[()]


def j_inverse(mi):
    """Sigma such that j_function(sigma) == mi (0 <= mi < 1)."""
    if not 0.0 <= mi < 1.0:
        raise ConfigurationError(f"mutual information {mi} outside [0, 1)")
    if mi == 0.0:
        return 0.0
    return brentq(lambda s: j_function(s) - mi, 1e-12, 10.0, xtol=1e-12)


def gen_apriori(bits, mi, rng):
    """Consistent Gaussian LLRs carrying mutual information mi about bits."""
    bits = np.asarray(bits)
    if mi <= 0.0:
        return np.zeros(bits.size)
    sigma = j_inverse(mi)
    x = 2.0 * bits - 1.0
    return 0.5 * sigma * sigma * x + sigma * rng.standard_normal(bits.size)


def measure_mi(llr, bits):
    """Empirical mutual information between bits and their LLRs."""
    x = 2.0 * np.asarray(bits, dtype=np.float64) - 1.0
    h = np.mean(np.logaddexp(0.0, -np.asarray(llr) * x)) / np.log(2.0)
    return float(np.clip(1.0 - h, 0.0, 1.0))


def symbol_apriori(la, lb):
    """Symbol metrics z(d) from bit LLRs; z(00) = 0, d = 2A + B."""
    z = np.zeros((la.size, 4))
    z[:, 1] = lb
    z[:, 2] = la
    z[:, 3] = la + lb
    return z


@dataclass
class ExitCurve:
    ia: np.ndarray
    ie_dec1: np.ndarray
    ie_dec2: np.ndarray
    ebn0_db: float
    demap_depth: int
    label: str = ""

    @property
    def ie_mean(self):
        return 0.5 * (self.ie_dec1 + self.ie_dec2)


def tunnel_opening(curve):
    """Worst-case vertical gap IE - IA over the grid (negative = closed)."""
    return float(np.min(curve.ie_mean - curve.ia))


def _run_transfer(system, aligned, z1, z2, demap_depth):
    """demap_depth feedback refreshes; returns both decoders' SISO outputs."""
    k_len = system.k_len
    ro = system.read_order
    apriori_tx = np.zeros(system.n_coded)
    cache = None
    out1 = out2 = None
    for it in range(demap_depth + 1):
        res = demapper.demap_frame(
            aligned, system.table, apriori_tx, system.case_mode,
            cache=cache, first_iteration=it == 0)
        cache = res.distance_cache
        # Strip each bit's own fed-back a-priori from the demapper output
        # (same convention as the BER receiver loop).
        kept = interleaving.deinterleave(system.pi2,
                                         res.extrinsic.ravel() - apriori_tx)
        mother = interleaving.depuncture(system.pattern, kept,
                                         k_len).reshape(k_len, 6)
        want_fb = it < demap_depth
        out1 = turbo.siso_decode(
            system.trellis,
            turbo.SisoInput(mother[:, 0:2], mother[:, 2:4], z1),
            system.sf, emit_bit_ext=want_fb)
        out2 = turbo.siso_decode(
            system.trellis,
            turbo.SisoInput(mother[ro, 0:2], mother[:, 4:6], z2),
            system.sf, emit_bit_ext=want_fb)
        if want_fb:
            fb = np.empty((k_len, 6))
            fb[:, 0:2] = out1.bit_ext_sys
            fb[:, 2:4] = out1.bit_ext_par
            fb[:, 4:6] = out2.bit_ext_par
            apriori_tx = interleaving.interleave(
                system.pi2, interleaving.puncture(system.pattern, fb.ravel()))
    return out1, out2


def decoder_transfer(system, ebn0_db, ia_grid, demap_depth=0, n_frames=1,
                     seed=1, label=""):
    """Measured transfer curve of the demapper/decoder front end.

    demap_depth counts demapper refreshes from decoder feedback: depth 0
    is feed-forward demapping, depth d re-demaps d times with the SISO
    bit extrinsics as a-priori before the output is measured.
    """
    ia_grid = np.asarray(ia_grid, dtype=np.float64)
    ie1 = np.zeros(ia_grid.size)
    ie2 = np.zeros(ia_grid.size)
    ro = system.read_order
    for pi, ia in enumerate(ia_grid):
        m1 = []
        m2 = []
        for f in range(n_frames):
            rng = np.random.default_rng([seed, pi, f])
            info = rng.integers(0, 2, size=system.info_bits)
            aligned = system.transmit_frame(info, ebn0_db, rng)
            a_bits, b_bits = info[0::2], info[1::2]
            z1 = symbol_apriori(gen_apriori(a_bits, ia, rng),
                                gen_apriori(b_bits, ia, rng))
            z2 = symbol_apriori(gen_apriori(a_bits[ro], ia, rng),
                                gen_apriori(b_bits[ro], ia, rng))
            out1, out2 = _run_transfer(system, aligned, z1, z2, demap_depth)
            l1 = turbo._bitwise_from_symbol(out1.z_ext)
            l2 = turbo._bitwise_from_symbol(out2.z_ext)
            ref1 = np.stack([a_bits, b_bits], axis=1)
            m1.append(measure_mi(l1.ravel(), ref1.ravel()))
            m2.append(measure_mi(l2.ravel(), ref1[ro].ravel()))
        ie1[pi] = np.mean(m1)
        ie2[pi] = np.mean(m2)
    return ExitCurve(ia=ia_grid, ie_dec1=ie1, ie_dec2=ie2,
                     ebn0_db=float(ebn0_db), demap_depth=demap_depth,
                     label=label)


def trajectory(curve, max_steps=64, tol=1e-4, target=0.999):
    """Staircase iteration along a measured transfer curve.

    Returns the visited (IA, IE) corners; stops at a fixed point or once
    the mutual information reaches target.
    """
    pts = [(0.0, 0.0)]
    ia = 0.0
    ie_fn = [lambda x: float(np.interp(x, curve.ia, curve.ie_dec1)),
             lambda x: float(np.interp(x, curve.ia, curve.ie_dec2))]
    for step in range(max_steps):
        ie = ie_fn[step % 2](ia)
        if ie <= ia + tol:
            break
        pts.append((ia, ie))
        ia = ie
        if ia >= target:
            break
    return pts
