"""Duo-binary circular turbo code: encoder and Max-Log-MAP SISO decoding.

LLR convention throughout: L = log P(bit=1) / P(bit=0).  Symbol-level
metrics are indexed by d = 2*A + B.  Symbol a-priori/extrinsic arrays are
normalized so z(00) = 0.
"""

import configparser
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import kernels
from .errors import ConfigurationError, NumericError
from .trellis import build_trellis, circulation_state

A_OF_D = np.array([0, 0, 1, 1])
B_OF_D = np.array([0, 1, 0, 1])


def load_default_params():
    """Constituent polynomials and ARP parameters from the shipped data file."""
    cp = configparser.ConfigParser()
    with resources.files("tbicm.data").joinpath("ctc_defaults.ini").open() as f:
        cp.read_file(f)
    sec = cp["turbo"]
    return {
        "feedback": tuple(int(t) for t in sec["feedback_taps"].split(",")),
        "parity_y": tuple(int(t) for t in sec["parity_y_taps"].split(",")),
        "parity_w": tuple(int(t) for t in sec["parity_w_taps"].split(",")),
        "arp_p0": sec.getint("arp_p0"),
        "arp_q": tuple(int(t) for t in sec["arp_q"].split(",")),
    }


def arp_interleaver(k_len, p0=None, q_offsets=None):
    """Almost-regular-permutation over duo-binary symbols.

    read_order[j] = natural index of the symbol decoder 2 processes at
    step j.  Requires k_len to be a multiple of 4 and the parameters to
    yield a bijection (verified).
    """
    if p0 is None or q_offsets is None:
        params = load_default_params()
        p0 = params["arp_p0"] if p0 is None else p0
        q_offsets = params["arp_q"] if q_offsets is None else q_offsets
    if k_len % 4 != 0:
        raise ConfigurationError("ARP interleaver needs symbol count % 4 == 0")
    q = [
        0,
        (q_offsets[0] + k_len // 2) % k_len,
        q_offsets[1] % k_len,
        (q_offsets[2] + k_len // 2) % k_len,
    ]
    j = np.arange(k_len)
    read_order = (p0 * j + np.array(q)[j % 4]) % k_len
    if np.unique(read_order).size != k_len:
        raise ConfigurationError(
            f"ARP parameters p0={p0}, q={q_offsets} are not a bijection "
            f"for K={k_len}"
        )
    return read_order.astype(np.int64)


def _info_to_symbols(info_bits):
    info_bits = np.asarray(info_bits, dtype=np.int64)
    if info_bits.size % 2 != 0 or info_bits.size < 16:
        raise ConfigurationError(
            f"info length {info_bits.size} must be even and >= 16"
        )
    return 2 * info_bits[0::2] + info_bits[1::2]


def _encode_constituent(trellis, d_seq):
    y0, w0, final = kernels.rsc_pass(
        d_seq, trellis.next_state, trellis.out_y, trellis.out_w, 0)
    sc = circulation_state(trellis, final, d_seq.size)
    y, w, end = kernels.rsc_pass(
        d_seq, trellis.next_state, trellis.out_y, trellis.out_w, sc)
    assert end == sc
    return y, w


def encode(trellis, read_order, info_bits):
    """Encode to (sys, par1, par2), each 2K bits (parity pairs Y, W)."""
    d_nat = _info_to_symbols(info_bits)
    if d_nat.size != read_order.size:
        raise ConfigurationError(
            f"frame of {d_nat.size} symbols does not match interleaver "
            f"length {read_order.size}"
        )
    y1, w1 = _encode_constituent(trellis, d_nat)
    y2, w2 = _encode_constituent(trellis, d_nat[read_order])
    k_len = d_nat.size
    sys_bits = np.asarray(info_bits, dtype=np.int64)
    par1 = np.empty(2 * k_len, dtype=np.int64)
    par1[0::2], par1[1::2] = y1, w1
    par2 = np.empty(2 * k_len, dtype=np.int64)
    par2[0::2], par2[1::2] = y2, w2
    return sys_bits, par1, par2


# ---------------------------------------------------------------------------
# SISO decoding

@dataclass
class SisoInput:
    sys_llr: np.ndarray     # (K, 2): LLRs of (A, B)
    par_llr: np.ndarray     # (K, 2): LLRs of (Y, W), zero where punctured
    apriori_z: np.ndarray   # (K, 4), z(00) = 0


@dataclass
class SisoOutput:
    z_ext: np.ndarray               # (K, 4), scaled, z(00) = 0
    soft: np.ndarray                # (K, 4) a-posteriori metrics
    bit_ext_sys: np.ndarray = None  # (K, 2) demapper feedback for (A, B)
    bit_ext_par: np.ndarray = None  # (K, 2) demapper feedback for (Y, W)
    alpha0: np.ndarray = None
    beta_end: np.ndarray = None


def _bitwise_from_symbol(z):
    """Bit LLRs from 4 symbol metrics via pairwise max differences."""
    la = np.maximum(z[:, 3], z[:, 2]) - np.maximum(z[:, 1], z[:, 0])
    lb = np.maximum(z[:, 3], z[:, 1]) - np.maximum(z[:, 2], z[:, 0])
    return np.stack([la, lb], axis=1)


def siso_decode(trellis, inp, sf=0.75, emit_bit_ext=False,
                alpha0=None, beta_end=None):
    """One Max-Log-MAP pass over a circular duo-binary trellis.

    With alpha0/beta_end omitted, the circular boundary metrics are
    estimated by a warm-up pass starting from the all-equal metric.
    """
    sys_llr = np.ascontiguousarray(inp.sys_llr, dtype=np.float64)
    par_llr = np.ascontiguousarray(inp.par_llr, dtype=np.float64)
    z_apr = np.ascontiguousarray(inp.apriori_z, dtype=np.float64)
    if not (np.all(np.isfinite(sys_llr)) and np.all(np.isfinite(par_llr))
            and np.all(np.isfinite(z_apr))):
        raise NumericError("non-finite SISO inputs")
    if not 0.0 < sf <= 1.0:
        raise ConfigurationError(f"scaling factor {sf} outside (0, 1]")

    k_len = sys_llr.shape[0]
    gsys = sys_llr[:, 0:1] * A_OF_D + sys_llr[:, 1:2] * B_OF_D     # (K, 4)
    gd = gsys + z_apr
    d_of_edge = np.arange(32) % 4
    y_edge = trellis.out_y.ravel().astype(np.float64)
    w_edge = trellis.out_w.ravel().astype(np.float64)
    gam = (gd[:, d_of_edge]
           + par_llr[:, 0:1] * y_edge[None, :]
           + par_llr[:, 1:2] * w_edge[None, :])
    gam = np.ascontiguousarray(gam)

    if alpha0 is None or beta_end is None:
        # estimate the circular boundary metrics by wrapping the
        # recursions around the frame until they settle
        a0 = np.zeros(8)
        be = np.zeros(8)
        for _ in range(2):
            wa, wb = kernels.bcjr_alpha_beta(
                gam, trellis.from_state, trellis.to_state,
                trellis.edges_by_to, a0, be)
            a0 = wa[k_len].copy()
            be = wb[0].copy()
        if alpha0 is None:
            alpha0 = a0
        if beta_end is None:
            beta_end = be
    alpha0 = np.ascontiguousarray(alpha0, dtype=np.float64)
    beta_end = np.ascontiguousarray(beta_end, dtype=np.float64)

    alpha, beta = kernels.bcjr_alpha_beta(
        gam, trellis.from_state, trellis.to_state, trellis.edges_by_to,
        alpha0, beta_end)
    so = kernels.bcjr_soft(gam, alpha, beta, trellis.from_state,
                           trellis.to_state)

    z_out = so - gsys - z_apr
    z_out = (z_out - z_out[:, 0:1]) * sf

    out = SisoOutput(z_ext=z_out, soft=so, alpha0=alpha0, beta_end=beta_end)
    if emit_bit_ext:
        # Channel LLR contribution per parity pair 2y + w.
        pp_y = np.array([0.0, 0.0, 1.0, 1.0])
        pp_w = np.array([0.0, 1.0, 0.0, 1.0])
        gpar = par_llr[:, 0:1] * pp_y + par_llr[:, 1:2] * pp_w
        zf, zp = kernels.bcjr_feedback(
            gam, gsys, gpar, alpha, beta, trellis.from_state,
            trellis.to_state, trellis.par_of_edge)
        out.bit_ext_sys = _bitwise_from_symbol(zf)
        out.bit_ext_par = _bitwise_from_symbol(zp)
    return out


class TurboDecoder:
    """Iterative decoder with persistent extrinsic state.

    The symbol extrinsics survive across calls to iterate(), so the
    decoder continues (rather than restarts) when channel LLRs are
    refreshed between demapping iterations.
    """

    def __init__(self, trellis=None, read_order=None, k_len=None, sf=0.75):
        if trellis is None:
            trellis = build_trellis()
        if read_order is None:
            read_order = arp_interleaver(k_len)
        self.trellis = trellis
        self.read_order = read_order
        self.k_len = read_order.size
        self.sf = sf
        self.n_iterations_run = 0
        self._streams = None
        self._out1 = None
        self._out2 = None
        self.reset()

    def reset(self):
        self.z12 = np.zeros((self.k_len, 4))
        self.z21 = np.zeros((self.k_len, 4))
        self.n_iterations_run = 0

    def set_channel(self, mother_llrs):
        """Install channel LLRs, flat mother order [A,B,Y1,W1,Y2,W2] per symbol."""
        mother_llrs = np.asarray(mother_llrs, dtype=np.float64)
        if mother_llrs.size != 6 * self.k_len:
            raise ConfigurationError(
                f"expected {6 * self.k_len} LLRs, got {mother_llrs.size}")
        m = mother_llrs.reshape(self.k_len, 6)
        self._streams = {
            "sys": m[:, 0:2].copy(),
            "par1": m[:, 2:4].copy(),
            "par2": m[:, 4:6].copy(),
            "sys_int": m[self.read_order, 0:2].copy(),
        }

    def iterate(self, emit_bit_ext=False):
        if self._streams is None:
            raise ConfigurationError("set_channel() before iterate()")
        st = self._streams
        inp1 = SisoInput(st["sys"], st["par1"], self.z21)
        self._out1 = siso_decode(self.trellis, inp1, self.sf,
                                 emit_bit_ext=emit_bit_ext)
        self.z12 = self._out1.z_ext
        inp2 = SisoInput(st["sys_int"], st["par2"],
                         self.z12[self.read_order])
        self._out2 = siso_decode(self.trellis, inp2, self.sf,
                                 emit_bit_ext=emit_bit_ext)
        self.z21 = np.empty_like(self._out2.z_ext)
        self.z21[self.read_order] = self._out2.z_ext
        self.n_iterations_run += 1

    def decisions(self):
        soft_nat = np.empty_like(self._out2.soft)
        soft_nat[self.read_order] = self._out2.soft
        d_hat = np.argmax(soft_nat, axis=1)
        bits = np.empty(2 * self.k_len, dtype=np.int64)
        bits[0::2] = d_hat >> 1
        bits[1::2] = d_hat & 1
        return bits

    def bit_extrinsics(self):
        """Demapper a-priori frame, flat mother order (6K,).

        Systematic and first-parity feedback comes from decoder 1, the
        second-parity feedback from decoder 2.  The second parity stream
        is indexed by decoder-2 trellis step (the order it is transmitted
        in), so no reordering applies.
        """
        if self._out1 is None or self._out1.bit_ext_sys is None:
            raise ConfigurationError("iterate(emit_bit_ext=True) first")
        out = np.empty((self.k_len, 6))
        out[:, 0:2] = self._out1.bit_ext_sys
        out[:, 2:4] = self._out1.bit_ext_par
        out[:, 4:6] = self._out2.bit_ext_par
        return out.ravel()


def turbo_decode(sys_llr, par1_llr, par2_llr, n_iter, read_order=None,
                 trellis=None, sf=0.75, emit_bit_ext=False):
    """Convenience wrapper: n_iter full iterations from cold state.

    Inputs are flat per-stream LLR arrays of length 2K (pairs per symbol).
    Returns (decisions, bit_ext or None).
    """
    if n_iter < 1:
        raise ConfigurationError("n_iter must be >= 1")
    sys_llr = np.asarray(sys_llr, dtype=np.float64)
    k_len = sys_llr.size // 2
    if read_order is None:
        read_order = arp_interleaver(k_len)
    dec = TurboDecoder(trellis=trellis, read_order=read_order, sf=sf)
    m = np.empty((k_len, 6))
    m[:, 0:2] = sys_llr.reshape(k_len, 2)
    m[:, 2:4] = np.asarray(par1_llr, dtype=np.float64).reshape(k_len, 2)
    m[:, 4:6] = np.asarray(par2_llr, dtype=np.float64).reshape(k_len, 2)
    dec.set_channel(m.ravel())
    for i in range(n_iter):
        dec.iterate(emit_bit_ext=emit_bit_ext and i == n_iter - 1)
    bit_ext = dec.bit_extrinsics() if emit_bit_ext else None
    return dec.decisions(), bit_ext
