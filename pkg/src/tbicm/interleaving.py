"""Bit interleaver, rate-matching puncturer and I/Q component delay.

The BICM interleaver is S-random with S = floor(sqrt(n/4)), built by
rejection sampling with restarts.  Puncture patterns are periodic masks
over the six mother-code streams [sysA, sysB, Y1, W1, Y2, W2]; systematic
bits are never punctured and parity keeps alternate between the two
constituent encoders.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .channel import AlignedObservation, ChannelObservation
from .errors import ConfigurationError, FrameFormatError, RetryExhaustedError

log = logging.getLogger(__name__)

MOTHER_STREAMS = 6          # A, B, Y1, W1, Y2, W2 per duo-binary symbol


# ---------------------------------------------------------------------------
# S-random interleaver

@dataclass(frozen=True)
class Permutation:
    n: int
    fwd: np.ndarray
    inv: np.ndarray
    s_param: int

    def save_text(self, path):
        with open(path, "w") as f:
            f.write(f"# permutation n={self.n} s={self.s_param}\n")
            for v in self.fwd:
                f.write(f"{v}\n")

    @staticmethod
    def load_text(path):
        s_param = 0
        vals = []
        with open(path) as f:
            for line in f:
                line = line.strip()
                if line.startswith("#"):
                    for tok in line.split():
                        if tok.startswith("s="):
                            s_param = int(tok[2:])
                    continue
                if line:
                    vals.append(int(line))
        fwd = np.asarray(vals, dtype=np.int64)
        return _make_permutation(fwd, s_param)


def _make_permutation(fwd, s_param):
    n = fwd.size
    inv = np.empty(n, dtype=np.int64)
    inv[fwd] = np.arange(n)
    fwd = fwd.copy()
    fwd.setflags(write=False)
    inv.setflags(write=False)
    return Permutation(n=n, fwd=fwd, inv=inv, s_param=s_param)


def check_s_random(fwd, s_param):
    """Exhaustive O(n*S) verification of the spreading property."""
    n = fwd.size
    for d in range(1, s_param + 1):
        if d >= n:
            break
        if np.any(np.abs(fwd[d:] - fwd[:-d]) < s_param):
            return False
    return True


def gen_s_random(n, seed, max_restarts=10, s_param=None):
    """Build an S-random permutation with S = floor(sqrt(n/4))."""
    if n < 4:
        raise ConfigurationError("interleaver length must be >= 4")
    if s_param is None:
        s_param = int(math.floor(math.sqrt(n / 4.0)))
    rng = np.random.default_rng(seed)
    perm = np.empty(n, dtype=np.int64)
    for _ in range(max_restarts):
        order = rng.permutation(n).astype(np.int64)
        sub_seed = int(rng.integers(1, 2**62))
        if kernels.srandom_attempt(order, s_param, perm, sub_seed):
            assert check_s_random(perm, s_param)
            return _make_permutation(perm, s_param)
    raise RetryExhaustedError(
        f"S-random construction failed for n={n}, S={s_param} "
        f"after {max_restarts} restarts"
    )


def gen_s_random_relaxed(n, seed, max_restarts=10):
    """Like gen_s_random but lowers S by 1 on exhaustion (logged)."""
    s_param = int(math.floor(math.sqrt(n / 4.0)))
    while s_param >= 1:
        try:
            return gen_s_random(n, seed, max_restarts, s_param=s_param)
        except RetryExhaustedError:
            log.warning("S-random build failed at S=%d, retrying with S=%d",
                        s_param, s_param - 1)
            s_param -= 1
    raise RetryExhaustedError(f"could not build any S-random permutation, n={n}")


def interleave(perm, x):
    x = np.asarray(x)
    if x.shape[0] != perm.n:
        raise FrameFormatError(f"length {x.shape[0]} != permutation size {perm.n}")
    out = np.empty_like(x)
    out[perm.fwd] = x
    return out


def deinterleave(perm, y):
    y = np.asarray(y)
    if y.shape[0] != perm.n:
        raise FrameFormatError(f"length {y.shape[0]} != permutation size {perm.n}")
    return y[perm.fwd]


# ---------------------------------------------------------------------------
# Puncturing

@dataclass(frozen=True)
class PuncturePattern:
    rate: Fraction
    period: int                 # in duo-binary symbols
    keep_mask: np.ndarray       # bool, (period, 6)

    @property
    def kept_per_period(self):
        return int(self.keep_mask.sum())

    def save_text(self, path):
        with open(path, "w") as f:
            f.write(f"# puncture rate={self.rate} period={self.period}\n")
            for row in self.keep_mask.astype(int):
                f.write("".join(str(v) for v in row) + "\n")

    @staticmethod
    def load_text(path, rate):
        rows = []
        with open(path) as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                rows.append([c == "1" for c in line])
        mask = np.asarray(rows, dtype=bool)
        return PuncturePattern(rate=Fraction(rate), period=mask.shape[0],
                               keep_mask=mask)


def make_puncture_pattern(rate):
    """Periodic keep-mask for the requested code rate in [1/3, 1].

    Parity keeps are filled in priority order: one Y per symbol alternating
    between the encoders, then the matching W (reaching the rate-1/2
    pattern that alternates whole parity pairs), then the remaining Y and W
    streams down to the rate-1/3 mother code.
    """
    rate = Fraction(rate)
    if not Fraction(1, 3) <= rate <= 1:
        raise ConfigurationError(f"unsupported code rate {rate}")

    # smallest even period with an integer number of kept bits whose
    # partial parity stage splits evenly between the two encoders
    period = 2
    while ((2 * period * rate.denominator) % rate.numerator != 0
           or (2 * period * rate.denominator // rate.numerator
               - 2 * period) % period % 2 != 0):
        period += 2
    kept = 2 * period * rate.denominator // rate.numerator
    n_parity = kept - 2 * period

    mask = np.zeros((period, MOTHER_STREAMS), dtype=bool)
    mask[:, 0] = True
    mask[:, 1] = True

    slots = []
    y_choice = {}
    for t in range(period):             # stage 1: alternating Y
        stream = 2 if t % 2 == 0 else 4
        slots.append((t, stream))
        y_choice[t] = stream
    for t in range(period):             # stage 2: matching W
        slots.append((t, y_choice[t] + 1))
    for t in range(period):             # stage 3: the other Y
        slots.append((t, 6 - y_choice[t]))
    for t in range(period):             # stage 4: remaining W
        slots.append((t, 7 - y_choice[t]))

    # take n_parity slots stage by stage; consecutive slots alternate
    # between the encoders, keeping a partial stage balanced
    remaining = n_parity
    for stage in range(4):
        stage_slots = slots[stage * period:(stage + 1) * period]
        take = min(remaining, period)
        if take == 0:
            break
        for t in range(take):
            sym, stream = stage_slots[t]
            mask[sym, stream] = True
        remaining -= take

    assert int(mask.sum()) == kept
    mask.setflags(write=False)
    return PuncturePattern(rate=rate, period=period, keep_mask=mask)


def _flat_keep(pattern, n_symbols):
    if n_symbols % pattern.period != 0:
        raise FrameFormatError(
            f"frame of {n_symbols} symbols not a multiple of pattern "
            f"period {pattern.period}"
        )
    reps = n_symbols // pattern.period
    return np.tile(pattern.keep_mask, (reps, 1)).ravel()


def puncture(pattern, codeword):
    """Keep the selected mother-code bits.

    codeword: flat array of length 6*K in symbol-major stream order
    [A, B, Y1, W1, Y2, W2].
    """
    codeword = np.asarray(codeword)
    if codeword.size % MOTHER_STREAMS != 0:
        raise FrameFormatError("mother codeword length not a multiple of 6")
    keep = _flat_keep(pattern, codeword.size // MOTHER_STREAMS)
    return codeword[keep]


def depuncture(pattern, llrs, n_symbols):
    """Expand kept-position LLRs to the full mother length, 0 elsewhere."""
    llrs = np.asarray(llrs, dtype=np.float64)
    keep = _flat_keep(pattern, n_symbols)
    if llrs.size != int(keep.sum()):
        raise FrameFormatError(
            f"expected {int(keep.sum())} kept LLRs, got {llrs.size}"
        )
    out = np.zeros(keep.size)
    out[keep] = llrs
    return out


def assemble_mother(sys_bits, par1, par2):
    """Interleave the three encoder outputs into symbol-major mother order."""
    sys_bits = np.asarray(sys_bits)
    par1 = np.asarray(par1)
    par2 = np.asarray(par2)
    k = sys_bits.size // 2
    out = np.empty(6 * k, dtype=sys_bits.dtype)
    out[0::6] = sys_bits[0::2]
    out[1::6] = sys_bits[1::2]
    out[2::6] = par1[0::2]
    out[3::6] = par1[1::2]
    out[4::6] = par2[0::2]
    out[5::6] = par2[1::2]
    return out


def split_mother(flat):
    """Inverse of assemble_mother: six per-symbol streams of length K."""
    flat = np.asarray(flat)
    return tuple(flat[i::6] for i in range(6))


# ---------------------------------------------------------------------------
# Signal-space component delay

def q_delay(symbols):
    """Delay the Q component by one symbol (cyclic within the frame)."""
    symbols = np.asarray(symbols, dtype=np.complex128)
    if symbols.size == 0:
        raise FrameFormatError("empty symbol stream")
    return symbols.real + 1j * np.roll(symbols.imag, 1)


def q_undelay(obj):
    """Undo q_delay.

    For a plain symbol array, returns the re-paired symbols.  For a
    ChannelObservation, returns an AlignedObservation carrying the fading
    coefficient each component actually experienced: the Q component of
    mapped symbol q travelled on channel use q+1 (cyclic).
    """
    if isinstance(obj, ChannelObservation):
        y_i = obj.x.real
        y_q = np.roll(obj.x.imag, -1)
        h_i = obj.h_eff
        h_q = np.roll(obj.h_eff, -1)
        return AlignedObservation(y_i=y_i, y_q=y_q, h_i=h_i, h_q=h_q,
                                  sigma2=obj.sigma2)
    symbols = np.asarray(obj, dtype=np.complex128)
    if symbols.size == 0:
        raise FrameFormatError("empty symbol stream")
    return symbols.real + 1j * np.roll(symbols.imag, -1)
