"""8-state duo-binary recursive systematic convolutional constituent code.

Circuit (DVB-RCS / WiMax CTC family): state registers (s1, s2, s3), input
couple (A, B), feedback polynomial 1+D+D^3, parity polynomials
Y = 1+D^2+D^3 and W = 1+D^3.  The second input bit B is additionally
injected at the inputs of registers 2 and 3.  Tail-biting (circular)
termination; the circulation state is solved from the GF(2) zero-input
state-update matrix.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

DEFAULT_FEEDBACK = (0, 1, 3)     # 1 + D + D^3
DEFAULT_PARITY_Y = (0, 2, 3)     # 1 + D^2 + D^3
DEFAULT_PARITY_W = (0, 3)        # 1 + D^3


@dataclass(frozen=True)
class TrellisDef:
    n_states: int
    next_state: np.ndarray      # (8, 4)
    out_y: np.ndarray           # (8, 4)
    out_w: np.ndarray           # (8, 4)
    from_state: np.ndarray      # (32,) edge e = 4*state + d
    to_state: np.ndarray        # (32,)
    par_of_edge: np.ndarray     # (32,) 2*y + w
    edges_by_to: np.ndarray     # (8, 4) edge ids entering each state
    zero_input_matrix: np.ndarray  # (3, 3) GF(2) state update with d=00
    feedback: tuple = field(default=DEFAULT_FEEDBACK)
    parity_y: tuple = field(default=DEFAULT_PARITY_Y)
    parity_w: tuple = field(default=DEFAULT_PARITY_W)


def _poly_out(x, s1, s2, s3, taps):
    regs = (x, s1, s2, s3)
    out = 0
    for t in taps:
        out ^= regs[t]
    return out


def build_trellis(feedback=DEFAULT_FEEDBACK, parity_y=DEFAULT_PARITY_Y,
                  parity_w=DEFAULT_PARITY_W):
    if 0 in feedback:
        feedback = tuple(t for t in feedback if t != 0)
    if any(t not in (1, 2, 3) for t in feedback):
        raise ConfigurationError(f"bad feedback taps {feedback}")

    next_state = np.zeros((8, 4), dtype=np.int64)
    out_y = np.zeros((8, 4), dtype=np.int64)
    out_w = np.zeros((8, 4), dtype=np.int64)
    for s in range(8):
        s1, s2, s3 = (s >> 2) & 1, (s >> 1) & 1, s & 1
        for d in range(4):
            a, b = (d >> 1) & 1, d & 1
            x = a ^ b ^ _poly_out(0, s1, s2, s3, feedback)
            out_y[s, d] = _poly_out(x, s1, s2, s3, parity_y)
            out_w[s, d] = _poly_out(x, s1, s2, s3, parity_w)
            ns1, ns2, ns3 = x, s1 ^ b, s2 ^ b
            next_state[s, d] = (ns1 << 2) | (ns2 << 1) | ns3

    from_state = np.repeat(np.arange(8), 4).astype(np.int64)
    to_state = next_state.ravel()
    par_of_edge = (2 * out_y.ravel() + out_w.ravel()).astype(np.int64)

    edges_by_to = np.zeros((8, 4), dtype=np.int64)
    counts = np.zeros(8, dtype=np.int64)
    for e in range(32):
        t = to_state[e]
        edges_by_to[t, counts[t]] = e
        counts[t] += 1
    if not np.all(counts == 4):
        raise ConfigurationError("trellis is not 4-regular; bad polynomials")

    # zero-input state update, rows = new (s1, s2, s3) as GF(2) combinations
    zim = np.zeros((3, 3), dtype=np.int64)
    fb_taps = set(feedback)
    zim[0, :] = [1 if i + 1 in fb_taps else 0 for i in range(3)]
    zim[1, 0] = 1
    zim[2, 1] = 1

    for arr in (next_state, out_y, out_w, from_state, to_state,
                par_of_edge, edges_by_to, zim):
        arr.setflags(write=False)
    return TrellisDef(
        n_states=8, next_state=next_state, out_y=out_y, out_w=out_w,
        from_state=from_state, to_state=to_state, par_of_edge=par_of_edge,
        edges_by_to=edges_by_to, zero_input_matrix=zim,
        feedback=tuple(sorted(feedback)), parity_y=tuple(parity_y),
        parity_w=tuple(parity_w),
    )


def _mat_pow_gf2(mat, n):
    result = np.eye(mat.shape[0], dtype=np.int64)
    base = mat.copy()
    while n > 0:
        if n & 1:
            result = (result @ base) % 2
        base = (base @ base) % 2
        n >>= 1
    return result


def _state_to_vec(s):
    return np.array([(s >> 2) & 1, (s >> 1) & 1, s & 1], dtype=np.int64)


def _vec_to_state(v):
    return int((v[0] << 2) | (v[1] << 1) | v[2])


def circulation_state(trellis, zero_state_final, k_len):
    """Tail-biting start state Sc with Sc = A^K . Sc + Z over GF(2)."""
    m = _mat_pow_gf2(trellis.zero_input_matrix, k_len)
    z = _state_to_vec(zero_state_final)
    for cand in range(8):
        v = _state_to_vec(cand)
        if np.array_equal((m @ v + z) % 2, v):
            return cand
    raise ConfigurationError(
        f"no circulation state for frame of {k_len} symbols "
        "(frame length hits the period of the zero-input state cycle)"
    )
