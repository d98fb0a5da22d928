"""Gray-labeled square QAM constellations with optional rotation.

Labeling convention: independent binary-reflected Gray codes per axis,
first M/2 bits select the I level, last M/2 bits the Q level.  Points are
scaled to unit average energy before rotation.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, FrameFormatError

SUPPORTED_ORDERS = (2, 4, 6, 8)

# DVB-T2 single-angle choices, degrees, keyed by bits per symbol.
DEFAULT_ROTATION_DEG = {
    2: 29.0,
    4: 16.8,
    6: 8.6,
    8: float(np.degrees(np.arctan(1.0 / 16.0))),
}


def default_rotation_deg(m):
    return DEFAULT_ROTATION_DEG[m]


@dataclass(frozen=True)
class ConstellationTable:
    """Immutable rotated constellation with bit labels and bit subsets."""

    order_bits: int
    points: np.ndarray          # complex128, shape (2**M,)
    labels: np.ndarray          # uint8, shape (2**M, M), MSB first
    rotation_deg: float
    # subsets[p][l] = indices j with labels[j, p] == l
    subsets: tuple = field(repr=False, default=())

    @property
    def size(self):
        return 1 << self.order_bits


def _gray_to_binary(g):
    b = g
    shift = 1
    while (g >> shift) > 0:
        b ^= g >> shift
        shift += 1
    return b


def _axis_levels(m_axis):
    """PAM levels addressed by an m_axis-bit Gray label (as integer)."""
    n = 1 << m_axis
    levels = np.zeros(n)
    for label in range(n):
        k = _gray_to_binary(label)          # position 0..n-1 along the axis
        levels[label] = 2 * k - (n - 1)
    return levels


def build_constellation(m, rotation_deg=None):
    """Build a 2**m-point rotated Gray QAM table with unit average energy."""
    if m not in SUPPORTED_ORDERS:
        raise ConfigurationError(f"unsupported modulation order M={m}")
    if rotation_deg is None:
        rotation_deg = DEFAULT_ROTATION_DEG[m]
    rotation_deg = float(rotation_deg)
    if not 0.0 <= rotation_deg < 90.0:
        raise ConfigurationError(f"rotation_deg {rotation_deg} outside [0, 90)")

    m_axis = m // 2
    levels = _axis_levels(m_axis)
    scale = 1.0 / np.sqrt(2.0 * ((1 << m) - 1) / 3.0)

    n = 1 << m
    points = np.zeros(n, dtype=np.complex128)
    labels = np.zeros((n, m), dtype=np.uint8)
    rot = np.exp(1j * np.deg2rad(rotation_deg))
    for idx in range(n):
        gi = idx >> m_axis          # first m/2 bits -> I axis
        gq = idx & ((1 << m_axis) - 1)
        points[idx] = rot * scale * complex(levels[gi], levels[gq])
        for p in range(m):
            labels[idx, p] = (idx >> (m - 1 - p)) & 1

    subsets = tuple(
        tuple(np.flatnonzero(labels[:, p] == l) for l in (0, 1)) for p in range(m)
    )
    points.setflags(write=False)
    labels.setflags(write=False)
    return ConstellationTable(
        order_bits=m,
        points=points,
        labels=labels,
        rotation_deg=rotation_deg,
        subsets=subsets,
    )


def map_bits(table, bits):
    """Map one M-bit group (MSB first) to its constellation point."""
    bits = np.asarray(bits)
    if bits.shape != (table.order_bits,):
        raise FrameFormatError(
            f"expected {table.order_bits} bits, got shape {bits.shape}"
        )
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return table.points[idx]


def map_frame(table, bits):
    """Map a bit frame (length multiple of M) to a symbol array."""
    bits = np.asarray(bits)
    m = table.order_bits
    if bits.ndim != 1 or bits.size % m != 0:
        raise FrameFormatError(f"bit frame length {bits.size} not a multiple of {m}")
    groups = bits.reshape(-1, m)
    weights = 1 << np.arange(m - 1, -1, -1)
    idx = groups @ weights
    return table.points[idx]
