"""Analytical operation/memory-access cost model for the iterative receiver.

Costs are normalized to 2-input 1-bit full adders (Add(1,1) units) for
arithmetic and to bits for memory traffic.  The model reproduces the
per-unit inventories of the SISO demapper (Euclidean distance, a-priori
adder, minimum finder) and the SISO decoder (branch metric, state metric,
extrinsic), and evaluates the saving of dropping two demapping iterations
while keeping the total number of turbo-decode iterations.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigurationError

# Typical fixed-point word lengths (bits); costing assumptions only, the
# simulator itself runs in double precision.
QUANTIZATION_BITS = {
    "received_component": 10,
    "fading_over_variance": 8,
    "constellation_component": 12,
    "euclidean_distance": 19,
    "decoder_input_llr": 5,
    "branch_metric": 10,
    "state_metric": 10,
    "symbol_extrinsic": 10,
    "demap_feedback_llr": 8,
}

DEMAPPER_UNITS = ("euclid", "apriori", "minfind")
DECODER_UNITS = ("branch", "state", "extrinsic")
METRICS = ("arith", "load", "store")


@dataclass(frozen=True)
class OpCount:
    kind: str           # ADD | SUB | MUL | LOAD | STORE
    n1: int             # operand width (word width for LOAD/STORE)
    n2: int = 0
    count: float = 1.0


@dataclass
class CostTriple:
    arith: float = 0.0
    load_bits: float = 0.0
    store_bits: float = 0.0

    def __add__(self, other):
        return CostTriple(self.arith + other.arith,
                          self.load_bits + other.load_bits,
                          self.store_bits + other.store_bits)

    def __mul__(self, k):
        return CostTriple(self.arith * k, self.load_bits * k,
                          self.store_bits * k)

    __rmul__ = __mul__

    def metric(self, name):
        return {"arith": self.arith, "load": self.load_bits,
                "store": self.store_bits}[name]


def normalize(op):
    """Cost of one OpCount in Add(1,1) units / bits."""
    if op.kind in ("LOAD", "STORE"):
        bits = op.n1 * op.count
        return CostTriple(load_bits=bits) if op.kind == "LOAD" \
            else CostTriple(store_bits=bits)
    n1, n2 = min(op.n1, op.n2), max(op.n1, op.n2)
    if op.kind == "ADD":
        unit = 0.5 * (n1 + n2 - 1)
    elif op.kind == "SUB":
        unit = 0.5 * (n1 + n2)
    elif op.kind == "MUL":
        unit = (n1 - 1) * (n2 - 1) + 1 - 0.5 * n1
    else:
        raise ConfigurationError(f"unknown op kind {op.kind}")
    return CostTriple(arith=unit * op.count)


def normalize_ops(ops):
    total = CostTriple()
    for op in ops:
        total = total + normalize(op)
    return total


def _round_half_up(x):
    return math.floor(x + 0.5)


def demapper_unit_ops(m, unit):
    """Op inventory per modulated symbol per demapping iteration."""
    if m not in (2, 4, 6, 8):
        raise ConfigurationError(f"unsupported M={m}")
    n = 1 << m
    if unit == "euclid":
        return [
            OpCount("ADD", 18, 18, n),
            OpCount("SUB", 8, 10, 2 * n),
            OpCount("MUL", 8, 8, 2 * n),
            OpCount("MUL", 8, 10, 2 * n),
            OpCount("LOAD", 10, count=2),
            OpCount("LOAD", 8, count=1 + n),
        ]
    if unit == "apriori":
        if m == 2:
            return [
                OpCount("SUB", 11, 19, m * (n - 2)),
                OpCount("LOAD", 8, count=m),
                OpCount("LOAD", m, count=n),
            ]
        e2 = _round_half_up((m - 1) / 2)
        e4 = _round_half_up((m - 1) / 4)
        e8 = _round_half_up((m - 1) / 8)
        return [
            OpCount("ADD", 8, 8, (n - 2) * e2),
            OpCount("ADD", 9, 9, (n - 2) * e4),
            OpCount("ADD", 10, 10, (n - 2) * e8),
            OpCount("SUB", 8, 11, (n - 2) * m),
            OpCount("SUB", 11, 19, (n - 2) * m),
            OpCount("LOAD", 8, count=m),
            OpCount("LOAD", m, count=n),
        ]
    if unit == "minfind":
        return [
            OpCount("SUB", 8, 8, m),
            OpCount("SUB", 8, 19, m * n),
            OpCount("STORE", 8, count=m),
        ]
    raise ConfigurationError(f"unknown demapper unit {unit!r}")


def decoder_unit_ops(unit):
    """Op inventory per coded symbol per SISO per turbo-decode iteration."""
    if unit == "branch":
        return [
            OpCount("ADD", 5, 5, 4),
            OpCount("ADD", 5, 10, 38),
            OpCount("SUB", 5, 5, 4),
            OpCount("LOAD", 5, count=8),
            OpCount("LOAD", 10, count=6),
        ]
    if unit == "state":
        return [
            OpCount("ADD", 10, 10, 64),
            OpCount("SUB", 9, 9, 48),
            OpCount("STORE", 10, count=8),
        ]
    if unit == "extrinsic":
        return [
            OpCount("ADD", 10, 10, 32),
            OpCount("SUB", 9, 9, 32),
            OpCount("SUB", 10, 10, 9),
            OpCount("MUL", 4, 10, 3),
            OpCount("LOAD", 10, count=8),
            OpCount("STORE", 10, count=5),
        ]
    raise ConfigurationError(f"unknown decoder unit {unit!r}")


def demapper_base_cost(m):
    total = CostTriple()
    for unit in DEMAPPER_UNITS:
        total = total + normalize_ops(demapper_unit_ops(m, unit))
    return total


def euclid_cost(m):
    return normalize_ops(demapper_unit_ops(m, "euclid"))


def decoder_cost_per_siso():
    total = CostTriple()
    for unit in DECODER_UNITS:
        total = total + normalize_ops(decoder_unit_ops(unit))
    return total


def decoder_cost_per_iteration():
    """Both SISO decoders, per coded symbol per turbo iteration."""
    return 2 * decoder_cost_per_siso()


def demapper_cost(m, case_mode, iteration_index):
    """Per modulated symbol for the given demapping iteration (1-based)."""
    if iteration_index < 1:
        raise ConfigurationError("iteration_index is 1-based")
    base = demapper_base_cost(m)
    if str(case_mode).endswith("1") or case_mode in ("case1", "CASE1"):
        return base
    cache_bits = QUANTIZATION_BITS["euclidean_distance"] * (1 << m)
    if iteration_index == 1:
        return base + CostTriple(store_bits=cache_bits)
    euc = euclid_cost(m)
    return CostTriple(
        arith=base.arith - euc.arith,
        load_bits=base.load_bits - euc.load_bits + cache_bits,
        store_bits=base.store_bits,
    )


def coded_per_modulated(m, code_rate):
    """Duo-binary coded symbols per modulated symbol."""
    return m * Fraction(code_rate) / 2


@dataclass
class GainResult:
    m: int
    code_rate: Fraction
    n_it: int
    case_mode: str
    arith: float
    load: float
    store: float

    def metric(self, name):
        return {"arith": self.arith, "load": self.load,
                "store": self.store}[name]


def gain(m, code_rate, n_it=6, case_mode="case1"):
    """Fractional saving of dropping two late demapping iterations.

    Ratio of two later-iteration demapper executions to the full receiver
    workload of n_it demapping + n_it turbo-decode iterations, per metric.
    """
    if n_it < 3:
        raise ConfigurationError("n_it must be >= 3 (two iterations removed)")
    code_rate = Fraction(code_rate)
    ratio = float(coded_per_modulated(m, code_rate))
    f_dec = decoder_cost_per_iteration()
    d_costs = [demapper_cost(m, case_mode, i) for i in range(1, n_it + 1)]
    d_later = d_costs[-1]
    out = {}
    for metric in METRICS:
        denom = (sum(d.metric(metric) for d in d_costs)
                 + n_it * f_dec.metric(metric) * ratio)
        out[metric] = 2 * d_later.metric(metric) / denom
    return GainResult(m=m, code_rate=code_rate, n_it=n_it,
                      case_mode="case2" if str(case_mode).endswith("2") else "case1",
                      arith=out["arith"], load=out["load"], store=out["store"])


def emit_gain_table(n_it=6, rates=(Fraction(1, 2), Fraction(6, 7)),
                    cases=("case1", "case2")):
    """All gain cells: (M, rate, case) -> GainResult."""
    rows = []
    for case in cases:
        for rate in rates:
            for m in (2, 4, 6, 8):
                rows.append(gain(m, rate, n_it, case))
    return rows


def emit_unit_table():
    """Normalized per-unit costs: (block, unit, M) -> CostTriple."""
    rows = []
    for m in (2, 4, 6, 8):
        for unit in DEMAPPER_UNITS:
            rows.append(("demapper", unit, m,
                         normalize_ops(demapper_unit_ops(m, unit))))
    for unit in DECODER_UNITS:
        rows.append(("decoder", unit, None,
                     normalize_ops(decoder_unit_ops(unit))))
    return rows
