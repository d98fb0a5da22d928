"""Receiver orchestration: iteration schedules, the demap/decode loop and
Monte-Carlo BER/FER campaigns.

Schedule grammar: "<k>IDem" (k demapping iterations, one turbo iteration
each), "<k>IDem_<m>EIDec" (plus m trailing turbo iterations), or
"TBICM-SSD:<n>" (no demapper feedback, n turbo iterations).
"""

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import channel, constellation, demapper, interleaving, turbo
from .errors import ConfigurationError, FrameFormatError

_PI2_CACHE = {}

_SCHED_RE = re.compile(r"^(\d+)IDem(?:_(\d+)EIDec)?$")
_BASELINE_RE = re.compile(r"^TBICM-SSD:(\d+)$")


@dataclass(frozen=True)
class Schedule:
    n_demap: int
    dec_per_demap: int
    extra_dec: int
    feedback_enabled: bool
    name: str

    @property
    def total_dec(self):
        return self.n_demap * self.dec_per_demap + self.extra_dec


def parse_schedule(text):
    text = text.strip()
    m = _SCHED_RE.match(text)
    if m:
        n_demap = int(m.group(1))
        extra = int(m.group(2)) if m.group(2) else 0
        if n_demap < 1:
            raise ConfigurationError(f"schedule {text!r}: need >= 1 demapping iteration")
        return Schedule(n_demap=n_demap, dec_per_demap=1, extra_dec=extra,
                        feedback_enabled=True, name=text)
    m = _BASELINE_RE.match(text)
    if m:
        n_dec = int(m.group(1))
        if n_dec < 1:
            raise ConfigurationError(f"schedule {text!r}: need >= 1 decode iteration")
        return Schedule(n_demap=1, dec_per_demap=n_dec, extra_dec=0,
                        feedback_enabled=False, name=text)
    raise ConfigurationError(
        f"cannot parse schedule {text!r}; expected '<k>IDem', "
        "'<k>IDem_<m>EIDec' or 'TBICM-SSD:<n>'"
    )


@dataclass
class BerPoint:
    schedule: str
    ebn0_db: float
    bit_errors: int
    frame_errors: int
    frames_run: int
    info_bits: int
    seed: int

    @property
    def ber(self):
        total = self.frames_run * self.info_bits
        return self.bit_errors / total if total else 0.0

    @property
    def fer(self):
        return self.frame_errors / self.frames_run if self.frames_run else 0.0


class LinkSystem:
    """All transmit/receive components for one configuration."""

    def __init__(self, modulation_bits, code_rate, info_bits,
                 rotation_deg=None, erasure_p=0.0,
                 channel_type="fast_rayleigh", block_len=64,
                 sf=0.75, case_mode=demapper.CaseMode.CACHE,
                 interleaver_seed=0x5EED, cold_restart=False,
                 ssd_delay=True):
        if info_bits % 2 != 0:
            raise ConfigurationError("info_bits must be even (duo-binary)")
        self.m = modulation_bits
        self.code_rate = Fraction(code_rate)
        self.info_bits = info_bits
        self.k_len = info_bits // 2
        self.erasure_p = erasure_p
        self.channel_type = channel_type
        self.block_len = block_len
        self.sf = sf
        self.case_mode = demapper.CaseMode(case_mode)
        self.cold_restart = cold_restart
        self.ssd_delay = ssd_delay

        if rotation_deg == "off":
            rotation_deg = 0.0
        self.table = constellation.build_constellation(self.m, rotation_deg)

        n_coded = info_bits * self.code_rate.denominator
        if n_coded % self.code_rate.numerator != 0:
            raise ConfigurationError(
                f"info_bits={info_bits} incompatible with rate {self.code_rate}")
        self.n_coded = n_coded // self.code_rate.numerator
        if self.n_coded % self.m != 0:
            raise ConfigurationError(
                f"{self.n_coded} coded bits do not fill {self.m}-bit symbols")
        self.n_symbols = self.n_coded // self.m

        self.trellis = turbo.build_trellis()
        self.read_order = turbo.arp_interleaver(self.k_len)
        self.pattern = interleaving.make_puncture_pattern(self.code_rate)
        if self.k_len % self.pattern.period != 0:
            raise ConfigurationError(
                f"{self.k_len} symbols not a multiple of puncture period "
                f"{self.pattern.period}")
        key = (self.n_coded, interleaver_seed)
        if key not in _PI2_CACHE:
            _PI2_CACHE[key] = interleaving.gen_s_random_relaxed(*key)
        self.pi2 = _PI2_CACHE[key]
        self.counters = {"demap_calls": 0, "turbo_iterations": 0}

    # -- transmit side ----------------------------------------------------

    def encode_frame(self, info):
        sys_bits, par1, par2 = turbo.encode(self.trellis, self.read_order, info)
        mother = interleaving.assemble_mother(sys_bits, par1, par2)
        kept = interleaving.puncture(self.pattern, mother)
        return interleaving.interleave(self.pi2, kept)

    def modulate(self, coded_interleaved):
        symbols = constellation.map_frame(self.table, coded_interleaved)
        if self.ssd_delay:
            symbols = interleaving.q_delay(symbols)
        return symbols

    def transmit_frame(self, info, ebn0_db, rng):
        symbols = self.modulate(self.encode_frame(info))
        obs = channel.transmit(symbols, ebn0_db, float(self.code_rate),
                               self.m, rng, p_erasure=self.erasure_p,
                               channel_type=self.channel_type,
                               block_len=self.block_len)
        if self.ssd_delay:
            return interleaving.q_undelay(obs)
        return channel.AlignedObservation(
            y_i=obs.x.real, y_q=obs.x.imag, h_i=obs.h_eff, h_q=obs.h_eff,
            sigma2=obs.sigma2)

    # -- receive side -----------------------------------------------------

    def run_receiver(self, aligned, schedule):
        if aligned.y_i.size != self.n_symbols:
            raise FrameFormatError(
                f"observation of {aligned.y_i.size} symbols, "
                f"expected {self.n_symbols}")
        dec = turbo.TurboDecoder(trellis=self.trellis,
                                 read_order=self.read_order, sf=self.sf)
        apriori_tx = np.zeros(self.n_coded)
        cache = None
        for it in range(schedule.n_demap):
            res = demapper.demap_frame(
                aligned, self.table, apriori_tx, self.case_mode,
                cache=cache, first_iteration=it == 0)
            cache = res.distance_cache
            self.counters["demap_calls"] += 1

            # The subset-min difference carries the fed-back a-priori of
            # the bit itself; remove it so the decoder never sees its own
            # feedback again.
            dem_out = res.extrinsic.ravel() - apriori_tx
            llr_kept = interleaving.deinterleave(self.pi2, dem_out)
            mother_llrs = interleaving.depuncture(self.pattern, llr_kept,
                                                  self.k_len)
            if self.cold_restart:
                dec.reset()
            dec.set_channel(mother_llrs)
            want_fb = schedule.feedback_enabled and it + 1 < schedule.n_demap
            for j in range(schedule.dec_per_demap):
                dec.iterate(emit_bit_ext=want_fb
                            and j == schedule.dec_per_demap - 1)
                self.counters["turbo_iterations"] += 1
            if want_fb:
                fb = dec.bit_extrinsics()
                apriori_tx = interleaving.interleave(
                    self.pi2, interleaving.puncture(self.pattern, fb))
        for _ in range(schedule.extra_dec):
            dec.iterate()
            self.counters["turbo_iterations"] += 1
        return dec.decisions()

    def run_frame(self, schedule, ebn0_db, rng):
        """One end-to-end frame; returns (bit_errors, frame_error)."""
        info = rng.integers(0, 2, size=self.info_bits)
        aligned = self.transmit_frame(info, ebn0_db, rng)
        decided = self.run_receiver(aligned, schedule)
        nerr = int(np.count_nonzero(decided != info))
        return nerr, int(nerr > 0)


def _frame_batch(system, schedule, ebn0_db, seed, sched_idx, point_idx,
                 first_frame, n_frames):
    bit_err = 0
    frame_err = 0
    for f in range(first_frame, first_frame + n_frames):
        rng = np.random.default_rng([seed, sched_idx, point_idx, f])
        be, fe = system.run_frame(schedule, ebn0_db, rng)
        bit_err += be
        frame_err += fe
    return bit_err, frame_err


def run_ber_campaign(system, schedules, ebn0_grid, seed=1,
                     max_frames=100_000, target_frame_errors=100,
                     workers=1, batch_size=64):
    """Monte-Carlo sweep; deterministic for a fixed seed (any worker count)."""
    if isinstance(schedules, (str, Schedule)):
        schedules = [schedules]
    schedules = [parse_schedule(s) if isinstance(s, str) else s
                 for s in schedules]
    points = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for si, sched in enumerate(schedules):
            for pi, ebn0 in enumerate(ebn0_grid):
                bit_err = frame_err = frames = 0
                while frames < max_frames and frame_err < target_frame_errors:
                    todo = min(batch_size, max_frames - frames)
                    if pool is None:
                        be, fe = _frame_batch(system, sched, ebn0, seed,
                                              si, pi, frames, todo)
                    else:
                        per = (todo + workers - 1) // workers
                        futs = []
                        start = frames
                        while start < frames + todo:
                            n = min(per, frames + todo - start)
                            futs.append(pool.submit(
                                _frame_batch, system, sched, ebn0, seed,
                                si, pi, start, n))
                            start += n
                        be = fe = 0
                        for fut in futs:
                            b, f2 = fut.result()
                            be += b
                            fe += f2
                    bit_err += be
                    frame_err += fe
                    frames += todo
                points.append(BerPoint(
                    schedule=sched.name, ebn0_db=float(ebn0),
                    bit_errors=bit_err, frame_errors=frame_err,
                    frames_run=frames, info_bits=system.info_bits,
                    seed=seed))
    finally:
        if pool is not None:
            pool.shutdown()
    return points
