"""Run configuration: flat key=value files with section headers."""

import configparser
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError

MODULATION_BITS = {"QPSK": 2, "QAM16": 4, "QAM64": 6, "QAM256": 8}
CHANNELS = ("fast_rayleigh", "block_rayleigh", "awgn")


@dataclass
class RunConfig:
    modulation: str = "QPSK"
    code_rate: Fraction = Fraction(1, 2)
    rotation_deg: object = None         # float, None (modulation default), "off"
    erasure_p: float = 0.0
    channel: str = "fast_rayleigh"
    block_len: int = 64
    info_bits: int = 1536
    sf: float = 0.75
    case_mode: str = "case2"
    schedules: tuple = ("6IDem",)
    ebn0_start: float = 0.0
    ebn0_stop: float = 10.0
    ebn0_step: float = 1.0
    seed: int = 1
    workers: int = 1
    max_frames: int = 100_000
    target_frame_errors: int = 100
    out_path: str = "results.csv"
    # EXIT-specific
    ia_points: int = 11
    demap_depths: tuple = (0,)
    rotation_variants: str = "on"       # on | off | both
    exit_ebn0_db: float = 22.0
    exit_frames: int = 1
    raw: dict = field(default_factory=dict)

    def validate(self):
        if self.modulation not in MODULATION_BITS:
            raise ConfigurationError(f"modulation: unknown {self.modulation!r}")
        if self.channel not in CHANNELS:
            raise ConfigurationError(f"channel: unknown {self.channel!r}")
        if self.info_bits % 2 != 0:
            raise ConfigurationError("info_bits: must be even")
        if not self.schedules:
            raise ConfigurationError("schedules: at least one required")
        if not 0.0 <= self.erasure_p < 1.0:
            raise ConfigurationError("erasure_p: outside [0, 1)")
        if self.ebn0_grid().size == 0:
            raise ConfigurationError("ebn0 grid: empty")
        if self.rotation_variants not in ("on", "off", "both"):
            raise ConfigurationError(
                f"rotation_variants: unknown {self.rotation_variants!r}")
        return self

    @property
    def modulation_bits(self):
        return MODULATION_BITS[self.modulation]

    def ebn0_grid(self):
        n = int(np.floor((self.ebn0_stop - self.ebn0_start)
                         / self.ebn0_step + 1e-9)) + 1
        return self.ebn0_start + self.ebn0_step * np.arange(max(n, 0))

    def header_lines(self):
        """Echo of the effective configuration, for CSV metadata."""
        items = [
            ("modulation", self.modulation),
            ("code_rate", str(self.code_rate)),
            ("rotation_deg", self.rotation_deg
             if self.rotation_deg is not None else "default"),
            ("erasure_p", self.erasure_p),
            ("channel", self.channel),
            ("block_len", self.block_len),
            ("info_bits", self.info_bits),
            ("sf", self.sf),
            ("case_mode", self.case_mode),
            ("schedules", ",".join(self.schedules)),
            ("ebn0_start", self.ebn0_start),
            ("ebn0_stop", self.ebn0_stop),
            ("ebn0_step", self.ebn0_step),
            ("seed", self.seed),
            ("workers", self.workers),
            ("max_frames", self.max_frames),
            ("target_frame_errors", self.target_frame_errors),
            ("ia_points", self.ia_points),
            ("demap_depths", ",".join(str(d) for d in self.demap_depths)),
            ("rotation_variants", self.rotation_variants),
            ("exit_ebn0_db", self.exit_ebn0_db),
            ("exit_frames", self.exit_frames),
        ]
        return [f"# {k} = {v}" for k, v in items]


def _parse_rotation(text):
    text = text.strip()
    if text.lower() == "off":
        return "off"
    if text.lower() in ("", "default"):
        return None
    return float(text)


def load_config(path):
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(path)
    if not read:
        raise ConfigurationError(f"config file not found: {path}")
    cfg = RunConfig()
    cfg.raw = {s: dict(cp[s]) for s in cp.sections()}
    try:
        if cp.has_section("system"):
            s = cp["system"]
            cfg.modulation = s.get("modulation", cfg.modulation).strip()
            if "code_rate" in s:
                cfg.code_rate = Fraction(s["code_rate"].strip())
            if "rotation_deg" in s:
                cfg.rotation_deg = _parse_rotation(s["rotation_deg"])
            cfg.erasure_p = s.getfloat("erasure_p", cfg.erasure_p)
            cfg.channel = s.get("channel", cfg.channel).strip()
            cfg.block_len = s.getint("block_len", cfg.block_len)
            cfg.info_bits = s.getint("info_bits", cfg.info_bits)
            cfg.sf = s.getfloat("sf", cfg.sf)
            cfg.case_mode = s.get("case_mode", cfg.case_mode).strip()
        if cp.has_section("run"):
            r = cp["run"]
            if "schedules" in r:
                cfg.schedules = tuple(
                    t.strip() for t in r["schedules"].split(",") if t.strip())
            cfg.ebn0_start = r.getfloat("ebn0_start", cfg.ebn0_start)
            cfg.ebn0_stop = r.getfloat("ebn0_stop", cfg.ebn0_stop)
            cfg.ebn0_step = r.getfloat("ebn0_step", cfg.ebn0_step)
            cfg.seed = r.getint("seed", cfg.seed)
            cfg.workers = r.getint("workers", cfg.workers)
            cfg.max_frames = r.getint("max_frames", cfg.max_frames)
            cfg.target_frame_errors = r.getint("target_frame_errors",
                                               cfg.target_frame_errors)
            cfg.out_path = r.get("out", cfg.out_path).strip()
        if cp.has_section("exit"):
            e = cp["exit"]
            cfg.ia_points = e.getint("ia_points", cfg.ia_points)
            if "demap_depths" in e:
                cfg.demap_depths = tuple(
                    int(t) for t in e["demap_depths"].split(",") if t.strip())
            cfg.rotation_variants = e.get("rotation",
                                          cfg.rotation_variants).strip()
            cfg.exit_ebn0_db = e.getfloat("ebn0_db", cfg.exit_ebn0_db)
            cfg.exit_frames = e.getint("n_frames", cfg.exit_frames)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"bad value in {path}: {exc}") from exc
    return cfg.validate()
