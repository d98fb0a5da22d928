import numpy as np
import pytest

from tbicm import scheduler
from tbicm.errors import ConfigurationError


def test_parse_schedules():
    s = scheduler.parse_schedule("6IDem")
    assert (s.n_demap, s.extra_dec, s.feedback_enabled) == (6, 0, True)
    assert s.total_dec == 6
    s = scheduler.parse_schedule("4IDem_2EIDec")
    assert (s.n_demap, s.extra_dec) == (4, 2)
    assert s.total_dec == 6
    s = scheduler.parse_schedule("TBICM-SSD:8")
    assert not s.feedback_enabled
    assert (s.n_demap, s.dec_per_demap, s.total_dec) == (1, 8, 8)


@pytest.mark.parametrize("bad", ["", "IDem", "0IDem", "6idem", "TBICM-SSD:0",
                                 "4IDem_EIDec"])
def test_parse_rejects(bad):
    with pytest.raises(ConfigurationError):
        scheduler.parse_schedule(bad)


@pytest.fixture(scope="module")
def qpsk():
    return scheduler.LinkSystem(modulation_bits=2, code_rate="1/2",
                                info_bits=256)


def test_iteration_counters(qpsk):
    rng = np.random.default_rng(0)
    info = rng.integers(0, 2, 256)
    aligned = qpsk.transmit_frame(info, 6.0, rng)
    for text, demaps, decs in [("3IDem_2EIDec", 3, 5), ("TBICM-SSD:4", 1, 4),
                               ("1IDem", 1, 1)]:
        before = dict(qpsk.counters)
        qpsk.run_receiver(aligned, scheduler.parse_schedule(text))
        assert qpsk.counters["demap_calls"] - before["demap_calls"] == demaps
        assert qpsk.counters["turbo_iterations"] - before["turbo_iterations"] \
            == decs


def test_single_demap_equals_baseline(qpsk):
    # without a second demapping there is nothing to feed back, so
    # 1IDem_5EIDec and TBICM-SSD:6 run the identical computation
    rng = np.random.default_rng(1)
    info = rng.integers(0, 2, 256)
    aligned = qpsk.transmit_frame(info, 2.0, rng)
    a = qpsk.run_receiver(aligned, scheduler.parse_schedule("1IDem_5EIDec"))
    b = qpsk.run_receiver(aligned, scheduler.parse_schedule("TBICM-SSD:6"))
    assert np.array_equal(a, b)


def test_noiseless_frame_decodes(qpsk):
    rng = np.random.default_rng(2)
    info = rng.integers(0, 2, 256)
    aligned = qpsk.transmit_frame(info, 30.0, rng)
    for text in ("TBICM-SSD:2", "2IDem", "4IDem_2EIDec"):
        out = qpsk.run_receiver(aligned, scheduler.parse_schedule(text))
        assert np.array_equal(out, info)


def test_frame_runs_are_deterministic(qpsk):
    sched = scheduler.parse_schedule("2IDem")
    a = qpsk.run_frame(sched, 4.0, np.random.default_rng([7, 0]))
    b = qpsk.run_frame(sched, 4.0, np.random.default_rng([7, 0]))
    assert a == b


def test_campaign_batching_deterministic(qpsk):
    pts1 = scheduler.run_ber_campaign(qpsk, "2IDem", [2.0], seed=5,
                                      max_frames=8, batch_size=4)
    pts2 = scheduler.run_ber_campaign(qpsk, "2IDem", [2.0], seed=5,
                                      max_frames=8, batch_size=2)
    assert pts1[0].bit_errors == pts2[0].bit_errors
    assert pts1[0].frames_run == pts2[0].frames_run == 8
    assert pts1[0].ber == pts1[0].bit_errors / (8 * 256)


def test_campaign_stops_on_frame_errors(qpsk):
    pts = scheduler.run_ber_campaign(qpsk, "1IDem", [-2.0], seed=1,
                                     max_frames=1000, target_frame_errors=3,
                                     batch_size=2)
    assert pts[0].frame_errors >= 3
    assert pts[0].frames_run < 1000


def test_rotation_off_string():
    sysoff = scheduler.LinkSystem(modulation_bits=2, code_rate="1/2",
                                  info_bits=256, rotation_deg="off")
    assert sysoff.table.rotation_deg == 0.0


def test_incompatible_frame_sizes_rejected():
    with pytest.raises(ConfigurationError):
        scheduler.LinkSystem(modulation_bits=2, code_rate="1/2",
                             info_bits=255)
    with pytest.raises(ConfigurationError):
        scheduler.LinkSystem(modulation_bits=8, code_rate="1/2",
                             info_bits=258)  # coded bits not divisible by 8
