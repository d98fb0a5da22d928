import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tbicm import interleaving as il
from tbicm.channel import ChannelObservation
from tbicm.errors import FrameFormatError


def test_s_random_property_holds():
    p = il.gen_s_random_relaxed(1024, 3)
    assert il.check_s_random(p.fwd, p.s_param)
    # exhaustive re-check, independent of the vectorized helper
    for i in range(p.n):
        for j in range(max(0, i - p.s_param), i):
            assert abs(p.fwd[i] - p.fwd[j]) >= p.s_param


def test_s_random_is_permutation():
    p = il.gen_s_random_relaxed(600, 1)
    assert sorted(p.fwd) == list(range(600))
    assert np.all(p.fwd[p.inv] == np.arange(600))


def test_interleave_round_trip():
    p = il.gen_s_random_relaxed(512, 2)
    x = np.random.default_rng(0).standard_normal(512)
    assert np.array_equal(il.deinterleave(p, il.interleave(p, x)), x)


def test_permutation_text_round_trip(tmp_path):
    p = il.gen_s_random_relaxed(256, 9)
    f = tmp_path / "perm.txt"
    p.save_text(f)
    q = il.Permutation.load_text(f)
    assert q.s_param == p.s_param
    assert np.array_equal(q.fwd, p.fwd)


def test_interleave_length_checked():
    p = il.gen_s_random_relaxed(128, 0)
    with pytest.raises(FrameFormatError):
        il.interleave(p, np.zeros(127))


# ---------------------------------------------------------------------------

@pytest.mark.parametrize("rate,period,parity", [
    ("1/3", 2, 8), ("1/2", 2, 4), ("2/3", 2, 2), ("4/5", 4, 2), ("6/7", 6, 2),
])
def test_pattern_rates(rate, period, parity):
    p = il.make_puncture_pattern(rate)
    assert p.period == period
    m = p.keep_mask
    assert np.all(m[:, 0]) and np.all(m[:, 1])     # systematic untouched
    assert int(m[:, 2:].sum()) == parity
    # both encoders keep the same amount of parity
    assert m[:, 2:4].sum() == m[:, 4:6].sum()


def test_rate_half_alternates_parity_pairs():
    m = il.make_puncture_pattern("1/2").keep_mask.astype(int)
    assert m.tolist() == [[1, 1, 1, 1, 0, 0], [1, 1, 0, 0, 1, 1]]


def test_puncture_depuncture_round_trip():
    p = il.make_puncture_pattern("2/3")
    rng = np.random.default_rng(1)
    k = 30
    mother = rng.standard_normal(6 * k)
    kept = il.puncture(p, mother)
    assert kept.size == int(round(6 * k * (1 / 3) / (2 / 3) * 1))  # 2K/R bits
    back = il.depuncture(p, kept, k)
    keep = np.tile(p.keep_mask, (k // p.period, 1)).ravel()
    assert np.array_equal(back[keep], mother[keep])
    assert np.all(back[~keep] == 0.0)


def test_pattern_text_round_trip(tmp_path):
    p = il.make_puncture_pattern("4/5")
    f = tmp_path / "pat.txt"
    p.save_text(f)
    q = il.PuncturePattern.load_text(f, "4/5")
    assert np.array_equal(q.keep_mask, p.keep_mask)


def test_assemble_split_round_trip():
    rng = np.random.default_rng(2)
    s = rng.integers(0, 2, 20)
    p1 = rng.integers(0, 2, 20)
    p2 = rng.integers(0, 2, 20)
    flat = il.assemble_mother(s, p1, p2)
    a, b, y1, w1, y2, w2 = il.split_mother(flat)
    assert np.array_equal(a, s[0::2]) and np.array_equal(b, s[1::2])
    assert np.array_equal(y1, p1[0::2]) and np.array_equal(w1, p1[1::2])
    assert np.array_equal(y2, p2[0::2]) and np.array_equal(w2, p2[1::2])


# ---------------------------------------------------------------------------

@given(st.integers(2, 64), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_q_delay_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    s = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    assert np.allclose(il.q_undelay(il.q_delay(s)), s)


def test_q_delay_shifts_quadrature_only():
    s = np.arange(4) + 1j * np.arange(10, 14)
    d = il.q_delay(s)
    assert np.array_equal(d.real, s.real)
    assert np.array_equal(d.imag, np.roll(s.imag, 1))


def test_q_undelay_aligns_fading_with_component():
    rng = np.random.default_rng(3)
    n = 16
    s = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    h = rng.random(n) + 0.1
    x = h * il.q_delay(s)          # noiseless faded transmission
    obs = ChannelObservation(x=x, h_eff=h, sigma2=1.0, erasure_prob=0.0)
    al = il.q_undelay(obs)
    # equalizing each component with its own coefficient must recover s
    assert np.allclose(al.y_i / al.h_i, s.real)
    assert np.allclose(al.y_q / al.h_q, s.imag)
