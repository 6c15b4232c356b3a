import math
import struct
import wave

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clsfront.errors import (
    DimensionMismatch,
    NotWav,
    SampleRateMismatch,
    TooShort,
    TruncatedFile,
    UnsupportedEncoding,
)
from clsfront.mcd_eval import (
    MCDConfig,
    Signal,
    dtw,
    load_pcm_wav,
    mcd_files,
    mcd_from_cepstra,
    mcd_score,
    mel_cepstra,
    mel_filterbank,
    read_manifest,
)

from . import oracles
from .conftest import tone

SR = 16000


def _riff(fmt_code, channels=1, bits=16, data=b"\x00\x00" * 10):
    block = channels * bits // 8
    fmt = struct.pack("<HHIIHH", fmt_code, channels, SR, SR * block, block, bits)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + b"data" + struct.pack("<I", len(data)) + data
    return b"RIFF" + struct.pack("<I", len(body)) + body


# -- WAV loading -------------------------------------------------------------

def test_roundtrip(wav):
    x = tone(440, 0.1)
    sig = load_pcm_wav(wav(x))
    assert sig.sample_rate == SR
    assert len(sig.samples) == len(x)
    assert np.max(np.abs(sig.samples)) < 1 + 1 / 32768
    assert np.max(np.abs(sig.samples - x)) <= 0.5 / 32768 + 1e-12


def test_stereo_rejected(tmp_path):
    path = tmp_path / "st.wav"
    with wave.open(str(path), "wb") as w:
        w.setnchannels(2)
        w.setsampwidth(2)
        w.setframerate(SR)
        w.writeframes(b"\x00" * 40)
    with pytest.raises(UnsupportedEncoding):
        load_pcm_wav(path)


def test_eight_bit_rejected(tmp_path):
    path = tmp_path / "u8.wav"
    path.write_bytes(_riff(1, bits=8, data=b"\x80" * 10))
    with pytest.raises(UnsupportedEncoding):
        load_pcm_wav(path)


def test_float_rejected(tmp_path):
    path = tmp_path / "f.wav"
    path.write_bytes(_riff(3, bits=32, data=b"\x00" * 40))
    with pytest.raises(UnsupportedEncoding):
        load_pcm_wav(path)


def test_ten_byte_file(tmp_path):
    path = tmp_path / "short.wav"
    path.write_bytes(b"RIFF\x00\x00\x00\x00WA")
    with pytest.raises(TruncatedFile):
        load_pcm_wav(path)


def test_data_cut_short(tmp_path):
    path = tmp_path / "cut.wav"
    path.write_bytes(_riff(1, data=b"\x00\x00" * 100)[:-50])
    with pytest.raises(TruncatedFile):
        load_pcm_wav(path)


def test_not_wav(tmp_path):
    path = tmp_path / "x.wav"
    path.write_bytes(b"ID3" + b"\x00" * 60)
    with pytest.raises(NotWav):
        load_pcm_wav(path)


# -- features ----------------------------------------------------------------

def test_silence_frames_identical():
    c = mel_cepstra(Signal(np.zeros(SR), SR)).frames
    assert np.all(c == c[0])


def test_cepstra_deterministic():
    sig = Signal(tone(440, 0.5) + 0.01 * np.random.default_rng(0).standard_normal(SR // 2), SR)
    assert mel_cepstra(sig).frames.tobytes() == mel_cepstra(sig).frames.tobytes()


def test_tone_shape():
    c = mel_cepstra(Signal(tone(440, 1.0), SR))
    assert c.frames.shape == (oracles.frame_count(SR, SR), 24)
    assert c.frames.shape == (98, 24)


@settings(max_examples=200, deadline=None)
@given(st.integers(400, 8000), st.sampled_from([8000, 16000, 22050]))
def test_frame_count_formula(n, sr):
    frame = round(sr * 0.025)
    if n < frame:
        with pytest.raises(TooShort):
            mel_cepstra(Signal(np.ones(n), sr))
        return
    assert mel_cepstra(Signal(np.ones(n), sr)).n_frames == oracles.frame_count(n, sr)


def test_too_short():
    with pytest.raises(TooShort):
        mel_cepstra(Signal(np.ones(100), SR))


def test_filterbank_shape_and_support():
    fb = mel_filterbank(40, 512, SR)
    assert fb.shape == (40, 257)
    assert np.all(fb >= 0) and np.all(fb.max(axis=1) > 0)


def test_config_file_matches_defaults():
    assert MCDConfig.load() == MCDConfig()


# -- DTW ---------------------------------------------------------------------

def test_dtw_identical_is_diagonal():
    a = np.random.default_rng(1).standard_normal((6, 3))
    path = dtw(a, a)
    assert path.pairs == tuple((i, i) for i in range(6))
    assert path.cost == 0.0


def test_dtw_single_frame():
    a = np.zeros((1, 2))
    b = np.random.default_rng(2).standard_normal((5, 2))
    assert dtw(a, b).pairs == tuple((0, j) for j in range(5))


def test_dtw_tie_prefers_diagonal_then_down():
    # all local costs equal, so the two three-cell paths tie; the diagonal is taken first
    a = np.zeros((3, 1))
    b = np.ones((2, 1))
    assert dtw(a, b).pairs == ((0, 0), (1, 0), (2, 1))


def test_dtw_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        dtw(np.zeros((2, 3)), np.zeros((2, 4)))


def test_dtw_six_by_eight_matches_enumeration():
    rng = np.random.default_rng(68)
    a, b = rng.standard_normal((6, 4)), rng.standard_normal((8, 4))
    cost = np.linalg.norm(a[:, None] - b[None], axis=2)
    paths = oracles.enumerate_paths(6, 8)
    assert len(paths) == oracles.count_monotone_paths(6, 8)
    best = min(sum(cost[i, j] for i, j in p) for p in paths)
    assert dtw(a, b).cost == pytest.approx(best, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_dtw_path_valid(ta, tb, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.standard_normal((ta, 3)), rng.standard_normal((tb, 3))
    path = dtw(a, b).pairs
    assert path[0] == (0, 0) and path[-1] == (ta - 1, tb - 1)
    steps = {(i2 - i1, j2 - j1) for (i1, j1), (i2, j2) in zip(path, path[1:])}
    assert steps <= {(1, 0), (0, 1), (1, 1)}


# -- MCD ---------------------------------------------------------------------

def test_self_score_zero():
    sig = Signal(tone(300, 0.5), SR)
    assert mcd_score(sig, sig) == 0.0


def test_offset_closed_form():
    c = np.random.default_rng(3).standard_normal((50, 24))
    d = c.copy()
    d[:, 0] += 1.0
    assert mcd_from_cepstra(c, d) == pytest.approx(oracles.mcd_offset_closed_form(1.0), rel=1e-6)
    assert oracles.mcd_offset_closed_form(1.0) == pytest.approx(6.1419, abs=5e-5)


def test_symmetry_and_positivity():
    x = Signal(tone(300, 0.6), SR)
    y = Signal(tone(310, 0.6, amp=0.3), SR)
    xy, yx = mcd_score(x, y), mcd_score(y, x)
    assert xy > 0
    assert abs(xy - yx) < 1e-9


def test_sample_rate_mismatch():
    with pytest.raises(SampleRateMismatch):
        mcd_score(Signal(np.ones(1000), 16000), Signal(np.ones(1000), 8000))


def test_files_and_manifest(wav, tmp_path):
    a = wav(tone(200, 0.3), name="a.wav")
    b = wav(tone(250, 0.3), name="b.wav")
    assert mcd_files(a, a) == 0.0
    manifest = tmp_path / "pairs.tsv"
    manifest.write_text("# ref\tsyn\n\na.wav\tb.wav\n", encoding="utf-8")
    assert read_manifest(manifest) == [(str(a), str(b))]
    manifest.write_text("a.wav b.wav\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_manifest(manifest)


def test_mcd_constant():
    assert 10 / math.log(10) * math.sqrt(2) == pytest.approx(6.1418515, abs=1e-7)
