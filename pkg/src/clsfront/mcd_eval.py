"""Mel-cepstral distortion between a reference and a synthesized recording.

Pipeline: 16-bit PCM WAV -> mel cepstra (c0 dropped) -> DTW alignment on
Euclidean frame distance -> mean per-frame distortion in dB over the path.
"""

import math
import wave
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.fft import dct
from scipy.spatial.distance import cdist

from . import _data
from .errors import (
    DimensionMismatch,
    NotWav,
    SampleRateMismatch,
    TooShort,
    TruncatedFile,
    UnsupportedEncoding,
)

MCD_CONST = 10.0 / math.log(10.0)


@dataclass(frozen=True)
class Signal:
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if len(self.samples) == 0:
            raise ValueError("empty signal")


@dataclass(frozen=True)
class MCDConfig:
    pre_emphasis: float = 0.97
    frame_ms: float = 25.0
    hop_ms: float = 10.0
    n_mels: int = 40
    n_ceps: int = 24
    log_floor: float = 1e-10
    fmin: float = 0.0
    fmax: float | None = None

    @classmethod
    def load(cls, path=None):
        path = Path(path) if path is not None else _data.default_data_dir() / "mcd_config.json"
        raw = _data.read_json(path)
        names = set(cls.__dataclass_fields__)
        return cls(**{k: v for k, v in raw.items() if k in names})

    def frame_length(self, sample_rate):
        return int(round(sample_rate * self.frame_ms / 1000.0))

    def hop_length(self, sample_rate):
        return int(round(sample_rate * self.hop_ms / 1000.0))


@dataclass(frozen=True)
class CepstraMatrix:
    frames: np.ndarray
    frame_ms: float = 25.0
    hop_ms: float = 10.0

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.ndim != 2 or frames.shape[0] < 1:
            raise ValueError(f"cepstra must be a non-empty T x D matrix, got shape {frames.shape}")
        if not np.all(np.isfinite(frames)):
            raise ValueError("cepstra contain non-finite values")
        object.__setattr__(self, "frames", frames)

    @property
    def n_frames(self):
        return self.frames.shape[0]

    @property
    def dim(self):
        return self.frames.shape[1]


@dataclass(frozen=True)
class AlignmentPath:
    pairs: tuple
    cost: float = field(default=0.0, compare=False)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def load_pcm_wav(path):
    """Read a mono 16-bit PCM WAV file, samples scaled by 1/32768."""
    path = Path(path)
    header = path.read_bytes()[:12]
    if len(header) < 12:
        raise TruncatedFile(f"{path}: {len(header)} bytes, shorter than a RIFF header")
    if header[:4] != b"RIFF" or header[8:12] != b"WAVE":
        raise NotWav(f"{path}: not a RIFF/WAVE file")
    try:
        with wave.open(str(path), "rb") as w:
            channels, width, rate, n = w.getnchannels(), w.getsampwidth(), w.getframerate(), w.getnframes()
            if channels != 1:
                raise UnsupportedEncoding(f"{path}: {channels} channels, need mono")
            if width != 2:
                raise UnsupportedEncoding(f"{path}: {8 * width}-bit samples, need 16-bit")
            data = w.readframes(n)
    except EOFError:
        raise TruncatedFile(f"{path}: chunk header cut short") from None
    except wave.Error as exc:
        msg = str(exc)
        if "unknown format" in msg:
            raise UnsupportedEncoding(f"{path}: {msg}, need PCM") from None
        raise NotWav(f"{path}: {msg}") from None
    if len(data) < 2 * n:
        raise TruncatedFile(f"{path}: header declares {n} samples, found {len(data) // 2}")
    if n == 0:
        raise TruncatedFile(f"{path}: no samples")
    samples = np.frombuffer(data, dtype="<i2").astype(np.float64) / 32768.0
    return Signal(samples, rate)


def write_pcm_wav(path, samples, sample_rate):
    """Write mono 16-bit PCM; values are clipped to [-1, 1)."""
    pcm = np.clip(np.round(np.asarray(samples, dtype=np.float64) * 32768.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(int(sample_rate))
        w.writeframes(pcm.tobytes())


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(n_mels, n_fft, sample_rate, fmin=0.0, fmax=None):
    """Triangular filters on the HTK mel scale, shape ``(n_mels, n_fft // 2 + 1)``."""
    fmax = sample_rate / 2.0 if fmax is None else fmax
    bins = np.linspace(0.0, sample_rate / 2.0, n_fft // 2 + 1)
    edges = mel_to_hz(np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_mels + 2))
    lower, center, upper = edges[:-2, None], edges[1:-1, None], edges[2:, None]
    rising = (bins - lower) / (center - lower)
    falling = (upper - bins) / (upper - center)
    return np.maximum(0.0, np.minimum(rising, falling))


def n_frames_for(n_samples, frame, hop):
    return (n_samples - frame) // hop + 1


def mel_cepstra(sig, cfg=None):
    cfg = cfg or MCDConfig()
    frame = cfg.frame_length(sig.sample_rate)
    hop = cfg.hop_length(sig.sample_rate)
    x = np.asarray(sig.samples, dtype=np.float64)
    if len(x) < frame:
        raise TooShort(f"{len(x)} samples, need at least {frame} for one frame")
    x = np.append(x[0], x[1:] - cfg.pre_emphasis * x[:-1])

    n = n_frames_for(len(x), frame, hop)
    idx = np.arange(frame)[None, :] + hop * np.arange(n)[:, None]
    frames = x[idx] * np.hamming(frame)
    n_fft = 1 << (frame - 1).bit_length()
    mag = np.abs(np.fft.rfft(frames, n=n_fft, axis=1))
    fbank = mag @ mel_filterbank(cfg.n_mels, n_fft, sig.sample_rate, cfg.fmin, cfg.fmax).T
    logmel = np.log(np.maximum(fbank, cfg.log_floor))
    ceps = dct(logmel, type=2, norm="ortho", axis=1)[:, 1:cfg.n_ceps + 1]
    return CepstraMatrix(ceps, cfg.frame_ms, cfg.hop_ms)


def _frames(x):
    return x.frames if isinstance(x, CepstraMatrix) else np.asarray(x, dtype=np.float64)


def local_costs(a, b):
    a, b = _frames(a), _frames(b)
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"cepstral dimension {a.shape[1]} vs {b.shape[1]}")
    return cdist(a, b, "euclidean")


def accumulated_cost(cost):
    """DTW cost table filled one anti-diagonal at a time."""
    ta, tb = cost.shape
    acc = np.full((ta, tb), np.inf)
    acc[0, 0] = cost[0, 0]
    for k in range(1, ta + tb - 1):
        i = np.arange(max(0, k - tb + 1), min(k, ta - 1) + 1)
        j = k - i
        best = np.full(len(i), np.inf)
        ok = (i > 0) & (j > 0)
        best[ok] = acc[i[ok] - 1, j[ok] - 1]
        ok = i > 0
        best[ok] = np.minimum(best[ok], acc[i[ok] - 1, j[ok]])
        ok = j > 0
        best[ok] = np.minimum(best[ok], acc[i[ok], j[ok] - 1])
        acc[i, j] = best + cost[i, j]
    return acc


def dtw(a, b):
    """Minimum summed-Euclidean monotone alignment.

    Steps are (1,1), (1,0), (0,1); on equal accumulated cost the backtrace
    prefers the diagonal, then (1,0).
    """
    cost = local_costs(a, b)
    acc = accumulated_cost(cost)
    i, j = acc.shape[0] - 1, acc.shape[1] - 1
    path = [(i, j)]
    while i > 0 or j > 0:
        options = []
        if i > 0 and j > 0:
            options.append((acc[i - 1, j - 1], i - 1, j - 1))
        if i > 0:
            options.append((acc[i - 1, j], i - 1, j))
        if j > 0:
            options.append((acc[i, j - 1], i, j - 1))
        # min() keeps the first of equal keys, so list order is the tie rule
        _, i, j = min(options, key=lambda o: o[0])
        path.append((i, j))
    path.reverse()
    return AlignmentPath(tuple(path), float(acc[-1, -1]))


def mcd_from_cepstra(ref, syn, path=None):
    """Mean distortion in dB over the DTW path between two cepstra matrices."""
    a, b = _frames(ref), _frames(syn)
    path = path or dtw(a, b)
    ii = np.fromiter((p[0] for p in path), dtype=np.intp)
    jj = np.fromiter((p[1] for p in path), dtype=np.intp)
    diff = a[ii] - b[jj]
    per_frame = MCD_CONST * np.sqrt(2.0 * np.sum(diff * diff, axis=1))
    return float(per_frame.mean())


def mcd_score(ref, syn, cfg=None):
    if ref.sample_rate != syn.sample_rate:
        raise SampleRateMismatch(f"sample rates differ: {ref.sample_rate} vs {syn.sample_rate}")
    cfg = cfg or MCDConfig()
    return mcd_from_cepstra(mel_cepstra(ref, cfg), mel_cepstra(syn, cfg))


def mcd_files(ref_path, syn_path, cfg=None):
    return mcd_score(load_pcm_wav(ref_path), load_pcm_wav(syn_path), cfg)


def read_manifest(path):
    """``ref<TAB>syn`` per line; blank lines and ``#`` comments skipped."""
    pairs = []
    base = Path(path).parent
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ValueError(f"{path}:{line_no}: expected 2 tab-separated columns, got {len(cols)}")
            pairs.append(tuple(str(p) if Path(p).is_absolute() else str(base / p) for p in cols))
    return pairs
