"""Mel-frequency cepstral coefficient matrices.

The waveform is band-limited to 5 kHz and brought to a 10 kHz working
rate, framed with 256-sample Hamming windows hopped 128 samples apart,
passed through 20 triangular mel filters, log-compressed, and projected
onto a cosine basis:

    coeff[i] = sum_k X_k * cos(i * (k - 1/2) * pi / 20),  i = 1..20

where X_k is the log output of the k-th filter. One column per frame.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dsp import Waveform, resample_waveform
from .errors import ParameterError

DEFAULT_MFCC_RATE = 10_000
DEFAULT_WINDOW_LEN = 256
DEFAULT_HOP = 128
DEFAULT_N_COEFFS = 20
DEFAULT_N_FILTERS = 20
LOG_FLOOR = 1e-10


def mel_scale(freq_hz):
    return 2595.0 * np.log10(1.0 + np.asarray(freq_hz, dtype=np.float64) / 700.0)


def inverse_mel_scale(mel):
    return 700.0 * (np.power(10.0, np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


@dataclass(frozen=True)
class MfccMatrix:
    """Cepstral coefficients, one column per analysis frame."""

    coeffs: np.ndarray  # [n_coeffs, n_frames]
    frame_hop: float  # seconds between frame starts
    window_len: int  # samples per frame
    working_rate: int  # Hz

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if coeffs.ndim != 2 or coeffs.shape[1] < 1:
            raise ParameterError("coeffs must be a [n_coeffs, n_frames] matrix")
        if not np.all(np.isfinite(coeffs)):
            raise ParameterError("coeffs must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n_frames(self) -> int:
        return self.coeffs.shape[1]

    @property
    def flat(self) -> np.ndarray:
        return flatten(self)


def n_frames_for(clip_samples: int, window_len: int = DEFAULT_WINDOW_LEN, hop: int = DEFAULT_HOP) -> int:
    """Frame count for a clip: floor((samples - window) / hop) + 1."""
    if clip_samples < window_len:
        raise ParameterError(
            f"clip of {clip_samples} samples is shorter than one {window_len}-sample window"
        )
    return (clip_samples - window_len) // hop + 1


def mel_filterbank(
    n_filters: int,
    n_fft: int,
    sample_rate: int,
    f_lo: float = 0.0,
    f_hi: float | None = None,
) -> np.ndarray:
    """Triangular unit-peak filters with mel-spaced edges and 50% overlap."""
    if f_hi is None:
        f_hi = sample_rate / 2.0
    edges = inverse_mel_scale(np.linspace(mel_scale(f_lo), mel_scale(f_hi), n_filters + 2))
    freqs = np.fft.rfftfreq(n_fft, 1.0 / sample_rate)
    fb = np.empty((n_filters, freqs.size))
    for k in range(n_filters):
        lo, center, hi = edges[k], edges[k + 1], edges[k + 2]
        rising = (freqs - lo) / (center - lo)
        falling = (hi - freqs) / (hi - center)
        fb[k] = np.clip(np.minimum(rising, falling), 0.0, None)
    return fb


def cosine_basis(n_coeffs: int = DEFAULT_N_COEFFS, n_filters: int = DEFAULT_N_FILTERS) -> np.ndarray:
    """basis[i-1, k-1] = cos(i * (k - 1/2) * pi / n_filters), i and k 1-based."""
    i = np.arange(1, n_coeffs + 1)[:, None]
    k = np.arange(1, n_filters + 1)[None, :]
    return np.cos(i * (k - 0.5) * np.pi / n_filters)


def mfcc_matrix(
    w: Waveform,
    working_rate: int = DEFAULT_MFCC_RATE,
    window_len: int = DEFAULT_WINDOW_LEN,
    hop: int = DEFAULT_HOP,
    n_coeffs: int = DEFAULT_N_COEFFS,
    n_filters: int = DEFAULT_N_FILTERS,
    log_floor: float = LOG_FLOOR,
) -> MfccMatrix:
    """Compute the coefficient matrix for one clip.

    Resampling to ``working_rate`` band-limits the signal to the target
    Nyquist (5 kHz at the default rate). Raises ParameterError if the
    resampled clip is shorter than one window.
    """
    if window_len < 2 or hop < 1 or n_coeffs < 1 or n_filters < 1:
        raise ParameterError("window_len, hop, n_coeffs, n_filters must be positive")
    x = resample_waveform(w, working_rate).samples
    total = n_frames_for(x.size, window_len, hop)

    window = np.hamming(window_len)
    idx = np.arange(window_len)[None, :] + hop * np.arange(total)[:, None]
    frames = x[idx] * window

    power = np.abs(np.fft.rfft(frames, n=window_len, axis=1)) ** 2
    fb = mel_filterbank(n_filters, window_len, working_rate)
    log_energies = np.log(power @ fb.T + log_floor)  # [n_frames, n_filters]
    # einsum keeps a fixed per-column summation order, so identical frames
    # produce bit-identical coefficient columns (BLAS gemm does not)
    coeffs = np.einsum("ik,fk->if", cosine_basis(n_coeffs, n_filters), log_energies)
    return MfccMatrix(
        coeffs=coeffs,
        frame_hop=hop / working_rate,
        window_len=window_len,
        working_rate=int(working_rate),
    )


def flatten(m: MfccMatrix) -> np.ndarray:
    """Frame-major concatenation: all coefficients of frame 0, then frame 1, ..."""
    return np.ascontiguousarray(m.coeffs.T).reshape(-1)
