"""WAV decoding and clip windowing."""

from __future__ import annotations

import numpy as np
from scipy.io import wavfile

from .dsp import Waveform, fit_length, resample_waveform
from .errors import DataError

_INT_SCALES = {
    np.dtype(np.uint8): (128.0, 128.0),  # (offset, scale): 8-bit WAV is unsigned
    np.dtype(np.int16): (0.0, 2.0**15),
    np.dtype(np.int32): (0.0, 2.0**31),  # 24-bit PCM arrives as int32
}


def read_wav(path) -> Waveform:
    """Read a WAV file into a mono [-1, 1] float waveform.

    Stereo (or more channels) is downmixed by averaging. Integer PCM is
    scaled to [-1, 1]; float WAV passes through.
    """
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise DataError(f"{path}: cannot decode WAV ({exc})") from exc
    if data.size == 0:
        raise DataError(f"{path}: empty audio stream")
    if data.ndim == 2:
        data = data.mean(axis=1)
    elif data.ndim != 1:
        raise DataError(f"{path}: unsupported channel layout {data.shape}")
    if data.dtype in _INT_SCALES:
        offset, scale = _INT_SCALES[data.dtype]
        samples = (data.astype(np.float64) - offset) / scale
    elif np.issubdtype(data.dtype, np.floating):
        samples = data.astype(np.float64)
    else:
        samples = np.asarray(data, dtype=np.float64)
    if not np.all(np.isfinite(samples)):
        raise DataError(f"{path}: stream contains non-finite samples")
    return Waveform(samples, int(rate))


def clip_window(w: Waveform, offset_s: float, duration_s: float, target_rate: int) -> Waveform:
    """Cut [offset, offset + duration) and normalize it to the working rate.

    Short cuts are zero-padded to the full window; anything longer after
    resampling is center-cropped, so the result always has exactly
    ``round(duration_s * target_rate)`` samples.
    """
    start = int(round(offset_s * w.sample_rate))
    stop = int(round((offset_s + duration_s) * w.sample_rate))
    segment = w.samples[start:stop]
    target_len = int(round(duration_s * target_rate))
    if segment.size == 0:
        return Waveform(np.zeros(target_len), target_rate)
    resampled = resample_waveform(Waveform(segment, w.sample_rate), target_rate)
    return Waveform(fit_length(resampled.samples, target_len), target_rate)
