import struct

import numpy as np
import pytest
from scipy.io import wavfile

from soundtex import Waveform, make_cochlear_bank, make_modulation_bank

WORKING_RATE = 16_000
CLIP_SECONDS = 3.75


@pytest.fixture(scope="session")
def cochlear_bank():
    return make_cochlear_bank(32, WORKING_RATE, 20.0, 8000.0)


@pytest.fixture(scope="session")
def modulation_bank():
    return make_modulation_bank(10, 400)


def tone(freq_hz, seconds=CLIP_SECONDS, rate=WORKING_RATE, amplitude=0.5):
    t = np.arange(int(round(seconds * rate))) / rate
    return Waveform(amplitude * np.sin(2.0 * np.pi * freq_hz * t), rate)


def noise(seed, seconds=CLIP_SECONDS, rate=WORKING_RATE, amplitude=0.2):
    rng = np.random.default_rng(seed)
    return Waveform(amplitude * rng.standard_normal(int(round(seconds * rate))), rate)


_TONAL_CARRIERS = None


def tonal_clip(seed, seconds=CLIP_SECONDS, rate=WORKING_RATE, amplitude=0.5):
    """Harmonic complex with coherent 4 Hz tremolo plus a faint noise floor.

    Unlike a bare sine, this puts structured energy in every cochlear
    band, so all statistic segments distinguish it from white noise.
    """
    global _TONAL_CARRIERS
    if _TONAL_CARRIERS is None:
        _TONAL_CARRIERS = make_cochlear_bank(32, WORKING_RATE, 20.0, 8000.0).center_freqs[2:30:2]
    rng = np.random.default_rng(seed)
    n = int(round(seconds * rate))
    t = np.arange(n) / rate
    s = np.zeros(n)
    for freq in _TONAL_CARRIERS:
        s += np.sin(2.0 * np.pi * freq * t + rng.uniform(0.0, 2.0 * np.pi))
    tremolo = 1.0 + 0.5 * np.sin(2.0 * np.pi * 4.0 * t)
    s = amplitude * s / len(_TONAL_CARRIERS) * tremolo + 0.005 * rng.standard_normal(n)
    return Waveform(s, rate)


def write_wav_int16(path, samples, rate=WORKING_RATE):
    wavfile.write(path, rate, (np.clip(samples, -1, 1) * 32767).astype(np.int16))


def write_wav_float32(path, samples, rate=WORKING_RATE):
    wavfile.write(path, rate, np.asarray(samples, dtype=np.float32))


def write_wav_int24(path, samples, rate=WORKING_RATE):
    # scipy cannot write 24-bit; assemble the RIFF chunks by hand
    ints = (np.clip(samples, -1, 1) * (2**23 - 1)).astype(np.int32)
    raw = b"".join(struct.pack("<i", v)[:3] for v in ints)
    header = (
        b"RIFF"
        + struct.pack("<I", 36 + len(raw))
        + b"WAVEfmt "
        + struct.pack("<IHHIIHH", 16, 1, 1, rate, rate * 3, 3, 24)
        + b"data"
        + struct.pack("<I", len(raw))
    )
    with open(path, "wb") as fh:
        fh.write(header + raw)


def write_manifest(path, entries):
    """entries: iterable of (clip_id, audio_path, frame_path[, offset_s, duration_s])."""
    lines = ["clip_id,audio_path,frame_path,offset_s,duration_s"]
    for entry in entries:
        clip_id, audio, frame = entry[0], entry[1], entry[2]
        offset = entry[3] if len(entry) > 3 else 0.0
        duration = entry[4] if len(entry) > 4 else CLIP_SECONDS
        lines.append(f"{clip_id},{audio},{frame},{offset},{duration}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
