"""Filterbanks, analytic envelopes, and resampling.

Everything upstream of the summary statistics lives here: a waveform is
split into subbands by a half-cosine filterbank laid out on an ERB-rate
frequency grid, each subband is reduced to its amplitude envelope via the
analytic signal, and the envelopes are resampled to 400 Hz and compressed
with a 0.3 power law. A second, much slower bank of constant-Q bandpass
filters operates on the envelopes themselves to measure amplitude
modulation rates.

All operations are pure functions; filter banks are immutable and safe to
share across worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import resample_poly

from .errors import ParameterError, PipelineError

DEFAULT_WORKING_RATE = 16_000
DEFAULT_CLIP_SECONDS = 3.75
DEFAULT_ENVELOPE_RATE = 400
DEFAULT_COMPRESSION_EXPONENT = 0.3
DEFAULT_N_SUBBANDS = 32
DEFAULT_F_LO = 20.0
DEFAULT_F_HI_CAP = 10_000.0
DEFAULT_N_MODULATION_FILTERS = 10
DEFAULT_MODULATION_F_LO = 0.5
DEFAULT_MODULATION_Q = 2.0


def erb_scale(freq_hz):
    """Map frequency in Hz onto the ERB-rate scale (Glasberg & Moore)."""
    return 21.4 * np.log10(1.0 + 0.00437 * np.asarray(freq_hz, dtype=np.float64))


def inverse_erb_scale(erb):
    """Inverse of :func:`erb_scale`."""
    return (np.power(10.0, np.asarray(erb, dtype=np.float64) / 21.4) - 1.0) / 0.00437


@dataclass(frozen=True)
class Waveform:
    """A mono sample sequence plus its sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise ParameterError("waveform must be a non-empty 1-D sample sequence")
        if not np.all(np.isfinite(samples)):
            raise ParameterError("waveform contains non-finite samples")
        rate = int(self.sample_rate)
        if rate <= 0:
            raise ParameterError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", rate)

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class FilterBank:
    """Zero-phase magnitude filters defined in the frequency domain.

    ``gains`` is the bank evaluated on the reference rfft grid for a
    default-length clip at ``domain_rate``; :meth:`evaluate` re-evaluates
    the closed-form gain curves on any other grid, so a bank built once
    can filter signals of any length at its design rate.
    """

    kind: str  # "cochlear" or "modulation"
    center_freqs: np.ndarray
    domain_rate: int
    gains: np.ndarray
    freq_grid: np.ndarray
    design: tuple = field(repr=False, default=())

    def __post_init__(self):
        if not np.all(np.isfinite(self.gains)) or np.any(self.gains < 0):
            raise ParameterError("filter gains must be finite and non-negative")
        if np.any(np.diff(self.center_freqs) <= 0):
            raise ParameterError("center frequencies must be strictly increasing")

    @property
    def n_filters(self) -> int:
        return int(self.center_freqs.size)

    def evaluate(self, freqs) -> np.ndarray:
        """Gain of every filter at the given frequencies (Hz)."""
        freqs = np.asarray(freqs, dtype=np.float64)
        if self.kind == "cochlear":
            return _erb_cosine_gains(self.design[0], freqs)
        return _constant_q_gains(self.center_freqs, self.design[0], freqs)


@dataclass(frozen=True)
class EnvelopeSet:
    """Compressed subband envelopes, one row per cochlear band."""

    envelopes: np.ndarray  # [n_bands, T]
    envelope_rate: int
    compression_exponent: float

    def __post_init__(self):
        env = np.asarray(self.envelopes, dtype=np.float64)
        if env.ndim != 2 or env.shape[1] < 1:
            raise ParameterError("envelopes must be a [n_bands, T] matrix with T >= 1")
        if not np.all(np.isfinite(env)) or np.any(env < 0):
            raise ParameterError("envelopes must be finite and non-negative")
        object.__setattr__(self, "envelopes", env)

    @property
    def n_bands(self) -> int:
        return self.envelopes.shape[0]

    @property
    def n_samples(self) -> int:
        return self.envelopes.shape[1]


def _erb_cosine_gains(cutoffs: np.ndarray, freqs: np.ndarray) -> np.ndarray:
    """Half-cosine bandpass gains on the ERB-rate axis, plus the two caps.

    Adjacent bandpass filters overlap by half their width, so the gains
    sum in quadrature to one; the lowpass/highpass caps extend that
    property down to DC and up to the top of the grid.
    """
    e = erb_scale(freqs)
    ec = erb_scale(cutoffs)
    n_bandpass = cutoffs.size - 2
    out = np.zeros((n_bandpass + 2, freqs.size))
    for k in range(1, n_bandpass + 1):
        lo, hi = ec[k - 1], ec[k + 1]
        inside = (e >= lo) & (e <= hi)
        out[k, inside] = np.cos((e[inside] - 0.5 * (lo + hi)) / (hi - lo) * np.pi)
    inside = e <= ec[1]
    out[0, inside] = np.sqrt(np.clip(1.0 - out[1, inside] ** 2, 0.0, 1.0))
    inside = e >= ec[-2]
    out[-1, inside] = np.sqrt(np.clip(1.0 - out[-2, inside] ** 2, 0.0, 1.0))
    return out


def _constant_q_gains(centers: np.ndarray, q: float, freqs: np.ndarray) -> np.ndarray:
    """Second-order bandpass magnitudes: unit gain at fc, zero at DC."""
    f = freqs[None, :]
    fc = np.asarray(centers, dtype=np.float64)[:, None]
    bw = fc / q
    num = bw * f
    den = np.sqrt((fc**2 - f**2) ** 2 + num**2)
    return num / den


def _reference_grid(sample_rate: int, seconds: float = DEFAULT_CLIP_SECONDS) -> np.ndarray:
    n = int(round(seconds * sample_rate))
    return np.fft.rfftfreq(n, 1.0 / sample_rate)


def make_cochlear_bank(
    n_subbands: int = DEFAULT_N_SUBBANDS,
    sample_rate: int = DEFAULT_WORKING_RATE,
    f_lo: float = DEFAULT_F_LO,
    f_hi: float | None = None,
) -> FilterBank:
    """Build the subband analysis bank: ``n_subbands - 2`` half-cosine
    bandpass filters on an ERB-rate grid between ``f_lo`` and ``f_hi``,
    plus a lowpass and a highpass cap.

    Raises ParameterError for fewer than 3 filters, an inverted frequency
    range, or ``f_hi`` above Nyquist.
    """
    if n_subbands < 3:
        raise ParameterError(f"need at least 3 subbands (got {n_subbands})")
    if sample_rate <= 0:
        raise ParameterError(f"sample_rate must be positive, got {sample_rate}")
    nyquist = sample_rate / 2.0
    if f_hi is None:
        f_hi = min(DEFAULT_F_HI_CAP, nyquist)
    if not 0.0 < f_lo < f_hi:
        raise ParameterError(f"need 0 < f_lo < f_hi, got f_lo={f_lo}, f_hi={f_hi}")
    if f_hi > nyquist:
        raise ParameterError(f"f_hi={f_hi} Hz exceeds the Nyquist frequency {nyquist} Hz")

    cutoffs = inverse_erb_scale(np.linspace(erb_scale(f_lo), erb_scale(f_hi), n_subbands))
    cutoffs[0], cutoffs[-1] = f_lo, f_hi  # undo round-trip error at the endpoints
    grid = _reference_grid(sample_rate)
    return FilterBank(
        kind="cochlear",
        center_freqs=cutoffs.copy(),
        domain_rate=int(sample_rate),
        gains=_erb_cosine_gains(cutoffs, grid),
        freq_grid=grid,
        design=(cutoffs,),
    )


def make_modulation_bank(
    n_filters: int = DEFAULT_N_MODULATION_FILTERS,
    envelope_rate: int = DEFAULT_ENVELOPE_RATE,
    f_lo: float = DEFAULT_MODULATION_F_LO,
    f_hi: float | None = None,
    q: float = DEFAULT_MODULATION_Q,
) -> FilterBank:
    """Constant-Q bandpass bank for envelope modulation analysis.

    Center frequencies are log-spaced from ``f_lo`` up to ``f_hi``
    (default: envelope Nyquist, 200 Hz at the standard 400 Hz rate).
    """
    if n_filters < 1:
        raise ParameterError(f"need at least 1 modulation filter (got {n_filters})")
    if envelope_rate <= 0:
        raise ParameterError(f"envelope_rate must be positive, got {envelope_rate}")
    if f_hi is None:
        f_hi = envelope_rate / 2.0
    if not 0.0 < f_lo <= f_hi:
        raise ParameterError(f"need 0 < f_lo <= f_hi, got f_lo={f_lo}, f_hi={f_hi}")
    if n_filters == 1:
        centers = np.array([f_lo])
    else:
        centers = f_lo * (f_hi / f_lo) ** (np.arange(n_filters) / (n_filters - 1))
    grid = _reference_grid(envelope_rate)
    return FilterBank(
        kind="modulation",
        center_freqs=centers,
        domain_rate=int(envelope_rate),
        gains=_constant_q_gains(centers, q, grid),
        freq_grid=grid,
        design=(q,),
    )


def analytic_signal(x) -> np.ndarray:
    """Return ``x + i*H(x)`` by the discrete frequency-domain construction:
    zero the negative-frequency half-spectrum, double the positive half,
    and leave the DC and Nyquist bins unscaled. The real part equals the
    input up to round-off.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ParameterError("analytic_signal needs a 1-D input of length >= 2")
    if not np.all(np.isfinite(x)):
        raise ParameterError("analytic_signal input must be finite")
    n = x.size
    mult = np.zeros(n)
    mult[0] = 1.0
    if n % 2 == 0:
        mult[n // 2] = 1.0
        mult[1 : n // 2] = 2.0
    else:
        mult[1 : (n + 1) // 2] = 2.0
    return np.fft.ifft(np.fft.fft(x) * mult)


def subband_envelopes(
    w: Waveform,
    bank: FilterBank,
    envelope_rate: int = DEFAULT_ENVELOPE_RATE,
    exponent: float = DEFAULT_COMPRESSION_EXPONENT,
) -> EnvelopeSet:
    """Filter, take analytic magnitudes, resample to ``envelope_rate``, and
    compress with ``exponent``.

    The waveform must already be at the bank's design rate. Each band is
    filtered zero-phase in the frequency domain; the envelope is the
    magnitude of the analytic signal, polyphase-resampled (which applies
    the anti-alias lowpass at ``envelope_rate / 2``) and trimmed to
    ``round(duration * envelope_rate)`` samples.
    """
    if bank.domain_rate != w.sample_rate:
        raise PipelineError(
            f"waveform rate {w.sample_rate} Hz does not match filterbank design "
            f"rate {bank.domain_rate} Hz; resample the waveform first"
        )
    n = w.samples.size
    t_out = int(round(n * envelope_rate / w.sample_rate))
    if t_out < 1:
        raise ParameterError(
            f"clip of {n} samples at {w.sample_rate} Hz is shorter than one "
            f"envelope sample at {envelope_rate} Hz"
        )
    spectrum = np.fft.rfft(w.samples)
    gains = bank.evaluate(np.fft.rfftfreq(n, 1.0 / w.sample_rate))
    g = math.gcd(int(envelope_rate), w.sample_rate)
    up, down = int(envelope_rate) // g, w.sample_rate // g

    env = np.empty((bank.n_filters, t_out))
    for i in range(bank.n_filters):
        sub = np.fft.irfft(spectrum * gains[i], n)
        mag = np.abs(analytic_signal(sub))
        if (up, down) != (1, 1):
            mag = resample_poly(mag, up, down)[:t_out]
        np.clip(mag, 0.0, None, out=mag)  # FIR ringing can undershoot zero
        env[i] = np.power(mag, exponent)
    return EnvelopeSet(env, int(envelope_rate), float(exponent))


def resample_waveform(w: Waveform, target_rate: int) -> Waveform:
    """Polyphase-resample to ``target_rate`` (no-op if already there)."""
    if target_rate <= 0:
        raise ParameterError(f"target_rate must be positive, got {target_rate}")
    if int(target_rate) == w.sample_rate:
        return w
    g = math.gcd(int(target_rate), w.sample_rate)
    samples = resample_poly(w.samples, int(target_rate) // g, w.sample_rate // g)
    return Waveform(samples, int(target_rate))


def fit_length(samples: np.ndarray, target_len: int) -> np.ndarray:
    """Zero-pad short signals at the end; center-crop long ones."""
    samples = np.asarray(samples, dtype=np.float64)
    if target_len < 1:
        raise ParameterError(f"target_len must be >= 1, got {target_len}")
    n = samples.size
    if n == target_len:
        return samples
    if n < target_len:
        return np.pad(samples, (0, target_len - n))
    start = (n - target_len) // 2
    return samples[start : start + target_len]
