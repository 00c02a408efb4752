"""Statistical summary vector of subband envelopes.

For the default configuration (32 bands, 10 modulation filters) the
summary has 502 entries laid out as:

    [ 32 band means | 32 normalized stds | 117 cross-band correlations
      | 320 normalized modulation energies | 1 loudness ]

Normalized statistics involving a silent band (zero mean or zero
variance) are defined as 0 so that silence still yields a valid vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dsp import (
    DEFAULT_COMPRESSION_EXPONENT,
    DEFAULT_ENVELOPE_RATE,
    EnvelopeSet,
    FilterBank,
    Waveform,
    subband_envelopes,
)
from .errors import ParameterError, PipelineError

CORRELATION_OFFSETS = (1, 2, 3, 5)


@dataclass(frozen=True)
class CorrelationIndex:
    """Ordered (j, k) band pairs whose envelopes get correlated.

    Pairs satisfy j < k with k - j drawn from ``offsets``, listed in
    lexicographic (offset, j) order; 32 bands with the default offsets
    give 31 + 30 + 29 + 27 = 117 pairs.
    """

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def for_bands(cls, n_bands: int, offsets=CORRELATION_OFFSETS) -> "CorrelationIndex":
        if n_bands < 2:
            raise ParameterError(f"need at least 2 bands, got {n_bands}")
        pairs = [
            (j, j + off) for off in offsets for j in range(n_bands - off) if j + off < n_bands
        ]
        return cls(tuple(pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


@dataclass(frozen=True)
class TextureVector:
    """Named segments of the summary vector; ``flat`` is their concatenation."""

    mu: np.ndarray
    sigma_norm: np.ndarray
    rho: np.ndarray
    b_norm: np.ndarray
    loudness: float

    def __post_init__(self):
        for name in ("mu", "sigma_norm", "b_norm"):
            seg = np.asarray(getattr(self, name), dtype=np.float64)
            if not np.all(np.isfinite(seg)) or np.any(seg < 0):
                raise ParameterError(f"{name} segment must be finite and non-negative")
            object.__setattr__(self, name, seg)
        rho = np.asarray(self.rho, dtype=np.float64)
        if not np.all(np.isfinite(rho)) or np.any(np.abs(rho) > 1.0):
            raise ParameterError("rho segment must be finite and within [-1, 1]")
        object.__setattr__(self, "rho", rho)
        if not np.isfinite(self.loudness) or self.loudness < 0:
            raise ParameterError("loudness must be finite and non-negative")

    @property
    def flat(self) -> np.ndarray:
        return np.concatenate([self.mu, self.sigma_norm, self.rho, self.b_norm, [self.loudness]])

    @property
    def dim(self) -> int:
        return self.mu.size + self.sigma_norm.size + self.rho.size + self.b_norm.size + 1


def segment_slices(n_bands: int = 32, n_pairs: int = 117, n_mod: int = 10) -> dict:
    """Index ranges of each named segment within the flat vector."""
    ofs = 0
    out = {}
    for name, size in (
        ("mu", n_bands),
        ("sigma_norm", n_bands),
        ("rho", n_pairs),
        ("b_norm", n_bands * n_mod),
        ("loudness", 1),
    ):
        out[name] = slice(ofs, ofs + size)
        ofs += size
    return out


def marginal_stats(env: EnvelopeSet) -> tuple[np.ndarray, np.ndarray]:
    """Per-band time mean and coefficient of variation (population std / mean).

    Bands with zero mean get a normalized std of 0.
    """
    c = env.envelopes
    mu = c.mean(axis=1)
    sigma = c.std(axis=1)
    sigma_norm = np.divide(sigma, mu, out=np.zeros_like(sigma), where=mu > 0)
    return mu, sigma_norm


def crossband_correlations(env: EnvelopeSet, idx: CorrelationIndex) -> np.ndarray:
    """Pearson correlation for every indexed band pair.

    Pairs touching a zero-variance band yield 0. Results are clipped to
    [-1, 1] to absorb round-off at the perfectly correlated extremes.
    """
    c = env.envelopes
    n_bands, t = c.shape
    mu = c.mean(axis=1)
    sd = c.std(axis=1)
    centered = c - mu[:, None]

    jj = np.fromiter((p[0] for p in idx.pairs), dtype=np.intp, count=len(idx))
    kk = np.fromiter((p[1] for p in idx.pairs), dtype=np.intp, count=len(idx))
    if len(idx) and (jj.max() >= n_bands or kk.max() >= n_bands):
        raise ParameterError("correlation index references a band outside the envelope set")
    num = np.einsum("ij,ij->i", centered[jj], centered[kk]) / t
    den = sd[jj] * sd[kk]
    rho = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    return np.clip(rho, -1.0, 1.0)


def modulation_energies(env: EnvelopeSet, mbank: FilterBank) -> np.ndarray:
    """Normalized modulation energy per (band, modulation filter) pair.

    Each envelope is filtered by every modulation filter; the mean squared
    output is divided by the squared band mean and square-rooted. Output is
    band-major: all filters of band 0, then band 1, and so on. Bands with
    zero mean yield 0.
    """
    if mbank.domain_rate != env.envelope_rate:
        raise PipelineError(
            f"envelope rate {env.envelope_rate} Hz does not match modulation "
            f"bank design rate {mbank.domain_rate} Hz"
        )
    c = env.envelopes
    n_bands, t = c.shape
    spectrum = np.fft.rfft(c, axis=1)
    gains = mbank.evaluate(np.fft.rfftfreq(t, 1.0 / env.envelope_rate))
    # [n_bands, n_mod, T]: every band through every modulation filter
    filtered = np.fft.irfft(spectrum[:, None, :] * gains[None, :, :], t, axis=2)
    power = np.mean(filtered**2, axis=2)
    mu = c.mean(axis=1)
    b_norm = np.divide(np.sqrt(power), mu[:, None], out=np.zeros_like(power), where=mu[:, None] > 0)
    return b_norm.reshape(-1)


def loudness(env: EnvelopeSet) -> float:
    """Lower median over time of the across-band Euclidean norm."""
    norms = np.sqrt(np.sum(env.envelopes**2, axis=0))
    mid = (norms.size - 1) // 2
    return float(np.partition(norms, mid)[mid])


def texture_vector(
    w: Waveform,
    cbank: FilterBank,
    mbank: FilterBank,
    envelope_rate: int = DEFAULT_ENVELOPE_RATE,
    exponent: float = DEFAULT_COMPRESSION_EXPONENT,
) -> TextureVector:
    """Full summary: envelopes -> marginals, correlations, modulation
    energies, loudness, concatenated in that order."""
    env = subband_envelopes(w, cbank, envelope_rate=envelope_rate, exponent=exponent)
    idx = CorrelationIndex.for_bands(cbank.n_filters)
    mu, sigma_norm = marginal_stats(env)
    rho = crossband_correlations(env, idx)
    b_norm = modulation_energies(env, mbank)
    return TextureVector(mu=mu, sigma_norm=sigma_norm, rho=rho, b_norm=b_norm, loudness=loudness(env))
