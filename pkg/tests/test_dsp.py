import numpy as np
import pytest
from scipy.signal import hilbert as scipy_hilbert

from soundtex import (
    EnvelopeSet,
    ParameterError,
    PipelineError,
    Waveform,
    analytic_signal,
    make_cochlear_bank,
    make_modulation_bank,
    resample_waveform,
    subband_envelopes,
)
from soundtex.dsp import fit_length

from conftest import WORKING_RATE, noise, tone


class TestWaveform:
    def test_rejects_empty(self):
        with pytest.raises(ParameterError):
            Waveform(np.array([]), 16000)

    def test_rejects_nan(self):
        with pytest.raises(ParameterError):
            Waveform(np.array([0.0, np.nan]), 16000)

    def test_rejects_bad_rate(self):
        with pytest.raises(ParameterError):
            Waveform(np.zeros(10), 0)

    def test_duration(self):
        assert Waveform(np.zeros(8000), 16000).duration == 0.5


class TestCochlearBank:
    def test_perfect_reconstruction_on_passband(self, cochlear_bank):
        freqs = cochlear_bank.freq_grid
        total = (cochlear_bank.gains**2).sum(axis=0)
        passband = (freqs >= 20.0) & (freqs <= 8000.0)
        assert np.abs(total[passband] - 1.0).max() < 1e-6

    def test_n_filters_and_centers(self, cochlear_bank):
        assert cochlear_bank.n_filters == 32
        assert np.all(np.diff(cochlear_bank.center_freqs) > 0)
        assert cochlear_bank.center_freqs[0] == pytest.approx(20.0)
        assert cochlear_bank.center_freqs[-1] == pytest.approx(8000.0)

    def test_minimal_bank(self):
        bank = make_cochlear_bank(3, 16000, 100.0, 4000.0)
        assert bank.n_filters == 3
        assert np.all(np.diff(bank.center_freqs) > 0)

    def test_inverted_range_rejected(self):
        with pytest.raises(ParameterError):
            make_cochlear_bank(32, 16000, 8000.0, 20.0)

    def test_above_nyquist_rejected(self):
        with pytest.raises(ParameterError):
            make_cochlear_bank(32, 16000, 20.0, 9000.0)

    def test_too_few_subbands_rejected(self):
        with pytest.raises(ParameterError):
            make_cochlear_bank(2, 16000, 20.0, 8000.0)

    def test_gains_bounded(self, cochlear_bank):
        assert np.all(cochlear_bank.gains >= 0)
        assert np.all(cochlear_bank.gains <= 1 + 1e-12)

    def test_evaluate_matches_reference_grid(self, cochlear_bank):
        again = cochlear_bank.evaluate(cochlear_bank.freq_grid)
        assert np.array_equal(again, cochlear_bank.gains)


class TestModulationBank:
    def test_log_spaced_centers(self, modulation_bank):
        centers = modulation_bank.center_freqs
        assert centers[0] == pytest.approx(0.5)
        assert centers[-1] == pytest.approx(200.0)
        ratios = centers[1:] / centers[:-1]
        assert np.allclose(ratios, (200.0 / 0.5) ** (1.0 / 9.0), rtol=1e-12)

    def test_single_filter(self):
        bank = make_modulation_bank(1, 400)
        assert bank.n_filters == 1
        assert bank.center_freqs[0] == pytest.approx(0.5)

    def test_gains_finite_nonnegative(self, modulation_bank):
        assert np.all(np.isfinite(modulation_bank.gains))
        assert np.all(modulation_bank.gains >= 0)

    def test_unit_gain_at_center_zero_at_dc(self, modulation_bank):
        gains = modulation_bank.evaluate(modulation_bank.center_freqs)
        assert np.allclose(np.diag(gains), 1.0)
        assert np.all(modulation_bank.evaluate(np.array([0.0])) == 0.0)

    def test_rejects_zero_filters(self):
        with pytest.raises(ParameterError):
            make_modulation_bank(0, 400)


class TestAnalyticSignal:
    def test_pure_tone_envelope_is_flat(self):
        w = tone(440.0, seconds=1.0, amplitude=1.0)
        env = np.abs(analytic_signal(w.samples))
        interior = env[100:-100]
        assert np.abs(interior - 1.0).max() < 0.01

    def test_zeros_map_to_zeros(self):
        out = analytic_signal(np.zeros(256))
        assert np.all(out == 0)

    def test_real_part_identity(self):
        x = np.random.default_rng(7).standard_normal(4096)
        assert np.abs(analytic_signal(x).real - x).max() < 1e-9

    def test_linearity(self):
        rng = np.random.default_rng(11)
        x, y = rng.standard_normal(1024), rng.standard_normal(1024)
        lhs = analytic_signal(2.5 * x - 0.7 * y)
        rhs = 2.5 * analytic_signal(x) - 0.7 * analytic_signal(y)
        assert np.abs(lhs - rhs).max() < 1e-9

    def test_matches_scipy(self):
        for n in (255, 256):
            x = np.random.default_rng(n).standard_normal(n)
            assert np.abs(analytic_signal(x) - scipy_hilbert(x)).max() < 1e-9

    def test_rejects_empty_and_short(self):
        with pytest.raises(ParameterError):
            analytic_signal(np.array([]))
        with pytest.raises(ParameterError):
            analytic_signal(np.array([1.0]))


class TestSubbandEnvelopes:
    def test_shape_for_standard_clip(self, cochlear_bank):
        env = subband_envelopes(noise(0), cochlear_bank)
        assert env.envelopes.shape == (32, 1500)  # 3.75 s * 400 Hz
        assert env.envelope_rate == 400

    def test_silence_gives_zero_envelopes(self, cochlear_bank):
        w = Waveform(np.zeros(60000), WORKING_RATE)
        env = subband_envelopes(w, cochlear_bank)
        assert np.all(env.envelopes == 0)

    def test_tone_energy_concentrates_in_its_band(self, cochlear_bank):
        k = 16
        # snap the tone to an FFT bin so spectral leakage stays negligible
        n = 60000
        center = cochlear_bank.center_freqs[k]
        freq = round(center * n / WORKING_RATE) * WORKING_RATE / n
        env = subband_envelopes(tone(freq), cochlear_bank).envelopes
        energy = (env**2).mean(axis=1)
        gains_at_tone = cochlear_bank.evaluate(np.array([freq]))[:, 0]
        far = [i for i in range(32) if abs(i - k) >= 3]
        assert np.all(gains_at_tone[far] == 0)  # oracle: disjoint supports
        assert energy[k] >= 10.0 * energy[far].max()

    def test_scaling_covariance(self, cochlear_bank):
        w = noise(3, seconds=0.5)
        alpha = 3.7
        scaled = Waveform(alpha * w.samples, w.sample_rate)
        base = subband_envelopes(w, cochlear_bank).envelopes
        big = subband_envelopes(scaled, cochlear_bank).envelopes
        mask = base > 1e-8
        ratio = big[mask] / base[mask]
        assert np.abs(ratio - alpha**0.3).max() < 1e-6 * alpha**0.3

    def test_rate_mismatch_names_both_rates(self, cochlear_bank):
        w = noise(1, seconds=0.1, rate=22050)
        with pytest.raises(PipelineError, match="22050"):
            subband_envelopes(w, cochlear_bank)
        with pytest.raises(PipelineError, match="16000"):
            subband_envelopes(w, cochlear_bank)

    def test_determinism(self, cochlear_bank):
        w = noise(5, seconds=0.5)
        a = subband_envelopes(w, cochlear_bank).envelopes
        b = subband_envelopes(w, cochlear_bank).envelopes
        assert np.array_equal(a, b)

    def test_too_short_clip_rejected(self, cochlear_bank):
        w = Waveform(np.zeros(10), WORKING_RATE)  # rounds to zero envelope samples
        with pytest.raises(ParameterError):
            subband_envelopes(w, cochlear_bank)

    def test_envelope_set_rejects_negative(self):
        with pytest.raises(ParameterError):
            EnvelopeSet(np.array([[-1.0, 0.0]]), 400, 0.3)


class TestResampleAndFit:
    def test_resample_identity(self):
        w = noise(2, seconds=0.25)
        assert resample_waveform(w, WORKING_RATE) is w

    def test_resample_length(self):
        w = noise(2, seconds=0.5, rate=22050)
        out = resample_waveform(w, 16000)
        assert out.sample_rate == 16000
        assert out.samples.size == 8000

    def test_fit_length_pads_and_crops(self):
        assert np.array_equal(fit_length(np.array([1.0, 2.0]), 4), [1.0, 2.0, 0.0, 0.0])
        assert np.array_equal(fit_length(np.arange(6, dtype=float), 4), [1.0, 2.0, 3.0, 4.0])
        x = np.arange(4, dtype=float)
        assert np.array_equal(fit_length(x, 4), x)
