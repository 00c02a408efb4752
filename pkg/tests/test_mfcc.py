import numpy as np
import pytest

from soundtex import ParameterError, Waveform, flatten, mfcc_matrix
from soundtex.mfcc import cosine_basis, mel_filterbank, n_frames_for

import oracles
from conftest import WORKING_RATE, noise, tone


class TestFraming:
    def test_standard_clip_has_291_frames(self):
        m = mfcc_matrix(noise(0))
        # 3.75 s at 10 kHz = 37500 samples; floor((37500 - 256) / 128) + 1
        assert m.coeffs.shape == (20, 291)
        assert m.flat.shape == (5820,)

    @pytest.mark.parametrize(
        "clip_samples",
        [256, 300, 4096, 37500, 50_000],
    )
    def test_frame_count_arithmetic(self, clip_samples):
        w = Waveform(np.random.default_rng(clip_samples).standard_normal(clip_samples), 10_000)
        m = mfcc_matrix(w)
        assert m.n_frames == (clip_samples - 256) // 128 + 1

    def test_too_short_clip_rejected(self):
        with pytest.raises(ParameterError):
            mfcc_matrix(Waveform(np.zeros(100), 10_000))

    def test_n_frames_for_helper(self):
        assert n_frames_for(256) == 1
        assert n_frames_for(256 + 128) == 2
        with pytest.raises(ParameterError):
            n_frames_for(255)


class TestCoefficients:
    def test_silence_frames_identical_and_finite(self):
        m = mfcc_matrix(Waveform(np.zeros(37_500), 10_000))
        assert np.all(np.isfinite(m.coeffs))
        # every frame is bit-identical, so coefficient variance over frames is 0
        assert np.all(m.coeffs == m.coeffs[:, :1])

    def test_tone_matches_bruteforce_dct(self):
        w = tone(1000.0, seconds=0.5)
        x = np.asarray(w.samples)
        # recompute the log filter energies exactly as production does,
        # then push them through the naive double-sum formula
        from soundtex.dsp import resample_waveform

        x10 = resample_waveform(w, 10_000).samples
        window = np.hamming(256)
        fb = mel_filterbank(20, 256, 10_000)
        m = mfcc_matrix(w)
        for frame_idx in (0, 5, m.n_frames - 1):
            frame = x10[frame_idx * 128 : frame_idx * 128 + 256] * window
            power = np.abs(np.fft.rfft(frame, 256)) ** 2
            log_e = np.log(power @ fb.T + 1e-10)
            ref = oracles.naive_dct_rows(log_e, 20)
            assert np.abs(m.coeffs[:, frame_idx] - ref).max() < 1e-9

    def test_unit_log_energy_reproduces_cosine_column(self):
        # feeding X = e_k through the formula must return the k-th basis column
        basis = cosine_basis(20, 20)
        for k in (0, 7, 19):
            e_k = np.zeros(20)
            e_k[k] = 1.0
            assert np.abs(basis @ e_k - basis[:, k]).max() < 1e-12
            ref = oracles.naive_dct_rows(e_k, 20)
            assert np.abs(basis @ e_k - ref).max() < 1e-12

    def test_last_coefficient_row_is_zero(self):
        # cos(20 (k - 1/2) pi / 20) = 0 for every integer k
        m = mfcc_matrix(noise(1, seconds=0.5))
        assert np.abs(m.coeffs[19]).max() < 1e-9

    def test_deterministic(self):
        w = noise(2, seconds=0.5)
        assert np.array_equal(mfcc_matrix(w).coeffs, mfcc_matrix(w).coeffs)

    def test_all_finite_on_adversarial_inputs(self):
        impulsive = np.zeros(16000)
        impulsive[::1600] = 1.0
        for samples in (np.zeros(16000), impulsive, np.full(16000, 0.9)):
            m = mfcc_matrix(Waveform(samples, WORKING_RATE))
            assert np.all(np.isfinite(m.coeffs))


class TestFlatten:
    def test_length_is_product(self):
        m = mfcc_matrix(noise(3))
        assert flatten(m).size == 20 * m.n_frames

    def test_single_frame_equals_column(self):
        w = Waveform(np.random.default_rng(0).standard_normal(256), 10_000)
        m = mfcc_matrix(w)
        assert m.n_frames == 1
        assert np.array_equal(flatten(m), m.coeffs[:, 0])

    def test_round_trip_reshape(self):
        m = mfcc_matrix(noise(4, seconds=0.5))
        back = flatten(m).reshape(m.n_frames, 20).T
        assert np.array_equal(back, m.coeffs)

    def test_frame_major_order(self):
        m = mfcc_matrix(noise(5, seconds=0.3))
        flat = flatten(m)
        assert np.array_equal(flat[:20], m.coeffs[:, 0])
        assert np.array_equal(flat[20:40], m.coeffs[:, 1])


class TestMelFilterbank:
    def test_unit_peaks_and_coverage(self):
        fb = mel_filterbank(20, 256, 10_000)
        assert fb.shape == (20, 129)
        assert np.all(fb >= 0)
        assert np.allclose(fb.max(axis=1), 1.0, atol=0.15)  # peaks near 1 on the bin grid
