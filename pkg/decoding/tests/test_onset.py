import numpy as np
import pytest
from django.test import SimpleTestCase

from eeg.exceptions import DecoderError
from eeg.types import EegRecording, PipelineConfig

from decoding.onset import OnsetDetector, OnsetTracker, detect_onsets, fit_baseline, moving_rms

FS = 1000.0


def noise(seconds, seed, channels=4):
    return np.random.default_rng(seed).standard_normal((channels, int(seconds * FS)))


def with_bursts(samples, bursts, gain=3.0):
    """Scale the signal by ``gain`` during each (start_ms, stop_ms) burst"""
    samples = samples.copy()
    for start_ms, stop_ms in bursts:
        samples[:, int(start_ms):int(stop_ms)] *= gain
    return samples


class OnsetDetectorTests(SimpleTestCase):
    def setUp(self):
        self.detector = fit_baseline(OnsetDetector(), [noise(30, seed=100)], FS)

    def test_from_config(self):
        detector = OnsetDetector.from_config(PipelineConfig(onset_threshold_z=3.0, onset_refractory_ms=500))
        self.assertEqual(detector.threshold_z, 3.0)
        self.assertEqual(detector.refractory_ms, 500)
        self.assertFalse(detector.fitted)
        self.assertTrue(self.detector.fitted)

    def test_moving_rms(self):
        self.assertTrue(np.all(moving_rms(np.full((2, 1000), 5.0), FS) == 0))
        t = np.arange(1000) / FS
        sine = np.vstack([np.sin(2 * np.pi * 50 * t), 2 * np.sin(2 * np.pi * 50 * t)])
        np.testing.assert_allclose(moving_rms(sine, FS), 1.5 / np.sqrt(2), rtol=1e-9)
        self.assertEqual(len(moving_rms(np.zeros((1, 1050)), FS)), 10)

    def test_single_step(self):
        rec = EegRecording(samples=with_bursts(noise(10, seed=1), [(5000, 10_000)]), fs=FS)
        onsets = detect_onsets(rec, self.detector)
        self.assertEqual(len(onsets), 1)
        self.assertTrue(5000 <= onsets[0] <= 5300, onsets)

    def test_two_steps_three_seconds_apart(self):
        samples = with_bursts(noise(12, seed=2), [(5000, 6500), (8000, 9500)])
        onsets = detect_onsets(EegRecording(samples=samples, fs=FS), self.detector)
        self.assertEqual(onsets, [5200, 8200])

    def test_refractory_period(self):
        samples = with_bursts(noise(10, seed=3), [(5000, 5300), (5600, 6000)])
        detector = fit_baseline(OnsetDetector(refractory_ms=1000), [noise(30, seed=100)], FS)
        self.assertEqual(detect_onsets(EegRecording(samples=samples, fs=FS), detector), [5200])

    def test_baseline_noise_is_quiet(self):
        onsets = detect_onsets(EegRecording(samples=noise(60, seed=4), fs=FS), self.detector)
        self.assertLessEqual(len(onsets), 1)

    def test_chunking_does_not_matter(self):
        samples = with_bursts(noise(12, seed=5), [(3050, 4000), (7420, 9000)])
        whole = detect_onsets(EegRecording(samples=samples, fs=FS), self.detector)

        tracker = OnsetTracker(self.detector, FS)
        for part in np.array_split(samples, [333, 1000, 4999, 5001, 9876], axis=1):
            tracker.feed(part)
        self.assertEqual(tracker.onsets, whole)
        self.assertEqual(len(whole), 2)

    def test_requires_baseline(self):
        with self.assertRaises(DecoderError) as ctx:
            OnsetTracker(OnsetDetector(), FS)
        self.assertEqual(ctx.exception.code, 'no_baseline')

        with self.assertRaises(DecoderError) as ctx:
            fit_baseline(OnsetDetector(), [np.zeros((2, 150))], FS)
        self.assertEqual(ctx.exception.code, 'short_baseline')


@pytest.mark.slow
class OnsetLatencyTests(SimpleTestCase):
    def test_fifty_steps(self):
        detector = fit_baseline(OnsetDetector(), [noise(60, seed=200)], FS)
        rng = np.random.default_rng(201)
        for trial in range(50):
            step_ms = 2000 + int(rng.integers(0, 1000))
            samples = with_bursts(noise(4, seed=300 + trial), [(step_ms, 4000)])
            onsets = detect_onsets(EegRecording(samples=samples, fs=FS), detector)
            self.assertTrue(any(step_ms <= t <= step_ms + 300 for t in onsets), (step_ms, onsets))
