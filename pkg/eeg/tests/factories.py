"""
Small recordings and sessions shared by the test suites.
"""
import numpy as np

from eeg.synth import SynthSpec, generate_session
from eeg.types import BINARY_LABELS, EegRecording


def noise_recording(channels=4, seconds=10, fs=1000.0, seed=0, annotations=()):
    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((channels, int(seconds * fs)))
    return EegRecording(samples=samples, fs=fs, annotations=annotations)


def small_spec(**overrides):
    """Two classes, 8 channels at 500 Hz; a few seconds of signal per class"""
    values = {
        'labels': BINARY_LABELS,
        'channels': 8,
        'fs': 500.0,
        'trials_per_class': 10,
        'snr': 3.0,
        'rng_seed': 1,
    }
    values.update(overrides)
    return SynthSpec(**values)


def small_session(**overrides):
    return generate_session(small_spec(**overrides))
