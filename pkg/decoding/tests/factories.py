"""
A small calibrated decoder shared by the decoding test suites.
"""
from eeg.tests.factories import small_session
from eeg.types import PipelineConfig, SplitSpec, Vocabulary

from decoding.training import calibrate


def small_calibration(config=None, **spec_overrides):
    """(recording, manifest, Calibration) for a 10-trial-per-class binary session"""
    recording, manifest = small_session(**spec_overrides)
    config = config or PipelineConfig()
    split = SplitSpec(n_train=8, n_test=2, rng_seed=config.rng_seed)
    return recording, manifest, calibrate(recording, config, split, Vocabulary.binary())
