import numpy as np
from django.test import SimpleTestCase, override_settings

from eeg.exceptions import ConfigError, FilterDesignError, RecordingError
from eeg.types import (
    DEFAULT_LABELS,
    EegRecording,
    PipelineConfig,
    SplitSpec,
    TrialEpoch,
    Vocabulary,
)


class VocabularyTests(SimpleTestCase):
    def test_default_vocabulary(self):
        """Twelve words plus rest, indexed from 0"""
        vocabulary = Vocabulary.default()
        self.assertEqual(len(vocabulary), 13)
        self.assertEqual(vocabulary.label(0), 'ambulance')
        self.assertEqual(vocabulary.index('rest'), 12)
        self.assertEqual([k for k, _ in vocabulary.entries], list(range(13)))

    def test_from_option(self):
        self.assertEqual(Vocabulary.from_option(None), Vocabulary.default())
        self.assertEqual(Vocabulary.from_option('13'), Vocabulary.default())
        self.assertEqual(Vocabulary.from_option('2').labels, ('help me', 'rest'))
        self.assertEqual(Vocabulary.from_option('water, yes ,rest').labels, ('water', 'yes', 'rest'))

    def test_restrict_reindexes(self):
        binary = Vocabulary.default().restrict(['help me', 'rest'])
        self.assertEqual(binary.index('help me'), 0)
        self.assertEqual(binary.index('rest'), 1)

    def test_invalid_vocabularies(self):
        with self.assertRaises(ConfigError) as ctx:
            Vocabulary(('yes', 'yes'))
        self.assertEqual(ctx.exception.code, 'duplicate_label')

        with self.assertRaises(ConfigError) as ctx:
            Vocabulary.from_option('yes,banana')
        self.assertEqual(ctx.exception.code, 'unknown_label')

        with self.assertRaises(ConfigError) as ctx:
            Vocabulary.from_option('yes')
        self.assertEqual(ctx.exception.code, 'bad_classes')

        with self.assertRaises(ConfigError):
            Vocabulary.default().label(13)


class EegRecordingTests(SimpleTestCase):
    def test_recording_properties(self):
        rec = EegRecording(samples=np.zeros((3, 2500)), fs=500, annotations=[(0, 'yes')])
        self.assertEqual(rec.n_channels, 3)
        self.assertEqual(rec.n_samples, 2500)
        self.assertEqual(rec.duration_ms, 5000.0)
        self.assertEqual(rec.channel_names, ('Ch01', 'Ch02', 'Ch03'))
        self.assertEqual(rec.annotations[0].label, 'yes')
        self.assertEqual(rec.ms_to_sample(1200), 600)

    def test_samples_are_read_only(self):
        rec = EegRecording(samples=np.zeros((2, 10)), fs=1000)
        with self.assertRaises(ValueError):
            rec.samples[0, 0] = 1.0

    def test_rejects_bad_input(self):
        with self.assertRaises(RecordingError) as ctx:
            EegRecording(samples=np.zeros(10), fs=1000)
        self.assertEqual(ctx.exception.code, 'bad_shape')

        samples = np.zeros((2, 10))
        samples[1, 3] = np.nan
        with self.assertRaises(RecordingError) as ctx:
            EegRecording(samples=samples, fs=1000)
        self.assertEqual(ctx.exception.code, 'non_finite')

        with self.assertRaises(RecordingError) as ctx:
            EegRecording(samples=np.zeros((2, 10)), fs=1000, channel_names=('Cz',))
        self.assertEqual(ctx.exception.code, 'bad_channel_names')

        with self.assertRaises(ConfigError):
            EegRecording(samples=np.zeros((2, 10)), fs=0)


class TrialEpochTests(SimpleTestCase):
    def test_length_must_match_duration(self):
        epoch = TrialEpoch(samples=np.zeros((4, 2000)), label=3, fs=1000)
        self.assertEqual(epoch.n_channels, 4)

        with self.assertRaises(RecordingError) as ctx:
            TrialEpoch(samples=np.zeros((4, 1999)), label=3, fs=1000)
        self.assertEqual(ctx.exception.code, 'bad_epoch_length')

    def test_label_must_be_an_index(self):
        with self.assertRaises(RecordingError):
            TrialEpoch(samples=np.zeros((1, 1000)), label=-1, fs=500)


class PipelineConfigTests(SimpleTestCase):
    def test_defaults(self):
        config = PipelineConfig()
        self.assertEqual((config.band_lo_hz, config.band_hi_hz), (30.0, 120.0))
        self.assertEqual(config.overlap_ms, 900)
        self.assertEqual(config.votes_per_decision, 11)

    def test_windowing_rules(self):
        with self.assertRaises(ConfigError) as ctx:
            PipelineConfig(decision_ms=900)
        self.assertEqual(ctx.exception.code, 'bad_windowing')

        with self.assertRaises(ConfigError) as ctx:
            PipelineConfig(hop_ms=300)
        self.assertEqual(ctx.exception.code, 'bad_windowing')

        with self.assertRaises(ConfigError):
            PipelineConfig(filter_order=3)

        with self.assertRaises(ConfigError):
            PipelineConfig(covariance_shrinkage=1.5)

    def test_band_checks(self):
        with self.assertRaises(FilterDesignError) as ctx:
            PipelineConfig(band_lo_hz=120, band_hi_hz=30)
        self.assertEqual(ctx.exception.code, 'bad_band')

        with self.assertRaises(FilterDesignError) as ctx:
            PipelineConfig().validate_for_fs(200)
        self.assertEqual(ctx.exception.code, 'nyquist')
        self.assertIn('band edge violates Nyquist', ctx.exception.messages[0])

        with self.assertRaises(RecordingError) as ctx:
            PipelineConfig().validate_for_fs(333)
        self.assertEqual(ctx.exception.code, 'off_grid')

    @override_settings(BTS_PIPELINE_DEFAULTS={'svm_c': 0.25, 'rng_seed': 9})
    def test_from_settings(self):
        config = PipelineConfig.from_settings(rng_seed=None)
        self.assertEqual(config.svm_c, 0.25)
        self.assertEqual(config.rng_seed, 9)
        self.assertEqual(PipelineConfig.from_settings(rng_seed=3).rng_seed, 3)

    def test_signature_ignores_training_only_fields(self):
        self.assertEqual(PipelineConfig().signature(), PipelineConfig(svm_c=5, rng_seed=4).signature())
        self.assertNotEqual(PipelineConfig().signature(), PipelineConfig(hop_ms=200).signature())


class SplitSpecTests(SimpleTestCase):
    def test_defaults(self):
        split = SplitSpec()
        self.assertEqual((split.n_train, split.n_test), (80, 20))
        self.assertEqual(split.trials_per_class, 100)

    def test_positive_counts(self):
        with self.assertRaises(ConfigError):
            SplitSpec(n_train=0)

    def test_default_labels(self):
        self.assertEqual(len(DEFAULT_LABELS), 13)
