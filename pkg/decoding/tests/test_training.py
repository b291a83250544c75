import dataclasses
import json
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from eeg.exceptions import DecoderError, ModelFileError, RecordingError
from eeg.tests.factories import small_session
from eeg.types import PipelineConfig, SplitSpec, Vocabulary

from decoding.onset import OnsetDetector
from decoding.svm import decision_scores
from decoding.training import (
    MODEL_VERSION,
    calibrate,
    read_model,
    rest_baseline,
    shuffled_labels,
    window_offsets,
    write_model,
)

from .factories import small_calibration


class CalibrateTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.rec, cls.manifest, cls.calibration = small_calibration()
        cls.model = cls.calibration.model

    def test_split_sizes(self):
        self.assertEqual(self.calibration.train_counts, {'help me': 8, 'rest': 8})
        self.assertEqual(len(self.calibration.test), 4)
        train_starts = {epoch.start_ms for epoch in self.calibration.train}
        self.assertFalse(train_starts & {epoch.start_ms for epoch in self.calibration.test})

    def test_window_count(self):
        offsets, window = window_offsets(PipelineConfig(), 500.0)
        self.assertEqual(offsets, [0, 250, 500])
        self.assertEqual(window, 500)
        self.assertEqual(self.model.metadata['n_train_windows'], 48)

    def test_model_contents(self):
        self.assertEqual(self.model.vocabulary, Vocabulary.binary())
        self.assertEqual(self.model.fs, 500.0)
        self.assertEqual(self.model.bank.feature_dim, 8)
        self.assertEqual(self.model.classifier.n_classes, 2)
        self.assertEqual(self.model.split, SplitSpec(n_train=8, n_test=2, rng_seed=0))
        self.assertFalse(self.model.metadata['shuffle_labels'])

    def test_deterministic(self):
        _, _, again = small_calibration()
        self.assertEqual(again.model.to_dict(), self.model.to_dict())

    def test_calibration_is_logged(self):
        with self.assertLogs('bts.metrics', level='INFO') as logs:
            small_calibration()
        record = logs.records[-1]
        self.assertEqual(record.event_type, 'calibration_completed')
        self.assertEqual(record.train_counts, {'help me': 8, 'rest': 8})

    def test_shuffled_labels_keep_class_counts(self):
        labels = np.repeat([0, 1, 2], 8)
        shuffled = shuffled_labels(labels, 0)
        np.testing.assert_array_equal(np.bincount(shuffled), [8, 8, 8])
        self.assertFalse(np.array_equal(shuffled, labels))
        np.testing.assert_array_equal(shuffled, shuffled_labels(labels, 0))

    def test_shuffled_calibration(self):
        split = SplitSpec(n_train=8, n_test=2)
        control = calibrate(self.rec, PipelineConfig(), split, Vocabulary.binary(), shuffle_labels=True)
        self.assertTrue(control.model.metadata['shuffle_labels'])
        self.assertNotEqual(control.model.to_dict()['bank'], self.model.to_dict()['bank'])

    def test_insufficient_trials(self):
        with self.assertRaises(RecordingError) as ctx:
            calibrate(self.rec, PipelineConfig(), SplitSpec(n_train=9, n_test=2), Vocabulary.binary())
        self.assertEqual(ctx.exception.code, 'insufficient_trials')


class ModelFileTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        _, _, calibration = small_calibration()
        cls.model = calibration.model

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def write(self, data, name='model.json'):
        path = self.dir / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding='utf-8')
        return path

    def test_round_trip(self):
        path = write_model(self.model, self.dir / 'model.json')
        restored = read_model(path)
        self.assertEqual(restored.to_dict(), self.model.to_dict())
        features = np.random.default_rng(0).standard_normal((5, self.model.bank.feature_dim))
        np.testing.assert_array_equal(decision_scores(restored.classifier, features),
                                      decision_scores(self.model.classifier, features))

    def test_written_file_is_stable(self):
        first = write_model(self.model, self.dir / 'a.json').read_bytes()
        second = write_model(read_model(self.dir / 'a.json'), self.dir / 'b.json').read_bytes()
        self.assertEqual(first, second)

    def test_read_errors(self):
        data = self.model.to_dict()
        cases = [
            ({**data, 'format': 'bts-report'}, 'bad_format'),
            ({**data, 'version': MODEL_VERSION + 1}, 'version_mismatch'),
            ({key: value for key, value in data.items() if key != 'bank'}, 'malformed'),
            ({**data, 'vocabulary': ['yes', 'water', 'rest']}, 'inconsistent'),
            ('[1, 2]', 'malformed'),
            ('{"format": ', 'bad_json'),
        ]
        for content, code in cases:
            with self.subTest(code=code):
                with self.assertRaises(ModelFileError) as ctx:
                    read_model(self.write(content))
                self.assertEqual(ctx.exception.code, code)

        with self.assertRaises(ModelFileError) as ctx:
            read_model(self.dir / 'missing.json')
        self.assertEqual(ctx.exception.code, 'unreadable')


class RestBaselineTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.rec, _, calibration = small_calibration()
        cls.model = calibration.model

    def test_rest_trials(self):
        detector = rest_baseline(self.rec, self.model, OnsetDetector.from_config(self.model.config))
        self.assertTrue(detector.fitted)
        self.assertGreater(detector.baseline_std, 0)

    def test_lead_in_without_rest_class(self):
        model = dataclasses.replace(self.model, vocabulary=Vocabulary(('help me', 'yes')))
        detector = rest_baseline(self.rec, model, OnsetDetector())
        self.assertTrue(detector.fitted)

    def test_no_rest_data(self):
        rec, _ = small_session(trials_per_class=2, lead_ms=0)
        model = dataclasses.replace(self.model, vocabulary=Vocabulary(('help me', 'yes')))
        with self.assertRaises(DecoderError) as ctx:
            rest_baseline(rec, model, OnsetDetector())
        self.assertEqual(ctx.exception.code, 'no_rest_data')
