import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from eeg.config import load_pipeline_config, load_synth_spec, read_config_file
from eeg.exceptions import ConfigError


class ConfigFileTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, text):
        path = Path(self.tmp.name) / 'bts.conf'
        path.write_text(text, encoding='utf-8')
        return path

    def test_grammar(self):
        path = self.write('# pipeline\n\nband_lo_hz = 35\nsvm_c = 0.5   # looser margin\n')
        self.assertEqual(read_config_file(path), {'band_lo_hz': ('35', 3), 'svm_c': ('0.5', 4)})

    def test_pipeline_and_split_values(self):
        path = self.write('band_lo_hz = 35\nsvm_c = 0.5\nsvm_tol = 1e-6\nn_train = 8\nn_test = 2\nrng_seed = 7\n')
        config, split = load_pipeline_config(path)
        self.assertEqual(config.band_lo_hz, 35.0)
        self.assertEqual(config.svm_c, 0.5)
        self.assertEqual(config.svm_tol, 1e-6)
        self.assertEqual(config.rng_seed, 7)
        self.assertEqual((split.n_train, split.n_test, split.rng_seed), (8, 2, 7))

    def test_flags_override_file(self):
        path = self.write('svm_c = 0.5\nrng_seed = 7\nn_train = 8\n')
        config, split = load_pipeline_config(path, svm_c=2.0, rng_seed=None, n_train=None, n_test=5)
        self.assertEqual(config.svm_c, 2.0)
        self.assertEqual(config.rng_seed, 7)
        self.assertEqual((split.n_train, split.n_test), (8, 5))

    def test_defaults_without_file(self):
        config, split = load_pipeline_config(None)
        self.assertEqual(config.window_ms, 1000)
        self.assertEqual(split.trials_per_class, 100)

    def test_synth_spec_from_file(self):
        path = self.write('labels = help me, rest\nsnr = 0\nchannels = 16\nwindow_ms = 1000\n')
        spec = load_synth_spec(path, channels=None, rng_seed=4)
        self.assertEqual(spec.labels, ('help me', 'rest'))
        self.assertEqual(spec.snr, 0.0)
        self.assertEqual(spec.channels, 16)
        self.assertEqual(spec.rng_seed, 4)

    def test_errors_name_the_line(self):
        cases = [
            ('band_lo_hz = 30\nbogus = 1\n', 'config_unknown_key', 'line 2'),
            ('svm_c = 1\nsvm_c = 2\n', 'config_duplicate', 'line 2'),
            ('svm_c\n', 'config_syntax', 'line 1'),
            ('\nsvm_c = lots\n', 'config_value', 'line 2'),
        ]
        for text, code, where in cases:
            with self.subTest(code=code):
                with self.assertRaises(ConfigError) as ctx:
                    load_pipeline_config(self.write(text))
                self.assertEqual(ctx.exception.code, code)
                self.assertIn(where, ctx.exception.messages[0])

    def test_missing_file(self):
        with self.assertRaises(ConfigError) as ctx:
            load_pipeline_config(Path(self.tmp.name) / 'absent.conf')
        self.assertEqual(ctx.exception.code, 'config_unreadable')

    def test_invalid_value_is_rejected_by_the_config(self):
        with self.assertRaises(ConfigError) as ctx:
            load_pipeline_config(self.write('hop_ms = 300\n'))
        self.assertEqual(ctx.exception.code, 'bad_windowing')
