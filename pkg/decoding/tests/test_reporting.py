import json

from django.test import SimpleTestCase

from eeg.types import PipelineConfig

from decoding.decoder import run_pseudo_online
from decoding.reporting import build_report, format_percent, render_report, render_summary, summarize_reports

from .factories import small_calibration

MULTICLASS = [41.54, 45.00, 30.77, 63.46, 48.85, 56.92, 42.31, 43.46, 46.54]
BINARY = [72.5, 85, 80, 77.5, 77.5, 77.5, 65, 70, 75]


def report_stub(n_classes, accuracy):
    return {'n_classes': n_classes, 'accuracy': accuracy}


def session_reports():
    reports = []
    for i, (multi, binary) in enumerate(zip(MULTICLASS, BINARY), start=1):
        reports.append((f'S{i}', report_stub(13, multi / 100)))
        reports.append((f'S{i}', report_stub(2, binary / 100)))
    return reports


class FormatPercentTests(SimpleTestCase):
    def test_values(self):
        self.assertEqual(format_percent(1 / 13), '7.7%')
        self.assertEqual(format_percent(0.5), '50%')
        self.assertEqual(format_percent(0.4654, 2), '46.54%')
        self.assertEqual(format_percent(1.0), '100%')
        self.assertEqual(format_percent(None), 'n/a')


class SummaryTests(SimpleTestCase):
    def setUp(self):
        self.summary = summarize_reports(session_reports())

    def test_conditions_and_sessions(self):
        self.assertEqual(self.summary['conditions'], [13, 2])
        self.assertEqual(len(self.summary['sessions']), 9)
        self.assertAlmostEqual(self.summary['sessions']['S4'][13], 0.6346)

    def test_mean_and_sample_std(self):
        multiclass = self.summary['summary'][13]
        self.assertEqual(multiclass['sessions'], 9)
        self.assertAlmostEqual(multiclass['mean'] * 100, 46.54, delta=0.005)
        self.assertAlmostEqual(multiclass['std'] * 100, 9.37, delta=0.005)

        binary = self.summary['summary'][2]
        self.assertAlmostEqual(binary['mean'] * 100, 75.56, delta=0.005)
        self.assertAlmostEqual(binary['std'] * 100, 5.83, delta=0.005)
        self.assertEqual(binary['chance_level'], 0.5)

    def test_rendered_table(self):
        text = render_summary(self.summary)
        lines = text.splitlines()
        self.assertIn('13-class (%)', lines[0])
        self.assertIn('2-class (%)', lines[0])
        self.assertTrue(lines[1].startswith('S1'))
        self.assertIn('41.54', lines[1])
        self.assertIn('72.50', lines[1])
        self.assertIn('46.54 ± 9.37', text)
        self.assertIn('75.56 ± 5.83', text)
        self.assertTrue(lines[-1].startswith('Chance level'))
        self.assertIn('7.7%', lines[-1])
        self.assertIn('50%', lines[-1])

    def test_single_session_has_zero_spread(self):
        summary = summarize_reports([('only', report_stub(2, 0.8))])
        self.assertEqual(summary['summary'][2]['std'], 0.0)

    def test_missing_condition_shows_dash(self):
        summary = summarize_reports([('a', report_stub(13, 0.4)), ('a', report_stub(2, 0.7)),
                                     ('b', report_stub(2, 0.9))])
        row = render_summary(summary).splitlines()[2]
        self.assertTrue(row.startswith('b'))
        self.assertIn('-', row.split()[1])


class BuildReportTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        rec, _, calibration = small_calibration()
        model = calibration.model
        starts = [epoch.start_ms for epoch in calibration.test]
        truths = [epoch.label for epoch in calibration.test]
        cls.result = run_pseudo_online(rec, model, model.config, starts, truths)
        cls.report = build_report(cls.result, model, model.config, 'ab' * 32, 'cd' * 32)

    def test_contents(self):
        report = self.report
        self.assertEqual(report['format'], 'bts-report')
        self.assertEqual(report['n_classes'], 2)
        self.assertEqual(report['n_events'], 4)
        self.assertEqual(report['n_windows'], 44)
        self.assertEqual(report['votes_per_event'], [11])
        self.assertEqual(report['chance_level'], 0.5)
        self.assertEqual(report['config'], PipelineConfig().to_dict())
        self.assertEqual(sum(map(sum, report['confusion'])), 4)
        self.assertEqual({label: v['trials'] for label, v in report['per_class'].items()},
                         {'help me': 2, 'rest': 2})
        self.assertEqual(report['accuracy'], self.result.accuracy)

    def test_json_serializable_and_time_free(self):
        text = json.dumps(self.report, sort_keys=True)
        self.assertNotIn('created', text)
        self.assertEqual(json.loads(text)['dataset_sha256'], 'ab' * 32)

    def test_render(self):
        text = render_report(self.report)
        self.assertIn('2 classes, 4 decisions', text)
        self.assertIn('(chance level = 50%)', text)
        self.assertIn('Votes per decision: 11', text)
        self.assertIn('help me', text)
        self.assertNotIn('WARNING', text)
