"""
Pseudo-online evaluation of a trained model on its held-out trials.
"""
from eeg.io import dumps_json, file_sha256, read_dataset, write_json
from eeg.management.base import BtsCommand
from monitoring.metrics import PipelineMetrics

from decoding.decoder import run_pseudo_online
from decoding.evaluation import check_classes, evaluation_trials, resolve_config
from decoding.models import EvaluationRun
from decoding.reporting import build_report, render_report
from decoding.training import read_model


class Command(BtsCommand):
    help = 'Replay held-out trials through the sliding-window decoder and report accuracy'
    out_help = 'Report file to write (JSON)'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('dataset', help='Dataset file (.btse)')
        parser.add_argument('model', help='Model file written by `bts train`')
        parser.add_argument('--all-trials', action='store_true',
                            help='Evaluate every trial, not only the held-out split')
        parser.add_argument('--record', action='store_true', help='Store the run in the database')
        parser.add_argument('--label', default='', help='Session name for --record')
        parser.add_argument('--format', choices=['text', 'json'], default='text', help='Console output format')

    def handle(self, *args, **options):
        model = read_model(options['model'])
        check_classes(model, options['classes'])
        config = resolve_config(model, options['config'], options['seed'])

        recording = read_dataset(options['dataset'])
        dataset_sha256 = file_sha256(options['dataset'])
        trials = evaluation_trials(recording, model, config, dataset_sha256, options['all_trials'])

        result = run_pseudo_online(
            recording, model, config,
            epoch_boundaries=[trial.start_ms for trial in trials],
            truths=[trial.label for trial in trials],
        )
        report = build_report(result, model, config, dataset_sha256, file_sha256(options['model']))
        PipelineMetrics.log_evaluation_completed(report)

        if options['out']:
            write_json(report, options['out'])
        if options['record']:
            run = EvaluationRun.from_report(report, label=options['label'])
            run.save()

        if options['format'] == 'json':
            self.stdout.write(dumps_json(report))
        else:
            self.stdout.write(render_report(report))
        if options['out']:
            self.success(f"Report written to {options['out']}")
        if options['record']:
            self.stdout.write(f'Recorded as run #{run.pk}')
