"""
Decode a dataset into a JSON-lines command stream.
"""
import json
from pathlib import Path

from eeg.epochs import extract_epochs
from eeg.io import file_sha256, read_dataset
from eeg.management.base import BtsCommand
from monitoring.metrics import PipelineMetrics

from decoding.decoder import event_record, run_pseudo_online
from decoding.evaluation import check_classes, evaluation_trials, resolve_config
from decoding.onset import OnsetDetector, OnsetTracker
from decoding.training import read_model, rest_baseline


class Command(BtsCommand):
    help = 'Replay a dataset through the decoder and write one JSON line per emitted command'
    out_help = 'Event stream to write (JSON lines)'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('dataset', help='Dataset file (.btse)')
        parser.add_argument('model', help='Model file written by `bts train`')
        parser.add_argument('--test-only', action='store_true',
                            help='Decode only the held-out trials of the training session')
        parser.add_argument('--onsets-out', type=Path, help='Also write detected onset times (JSON lines)')

    def handle(self, *args, **options):
        out = self.require(options, 'out')
        model = read_model(options['model'])
        check_classes(model, options['classes'])
        config = resolve_config(model, options['config'], options['seed'])
        recording = read_dataset(options['dataset'])

        if options['test_only']:
            trials = evaluation_trials(recording, model, config, file_sha256(options['dataset']))
        else:
            trials = extract_epochs(recording, duration_ms=config.decision_ms, vocabulary=model.vocabulary)

        tracker = None
        if options['onsets_out']:
            detector = rest_baseline(recording, model, OnsetDetector.from_config(config))
            tracker = OnsetTracker(detector, recording.fs)

        result = run_pseudo_online(
            recording, model, config,
            epoch_boundaries=[trial.start_ms for trial in trials],
            truths=[trial.label for trial in trials],
            onset_tracker=tracker,
        )

        with Path(out).open('w', encoding='utf-8') as handle:
            for event in result.events:
                handle.write(json.dumps(event_record(event, model.vocabulary), ensure_ascii=False) + '\n')
        self.success(f'Wrote {len(result.events)} commands to {out}')

        if tracker is not None:
            with Path(options['onsets_out']).open('w', encoding='utf-8') as handle:
                for t_ms in result.onsets_ms:
                    handle.write(json.dumps({'t_ms': t_ms, 'event': 'onset'}) + '\n')
            PipelineMetrics.log_onsets_detected(result.onsets_ms, recording.duration_ms)
            self.stdout.write(f"Wrote {len(result.onsets_ms)} onsets to {options['onsets_out']}")
        if result.incomplete_epochs or result.empty_epochs:
            self.stdout.write(self.style.WARNING(
                f'{len(result.incomplete_epochs) + len(result.empty_epochs)} epochs had too few windows and '
                f'were skipped'))
