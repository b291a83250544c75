"""
Summarize evaluation reports across sessions, or list recorded runs.
"""
from pathlib import Path

from django.core.management.base import CommandError

from eeg.io import dumps_json
from eeg.management.base import BtsCommand

from decoding.models import EvaluationRun
from decoding.reporting import format_percent, load_report, render_summary, summarize_reports


class Command(BtsCommand):
    help = 'Per-session accuracy table with mean ± std per condition'
    out_help = 'Output file path (optional)'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('reports', nargs='*', help='Report JSON files written by `bts eval --out`')
        parser.add_argument('--history', action='store_true', help='Summarize runs stored with `eval --record`')
        parser.add_argument('--days', type=int, default=30, help='Number of days of history to include')
        parser.add_argument('--condition', choices=['all', 'multiclass', 'binary'], default='all',
                            help='History: keep only multi-class or only 2-class runs')
        parser.add_argument('--controls', choices=['include', 'exclude', 'only'], default='include',
                            help='History: runs whose model was trained on shuffled labels')
        parser.add_argument('--dataset', metavar='SHA256', help='History: runs on this dataset file only')
        parser.add_argument('--format', choices=['text', 'json'], default='text', help='Output format')

    def handle(self, *args, **options):
        if options['history']:
            runs = list(self._runs(options))
            named = [(run.label or f'run-{run.pk}', run.report) for run in runs]
        elif options['reports']:
            named = [(Path(path).stem, load_report(path)) for path in options['reports']]
        else:
            raise CommandError('give report files or --history')
        if not named:
            raise CommandError('no evaluation runs to summarize')

        summary = summarize_reports(named)
        if options['format'] == 'json':
            output = dumps_json(self._jsonable(summary))
        else:
            output = render_summary(summary)
            if options['history']:
                output += '\n\n' + self._history_lines(options, runs)

        if options['out']:
            Path(options['out']).write_text(output + '\n', encoding='utf-8')
            self.stdout.write(f"Report saved to: {options['out']}")
        else:
            self.stdout.write(output)

    def _runs(self, options):
        if options['days'] <= 0:
            raise CommandError('Days must be a positive integer')
        runs = EvaluationRun.objects.recent(options['days'])
        if options['condition'] == 'multiclass':
            runs = runs.multiclass()
        elif options['condition'] == 'binary':
            runs = runs.binary()
        if options['controls'] == 'only':
            runs = runs.controls()
        elif options['controls'] == 'exclude':
            runs = runs.exclude(shuffle_labels=True)
        if options['dataset']:
            runs = runs.for_dataset(options['dataset'])
        return runs.order_by('created_at', 'id')

    def _history_lines(self, options, runs):
        lines = [f"Recorded runs (last {options['days']} days)"]
        for row in self._runs(options).summary():
            lines.append(
                f"  {row['n_classes']}-class: {row['runs']} runs, mean {format_percent(row['mean_accuracy'], 2)} "
                f"(min {format_percent(row['min_accuracy'], 2)}, max {format_percent(row['max_accuracy'], 2)})"
            )
        above = sum(run.above_chance for run in runs)
        lines.append(f'  above chance: {above} of {len(runs)} runs')
        for run in runs:
            if not run.above_chance:
                lines.append(f'    at or below chance: {run}')
        return '\n'.join(lines)

    def _jsonable(self, summary):
        return {
            'conditions': summary['conditions'],
            'sessions': {name: {str(k): v for k, v in row.items()} for name, row in summary['sessions'].items()},
            'summary': {str(k): v for k, v in summary['summary'].items()},
        }
