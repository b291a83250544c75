"""
Evaluation reports: a deterministic JSON document per pseudo-online run,
its text rendering, and the cross-session summary table.
"""
import statistics
from collections import defaultdict

from eeg.io import read_json

REPORT_FORMAT = 'bts-report'


def format_percent(fraction, digits=1):
    """0.0769 -> '7.7%', 0.5 -> '50%'"""
    if fraction is None:
        return 'n/a'
    text = f'{fraction * 100:.{digits}f}'
    if '.' in text:
        text = text.rstrip('0').rstrip('.')
    return f'{text}%'


def build_report(result, model, config, dataset_sha256, model_sha256=None):
    """Everything needed to reproduce the run, and nothing time-dependent"""
    vocabulary = model.vocabulary
    confusion = result.confusion
    per_class = {}
    for k, label in vocabulary.entries:
        trials = int(confusion[k].sum())
        correct = int(confusion[k, k])
        per_class[label] = {
            'trials': trials,
            'correct': correct,
            'accuracy': correct / trials if trials else None,
        }

    return {
        'format': REPORT_FORMAT,
        'dataset_sha256': dataset_sha256,
        'model_sha256': model_sha256,
        'config': config.to_dict(),
        'seed': config.rng_seed,
        'training': {
            'seed': model.metadata.get('seed'),
            'split': model.metadata.get('split'),
            'shuffle_labels': model.metadata.get('shuffle_labels', False),
        },
        'vocabulary': list(vocabulary.labels),
        'n_classes': len(vocabulary),
        'n_events': len(result.events),
        'n_windows': result.n_windows,
        'votes_per_event': sorted({len(event.votes) for event in result.events}),
        'accuracy': result.accuracy,
        'chance_level': result.chance_level,
        'n_ties': result.n_ties,
        'empty_epochs_ms': result.empty_epochs,
        'incomplete_epochs_ms': result.incomplete_epochs,
        'confusion': confusion.tolist(),
        'per_class': per_class,
        'events': [
            {
                'epoch_start_ms': event.epoch_start_ms,
                'truth': vocabulary.label(event.truth) if event.truth is not None else None,
                'command': vocabulary.label(event.command),
                'votes': len(event.votes),
                'histogram': {vocabulary.label(k): count for k, count in event.histogram},
                'tie_broken': event.tie_broken,
            }
            for event in result.events
        ],
    }


def render_report(report):
    """Human-readable table of one report"""
    labels = report['vocabulary']
    width = max(len(label) for label in labels)
    lines = [
        f"Pseudo-online evaluation: {report['n_classes']} classes, {report['n_events']} decisions",
        f"Accuracy: {format_percent(report['accuracy'], 2)} "
        f"(chance level = {format_percent(report['chance_level'])})",
        f"Ties broken: {report['n_ties']}",
        f"Votes per decision: {', '.join(str(n) for n in report['votes_per_event']) or 'none'}",
    ]
    if report['n_windows'] == 0:
        lines.append('WARNING: recording too short for a single analysis window')
    if report['incomplete_epochs_ms'] or report['empty_epochs_ms']:
        lines.append(f"Skipped epochs: {len(report['incomplete_epochs_ms']) + len(report['empty_epochs_ms'])}")
    if report['training']['shuffle_labels']:
        lines.append('Model trained on shuffled labels (chance-level control)')

    lines.append('')
    lines.append('Confusion matrix (rows = true class, columns = command)')
    cell = max(3, len(str(max((max(row) for row in report['confusion']), default=0))))
    header = ' ' * (width + 2) + ' '.join(f'{k:>{cell}d}' for k in range(len(labels)))
    lines.append(header)
    for k, (label, row) in enumerate(zip(labels, report['confusion'])):
        counts = ' '.join(f'{value:>{cell}d}' for value in row)
        accuracy = format_percent(report['per_class'][label]['accuracy'])
        lines.append(f'{label:<{width}}  {counts}   {accuracy:>6} [{k}]')
    return '\n'.join(lines)


def load_report(path):
    return read_json(path)


def _mean_std(values):
    if not values:
        return None, None
    mean = statistics.fmean(values)
    std = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, std


def summarize_reports(named_reports):
    """
    Per-session accuracy rows and mean +- sample std per class count.

    ``named_reports`` is a list of (session name, report dict).
    """
    sessions = defaultdict(dict)
    by_condition = defaultdict(list)
    for name, report in named_reports:
        k = report['n_classes']
        sessions[name][k] = report['accuracy']
        if report['accuracy'] is not None:
            by_condition[k].append(report['accuracy'])

    conditions = sorted(by_condition, reverse=True)
    summary = {}
    for k in conditions:
        mean, std = _mean_std(by_condition[k])
        summary[k] = {'sessions': len(by_condition[k]), 'mean': mean, 'std': std, 'chance_level': 1.0 / k}
    return {'conditions': conditions, 'sessions': dict(sessions), 'summary': summary}


def render_summary(summary):
    conditions = summary['conditions']
    names = list(summary['sessions'])
    width = max([len('Average')] + [len(name) for name in names])
    lines = [' ' * width + '  ' + ''.join(f'{f"{k}-class (%)":>16}' for k in conditions)]
    for name in names:
        row = summary['sessions'][name]
        cells = ''.join(f'{_pct(row.get(k)):>16}' for k in conditions)
        lines.append(f'{name:<{width}}  {cells}')
    average = ''.join(
        f"{_pct(summary['summary'][k]['mean'])} ± {_pct(summary['summary'][k]['std'])}".rjust(16)
        for k in conditions
    )
    lines.append(f"{'Average':<{width}}  {average}")
    chance = ''.join(f"{format_percent(summary['summary'][k]['chance_level'])}".rjust(16) for k in conditions)
    lines.append(f"{'Chance level':<{width}}  {chance}")
    return '\n'.join(lines)


def _pct(value):
    return '-' if value is None else f'{value * 100:.2f}'
