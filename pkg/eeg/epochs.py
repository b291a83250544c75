"""
Cutting labeled epochs out of a continuous recording and splitting them
into calibration and pseudo-online test sets.
"""
import logging
from collections import defaultdict

import numpy as np

from .exceptions import RecordingError
from .types import TrialEpoch, Vocabulary
from .validators import samples_for_ms

logger = logging.getLogger('bts.epochs')


def extract_epochs(rec, annotations=None, duration_ms=2000, vocabulary=None):
    """
    One TrialEpoch per annotation, in annotation order.

    Epoch samples are read-only views into ``rec.samples``. Annotations whose
    label is not in the vocabulary are skipped.
    """
    vocabulary = vocabulary or Vocabulary.default()
    annotations = rec.annotations if annotations is None else annotations
    length = samples_for_ms(duration_ms, rec.fs, what='epoch duration')

    epochs = []
    skipped = 0
    for time_ms, label in annotations:
        if label not in vocabulary:
            skipped += 1
            continue
        start = rec.ms_to_sample(time_ms)
        if start < 0 or start + length > rec.n_samples:
            raise RecordingError(
                'epoch overruns recording: annotation %(label)r at %(time)s ms + %(duration)s ms '
                'exceeds %(total)s ms',
                code='epoch_overrun',
                params={'label': label, 'time': time_ms, 'duration': duration_ms, 'total': rec.duration_ms},
            )
        epochs.append(TrialEpoch(
            samples=rec.samples[:, start:start + length],
            label=vocabulary.index(label),
            fs=rec.fs,
            duration_ms=duration_ms,
            start_ms=float(time_ms),
        ))

    if skipped:
        logger.debug('Skipped %d annotations outside the vocabulary', skipped)
    return epochs


def split_trials(epochs, spec, vocabulary=None):
    """
    Stratified random split: n_train and n_test epochs from every class.

    Classes are taken from ``vocabulary`` when given, else from the labels
    present. Both halves come back sorted by start time.
    """
    by_class = defaultdict(list)
    for epoch in epochs:
        by_class[epoch.label].append(epoch)

    labels = range(len(vocabulary)) if vocabulary is not None else sorted(by_class)
    rng = np.random.default_rng(spec.rng_seed)
    train, test = [], []
    for label in labels:
        members = by_class.get(label, [])
        if len(members) < spec.trials_per_class:
            name = vocabulary.label(label) if vocabulary is not None else label
            raise RecordingError(
                'insufficient trials for class %(name)r: %(found)d found, %(needed)d needed',
                code='insufficient_trials',
                params={'name': name, 'found': len(members), 'needed': spec.trials_per_class},
            )
        order = rng.permutation(len(members))
        train.extend(members[i] for i in order[:spec.n_train])
        test.extend(members[i] for i in order[spec.n_train:spec.trials_per_class])

    def by_start(epoch):
        return (epoch.start_ms, epoch.label)

    return sorted(train, key=by_start), sorted(test, key=by_start)
