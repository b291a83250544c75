"""
Pseudo-online decoding.

Continuous EEG is filtered causally, cut into overlapping analysis windows
on a fixed hop grid and each window is classified. Windows lying fully
inside a decision epoch vote for that epoch; the most frequent class is
emitted as the epoch's command.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from eeg.exceptions import DecoderError
from eeg.validators import samples_for_ms
from monitoring.metrics import PipelineMetrics

from .csp import extract_features
from .dsp import filter_apply
from .svm import decision_scores

logger = logging.getLogger('bts.decoder')


@dataclass(frozen=True)
class WindowVote:
    start_ms: float
    command: int
    scores: tuple[float, ...]


@dataclass(frozen=True)
class DecisionEvent:
    epoch_start_ms: float
    command: int
    votes: tuple[WindowVote, ...]
    histogram: tuple[tuple[int, int], ...]
    tie_broken: bool
    decision_ms: int = 2000
    truth: int | None = None

    @property
    def end_ms(self):
        return self.epoch_start_ms + self.decision_ms

    @property
    def correct(self):
        return self.truth is not None and self.truth == self.command


def _ms(value):
    value = float(value)
    return int(value) if value.is_integer() else value


def event_record(event, vocabulary):
    """JSON-lines record of one emitted command"""
    return {
        't_ms': _ms(event.end_ms),
        'command_label': vocabulary.label(event.command),
        'histogram': {vocabulary.label(k): count for k, count in event.histogram},
        'tie_broken': event.tie_broken,
    }


def window_stream(rec, window_ms, hop_ms):
    """
    Yield (start_ms, channels x window view) at starts 0, hop, 2*hop, ...
    while the window fits. A recording shorter than one window yields nothing.
    """
    window = samples_for_ms(window_ms, rec.fs, what='window_ms')
    hop = samples_for_ms(hop_ms, rec.fs, what='hop_ms')
    samples = rec.samples
    for index, start in enumerate(range(0, samples.shape[1] - window + 1, hop)):
        yield index * hop_ms, samples[:, start:start + window]


def classify_window(bank, clf, window, start_ms=0):
    scores = decision_scores(clf, extract_features(bank, window))
    return WindowVote(start_ms=start_ms, command=int(np.argmax(scores)),
                      scores=tuple(float(s) for s in scores))


def decide_epoch(votes, epoch_start_ms=None, decision_ms=2000, truth=None):
    """
    Majority vote. Ties go to the tied class with the highest summed score
    over all votes, then to the lowest class index.
    """
    votes = tuple(votes)
    if not votes:
        raise DecoderError('cannot decide an epoch without window votes', code='no_votes')

    counts = Counter(vote.command for vote in votes)
    top = max(counts.values())
    tied = sorted(k for k, count in counts.items() if count == top)
    tie_broken = len(tied) > 1
    if tie_broken:
        totals = {k: math.fsum(vote.scores[k] for vote in votes) for k in tied}
        best = max(totals.values())
        command = min(k for k in tied if totals[k] == best)
    else:
        command = tied[0]

    if epoch_start_ms is None:
        epoch_start_ms = min(vote.start_ms for vote in votes)
    return DecisionEvent(
        epoch_start_ms=epoch_start_ms,
        command=command,
        votes=votes,
        histogram=tuple(sorted(counts.items())),
        tie_broken=tie_broken,
        decision_ms=decision_ms,
        truth=truth,
    )


def epoch_schedule(epoch_starts_ms, config):
    """
    Window starts (ms, on the hop grid from 0) lying fully inside each
    decision epoch, one tuple per epoch.
    """
    schedule = []
    for start in epoch_starts_ms:
        end = start + config.decision_ms
        first = math.ceil(start / config.hop_ms) * config.hop_ms
        schedule.append(tuple(range(first, int(end - config.window_ms) + 1, config.hop_ms)))
    return schedule


@dataclass
class _PendingEpoch:
    index: int
    start_ms: float
    windows: tuple
    truth: int | None
    votes: list = field(default_factory=list)


class StreamingDecoder:
    """
    One decoding session: filter state, sample buffer and the epochs still
    waiting for windows. Feeding any chunking of the same recording yields
    identical events.
    """

    def __init__(self, model, config, fs, epoch_starts_ms, truths=None, onset_tracker=None):
        self.model = model
        self.config = config
        self.fs = fs
        self.cascade = model.filter_design(fs)
        self.onset_tracker = onset_tracker
        self.window = samples_for_ms(config.window_ms, fs, what='window_ms')
        self.hop = samples_for_ms(config.hop_ms, fs, what='hop_ms')

        order = sorted(range(len(epoch_starts_ms)), key=lambda i: epoch_starts_ms[i])
        truths = list(truths) if truths is not None else [None] * len(epoch_starts_ms)
        schedule = epoch_schedule([epoch_starts_ms[i] for i in order], config)
        self.pending = [
            _PendingEpoch(index=i, start_ms=epoch_starts_ms[i], windows=windows, truth=truths[i])
            for i, windows in zip(order, schedule)
        ]
        self.empty_epochs = [p.start_ms for p in self.pending if not p.windows]
        self.pending = [p for p in self.pending if p.windows]
        # (window start sample, epoch) in stream order
        self._queue = sorted(
            ((samples_for_ms(start, fs, what='window start'), n, p)
             for n, p in enumerate(self.pending) for start in p.windows),
            key=lambda item: (item[0], item[1]),
        )
        self._next = 0
        self._buffer = None
        self._buffer_start = 0
        self.samples_seen = 0
        self.events = []
        self.incomplete_epochs = []
        self.finished = False

    def _buffer_end(self):
        return self._buffer_start + (0 if self._buffer is None else self._buffer.shape[1])

    def feed(self, chunk):
        """Filter and consume one chunk; returns the events completed by it"""
        if self.finished:
            raise DecoderError('decoder session already finished', code='finished')
        filtered = filter_apply(self.cascade, chunk)
        self.samples_seen += filtered.shape[1]
        if self.onset_tracker is not None:
            self.onset_tracker.feed(filtered)

        if self._next >= len(self._queue):
            return []
        self._buffer = filtered if self._buffer is None else np.concatenate([self._buffer, filtered], axis=1)

        completed = []
        while self._next < len(self._queue):
            start, _, epoch = self._queue[self._next]
            if start + self.window > self._buffer_end():
                break
            offset = start - self._buffer_start
            window = np.ascontiguousarray(self._buffer[:, offset:offset + self.window])
            start_ms = start * 1000.0 / self.fs
            epoch.votes.append(classify_window(self.model.bank, self.model.classifier, window, _ms(start_ms)))
            self._next += 1
            if len(epoch.votes) == len(epoch.windows):
                completed.append(self._decide(epoch))

        keep_from = self._queue[self._next][0] if self._next < len(self._queue) else self._buffer_end()
        drop = max(0, min(keep_from, self._buffer_end()) - self._buffer_start)
        if drop:
            self._buffer = self._buffer[:, drop:].copy()
            self._buffer_start += drop
        self.events.extend(completed)
        return completed

    def _decide(self, epoch):
        event = decide_epoch(epoch.votes, epoch_start_ms=epoch.start_ms, decision_ms=self.config.decision_ms,
                             truth=epoch.truth)
        PipelineMetrics.log_command_emitted(event, self.model.vocabulary)
        return event

    def finish(self):
        """Close the session; epochs still missing windows are counted, not emitted"""
        self.finished = True
        self.incomplete_epochs = [p.start_ms for p in self.pending if len(p.votes) < len(p.windows)]
        self._buffer = None
        return self.events


@dataclass
class PseudoOnlineResult:
    events: list
    n_classes: int
    empty_epochs: list = field(default_factory=list)
    incomplete_epochs: list = field(default_factory=list)
    onsets_ms: list = field(default_factory=list)
    n_windows: int = 0

    @property
    def scored(self):
        return [event for event in self.events if event.truth is not None]

    @property
    def accuracy(self):
        scored = self.scored
        if not scored:
            return None
        return sum(event.correct for event in scored) / len(scored)

    @property
    def confusion(self):
        """rows = true class, columns = emitted command"""
        matrix = np.zeros((self.n_classes, self.n_classes), dtype=int)
        for event in self.scored:
            matrix[event.truth, event.command] += 1
        return matrix

    @property
    def n_ties(self):
        return sum(event.tie_broken for event in self.events)

    @property
    def chance_level(self):
        return 1.0 / self.n_classes


def check_compatible(model, config, rec):
    expected, requested = model.config.signature(), config.signature()
    differing = sorted(name for name in expected if expected[name] != requested[name])
    if differing:
        raise DecoderError('config does not match the model on: %(fields)s', code='config_mismatch',
                           params={'fields': ', '.join(differing)})
    if rec.fs != model.fs:
        raise DecoderError('recording is sampled at %(found)s Hz, model was trained at %(expected)s Hz',
                           code='fs_mismatch', params={'found': rec.fs, 'expected': model.fs})
    if rec.n_channels != model.bank.n_channels:
        raise DecoderError('recording has %(found)d channels, model expects %(expected)d', code='channel_mismatch',
                           params={'found': rec.n_channels, 'expected': model.bank.n_channels})
    config.validate_for_fs(rec.fs)


def run_pseudo_online(rec, model, config, epoch_boundaries, truths=None, onset_tracker=None, chunk_ms=None):
    """
    Replay ``rec`` through a StreamingDecoder in chunks of ``chunk_ms``.

    ``epoch_boundaries`` are decision epoch starts in ms; ``truths`` the
    matching class indices used for scoring.
    """
    check_compatible(model, config, rec)
    decoder = StreamingDecoder(model, config, rec.fs, list(epoch_boundaries), truths, onset_tracker)
    chunk = samples_for_ms(chunk_ms or config.chunk_ms, rec.fs, what='chunk_ms')
    for start in range(0, rec.n_samples, chunk):
        decoder.feed(rec.samples[:, start:start + chunk])
    events = decoder.finish()

    result = PseudoOnlineResult(
        events=events,
        n_classes=len(model.vocabulary),
        empty_epochs=decoder.empty_epochs,
        incomplete_epochs=decoder.incomplete_epochs,
        onsets_ms=list(onset_tracker.onsets) if onset_tracker is not None else [],
        n_windows=sum(len(event.votes) for event in events),
    )
    if not events:
        logger.warning('No decision epoch received a complete set of windows')
    return result
