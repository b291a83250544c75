"""
Domain data model shared by every pipeline stage.

Axis order is channels x time everywhere. Amplitudes are microvolts,
times are milliseconds and rates are Hz at every API boundary.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from django.conf import settings

from .exceptions import ConfigError, RecordingError
from .validators import (
    samples_for_ms,
    validate_band,
    validate_finite,
    validate_positive,
    validate_shrinkage,
)

DEFAULT_LABELS = (
    'ambulance', 'clock', 'hello', 'help me', 'light', 'pain', 'stop',
    'thank you', 'toilet', 'TV', 'water', 'yes', 'rest',
)
BINARY_LABELS = ('help me', 'rest')
REST_LABEL = 'rest'


@dataclass(frozen=True)
class Vocabulary:
    """Ordered class labels; a label's position is its class index"""

    labels: tuple[str, ...] = DEFAULT_LABELS

    def __post_init__(self):
        object.__setattr__(self, 'labels', tuple(self.labels))
        if not self.labels:
            raise ConfigError('vocabulary is empty', code='empty_vocabulary')
        if len(set(self.labels)) != len(self.labels):
            raise ConfigError('vocabulary labels must be unique: %(labels)s',
                              code='duplicate_label', params={'labels': ', '.join(self.labels)})

    @classmethod
    def default(cls):
        return cls(DEFAULT_LABELS)

    @classmethod
    def binary(cls):
        return cls(BINARY_LABELS)

    @classmethod
    def from_option(cls, option):
        """Parse a --classes value: '13', '2' or a comma-separated label list"""
        if option is None or str(option).strip() in ('', '13'):
            return cls.default()
        text = str(option).strip()
        if text == '2':
            return cls.binary()
        labels = tuple(label.strip() for label in text.split(',') if label.strip())
        if len(labels) < 2:
            raise ConfigError('--classes expects 13, 2 or at least two labels, got %(option)s',
                              code='bad_classes', params={'option': text})
        return cls.default().restrict(labels)

    def __len__(self):
        return len(self.labels)

    def __contains__(self, label):
        return label in self.labels

    @property
    def entries(self):
        return list(enumerate(self.labels))

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise ConfigError('unknown class label %(label)s', code='unknown_label',
                              params={'label': label}) from None

    def label(self, index):
        if not 0 <= index < len(self.labels):
            raise ConfigError('class index %(index)s outside [0, %(k)s)', code='bad_class_index',
                              params={'index': index, 'k': len(self.labels)})
        return self.labels[index]

    def restrict(self, labels):
        """Sub-vocabulary re-indexed from 0 in the order given"""
        for label in labels:
            self.index(label)
        return Vocabulary(tuple(labels))


class Annotation(NamedTuple):
    time_ms: float
    label: str


def _freeze(samples):
    array = np.asarray(samples)
    if array.flags.writeable:
        array = array.view()
        array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class EegRecording:
    """Continuous multichannel signal (channels x time, microvolts)"""

    samples: np.ndarray
    fs: float
    channel_names: tuple[str, ...] = ()
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.ndim != 2 or samples.shape[0] < 1 or samples.shape[1] < 1:
            raise RecordingError('samples must be a non-empty channels x time matrix, got shape %(shape)s',
                                 code='bad_shape', params={'shape': samples.shape})
        validate_positive(self.fs, 'fs')
        validate_finite(samples)
        names = tuple(self.channel_names) or tuple(f'Ch{i + 1:02d}' for i in range(samples.shape[0]))
        if len(names) != samples.shape[0]:
            raise RecordingError('%(names)d channel names for %(channels)d channels', code='bad_channel_names',
                                 params={'names': len(names), 'channels': samples.shape[0]})
        annotations = tuple(Annotation(float(t), str(label)) for t, label in self.annotations)
        object.__setattr__(self, 'samples', _freeze(samples))
        object.__setattr__(self, 'fs', float(self.fs))
        object.__setattr__(self, 'channel_names', names)
        object.__setattr__(self, 'annotations', annotations)

    @property
    def n_channels(self):
        return self.samples.shape[0]

    @property
    def n_samples(self):
        return self.samples.shape[1]

    @property
    def duration_ms(self):
        return self.n_samples * 1000.0 / self.fs

    def ms_to_sample(self, time_ms):
        return samples_for_ms(time_ms, self.fs, what='time')

    def with_samples(self, samples):
        """Same metadata, new signal of the same shape"""
        if np.shape(samples) != self.samples.shape:
            raise RecordingError('replacement samples have shape %(new)s, expected %(old)s', code='bad_shape',
                                 params={'new': np.shape(samples), 'old': self.samples.shape})
        return dataclasses.replace(self, samples=samples)


@dataclass(frozen=True, eq=False)
class TrialEpoch:
    """Fixed-length labeled segment cut from a recording"""

    samples: np.ndarray
    label: int
    fs: float
    duration_ms: int = 2000
    start_ms: float = 0.0

    def __post_init__(self):
        samples = np.asarray(self.samples)
        expected = samples_for_ms(self.duration_ms, self.fs)
        if samples.ndim != 2 or samples.shape[1] != expected:
            raise RecordingError('epoch holds %(found)s samples, %(expected)d expected for %(ms)s ms',
                                 code='bad_epoch_length',
                                 params={'found': samples.shape[-1] if samples.ndim else 0,
                                         'expected': expected, 'ms': self.duration_ms})
        if self.label < 0:
            raise RecordingError('epoch label must be a class index, got %(label)s', code='bad_label',
                                 params={'label': self.label})
        object.__setattr__(self, 'samples', _freeze(samples))

    @property
    def n_channels(self):
        return self.samples.shape[0]


def _setting_defaults(name):
    return dict(getattr(settings, name, {}))


@dataclass(frozen=True)
class PipelineConfig:
    """Every numeric constant of the calibration + pseudo-online pipeline"""

    band_lo_hz: float = 30.0
    band_hi_hz: float = 120.0
    window_ms: int = 1000
    hop_ms: int = 100
    decision_ms: int = 2000
    n_csp_pairs: int = 2
    svm_c: float = 1.0
    svm_tol: float = 1e-4
    svm_max_iter: int = 100_000
    covariance_shrinkage: float = 0.05
    filter_order: int = 4
    train_hop_ms: int = 500
    chunk_ms: int = 10_000
    onset_rms_window_ms: int = 100
    onset_threshold_z: float = 2.5
    onset_consecutive: int = 2
    onset_refractory_ms: int = 1000
    rng_seed: int = 0

    # Fields that change what a trained model computes; a model may only be
    # replayed under a config that agrees on all of them.
    DECODING_FIELDS = (
        'band_lo_hz', 'band_hi_hz', 'window_ms', 'hop_ms', 'decision_ms',
        'n_csp_pairs', 'covariance_shrinkage', 'filter_order',
    )

    def __post_init__(self):
        validate_band(self.band_lo_hz, self.band_hi_hz)
        for name in ('window_ms', 'hop_ms', 'decision_ms', 'n_csp_pairs', 'svm_c', 'svm_tol',
                     'svm_max_iter', 'train_hop_ms', 'chunk_ms', 'onset_rms_window_ms',
                     'onset_threshold_z', 'onset_consecutive', 'onset_refractory_ms'):
            validate_positive(getattr(self, name), name)
        validate_shrinkage(self.covariance_shrinkage)
        if self.decision_ms < self.window_ms:
            raise ConfigError('decision_ms (%(decision)s) must be >= window_ms (%(window)s)',
                              code='bad_windowing',
                              params={'decision': self.decision_ms, 'window': self.window_ms})
        if self.window_ms < self.hop_ms:
            raise ConfigError('hop_ms (%(hop)s) exceeds window_ms (%(window)s)', code='bad_windowing',
                              params={'hop': self.hop_ms, 'window': self.window_ms})
        if (self.decision_ms - self.window_ms) % self.hop_ms:
            raise ConfigError('hop_ms (%(hop)s) must divide decision_ms - window_ms (%(span)s)',
                              code='bad_windowing',
                              params={'hop': self.hop_ms, 'span': self.decision_ms - self.window_ms})
        if self.filter_order < 2 or self.filter_order % 2:
            raise ConfigError('filter_order must be even and >= 2, got %(order)s', code='bad_filter_order',
                              params={'order': self.filter_order})

    @classmethod
    def from_settings(cls, **overrides):
        """Defaults from settings.BTS_PIPELINE_DEFAULTS, then overrides"""
        values = _setting_defaults('BTS_PIPELINE_DEFAULTS')
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    @property
    def overlap_ms(self):
        return self.window_ms - self.hop_ms

    @property
    def votes_per_decision(self):
        return (self.decision_ms - self.window_ms) // self.hop_ms + 1

    def validate_for_fs(self, fs):
        validate_band(self.band_lo_hz, self.band_hi_hz, fs)
        for name in ('window_ms', 'hop_ms', 'decision_ms', 'train_hop_ms', 'onset_rms_window_ms'):
            samples_for_ms(getattr(self, name), fs, what=name)

    def signature(self):
        return {name: getattr(self, name) for name in self.DECODING_FIELDS}

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class SplitSpec:
    """Per-class calibration / pseudo-online test split"""

    n_train: int = 80
    n_test: int = 20
    rng_seed: int = 0

    def __post_init__(self):
        validate_positive(self.n_train, 'n_train')
        validate_positive(self.n_test, 'n_test')

    @classmethod
    def from_settings(cls, **overrides):
        values = _setting_defaults('BTS_SPLIT_DEFAULTS')
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    @property
    def trials_per_class(self):
        return self.n_train + self.n_test

    def to_dict(self):
        return dataclasses.asdict(self)

