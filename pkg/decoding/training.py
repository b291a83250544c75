"""
Calibration: split, filter, fit the CSP bank and the one-vs-rest SVMs, and
persist everything needed to replay the decoder as one JSON model file.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from eeg.epochs import extract_epochs, split_trials
from eeg.exceptions import BtsError, DecoderError, ModelFileError
from eeg.io import read_json, write_json
from eeg.types import REST_LABEL, PipelineConfig, SplitSpec, TrialEpoch, Vocabulary
from eeg.validators import samples_for_ms
from monitoring.metrics import PipelineMetrics

from .csp import CspBank, bank_from_covariances, covariance, extract_features_batch
from .dsp import design_from_config, iter_spans
from .onset import fit_baseline
from .svm import OvrClassifier, fit_ovr

logger = logging.getLogger('bts.training')

MODEL_FORMAT = 'bts-model'
MODEL_VERSION = 1

_SHUFFLE_STREAM = 17


@dataclass(frozen=True, eq=False)
class TrainedModel:
    config: PipelineConfig
    vocabulary: Vocabulary
    fs: float
    bank: CspBank
    classifier: OvrClassifier
    metadata: dict = field(default_factory=dict)

    @property
    def split(self):
        return SplitSpec(**self.metadata['split']) if 'split' in self.metadata else None

    def filter_design(self, fs=None):
        return design_from_config(self.config, fs or self.fs)

    def to_dict(self):
        return {
            'format': MODEL_FORMAT,
            'version': MODEL_VERSION,
            'config': self.config.to_dict(),
            'vocabulary': list(self.vocabulary.labels),
            'fs': self.fs,
            'bank': self.bank.to_dict(),
            'classifier': self.classifier.to_dict(),
            'metadata': self.metadata,
        }

    @classmethod
    def from_dict(cls, data):
        if data.get('format') != MODEL_FORMAT:
            raise ModelFileError('not a model file (format %(found)r)', code='bad_format',
                                 params={'found': data.get('format')})
        if data.get('version') != MODEL_VERSION:
            raise ModelFileError('model version %(found)s, expected %(expected)d', code='version_mismatch',
                                 params={'found': data.get('version'), 'expected': MODEL_VERSION})
        try:
            model = cls(
                config=PipelineConfig(**data['config']),
                vocabulary=Vocabulary(tuple(data['vocabulary'])),
                fs=float(data['fs']),
                bank=CspBank.from_dict(data['bank']),
                classifier=OvrClassifier.from_dict(data['classifier']),
                metadata=data.get('metadata', {}),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelFileError('model file is incomplete or malformed: %(error)s', code='malformed',
                                 params={'error': exc}) from exc
        if model.bank.n_classes != len(model.vocabulary) or model.classifier.n_classes != len(model.vocabulary):
            raise ModelFileError('model holds %(bank)d contrasts and %(machines)d machines for %(k)d classes',
                                 code='inconsistent',
                                 params={'bank': model.bank.n_classes, 'machines': model.classifier.n_classes,
                                         'k': len(model.vocabulary)})
        return model


def write_model(model, path):
    return write_json(model.to_dict(), path)


def read_model(path):
    try:
        return TrainedModel.from_dict(read_json(path, error=ModelFileError))
    except BtsError:
        raise
    except AttributeError as exc:
        raise ModelFileError('model file is malformed', code='malformed') from exc


def window_offsets(config, fs):
    """Sample offsets of calibration windows inside one decision epoch"""
    window = samples_for_ms(config.window_ms, fs, what='window_ms')
    step = samples_for_ms(config.train_hop_ms, fs, what='train_hop_ms')
    length = samples_for_ms(config.decision_ms, fs, what='decision_ms')
    return list(range(0, length - window + 1, step)), window


def shuffled_labels(labels, rng_seed):
    """Random relabeling for the chance-level control; class counts are kept"""
    return np.random.default_rng([rng_seed, _SHUFFLE_STREAM]).permutation(labels)


@dataclass
class Calibration:
    model: TrainedModel
    train: list
    test: list

    @property
    def train_counts(self):
        counts = Counter(epoch.label for epoch in self.train)
        return {label: counts[k] for k, label in self.model.vocabulary.entries}


def prepare_split(rec, config, split, vocabulary):
    config.validate_for_fs(rec.fs)
    epochs = extract_epochs(rec, duration_ms=config.decision_ms, vocabulary=vocabulary)
    return split_trials(epochs, split, vocabulary)


def calibrate(rec, config, split, vocabulary, shuffle_labels=False, dataset_sha256=None):
    """
    Fit the decoder on the calibration trials of ``rec``.

    The recording is filtered causally from its first sample, the same way
    the pseudo-online replay sees it. Two filtering passes keep memory to
    the trials in flight: the first collects covariances, the second
    computes window features under the fitted bank.
    """
    train, test = prepare_split(rec, config, split, vocabulary)
    labels = np.array([epoch.label for epoch in train])
    if shuffle_labels:
        labels = shuffled_labels(labels, config.rng_seed)

    length = samples_for_ms(config.decision_ms, rec.fs)
    spans = [(rec.ms_to_sample(epoch.start_ms), rec.ms_to_sample(epoch.start_ms) + length) for epoch in train]

    design = design_from_config(config, rec.fs)
    covariances = {}
    for i, samples in iter_spans(rec, design, spans, config.chunk_ms):
        epoch = TrialEpoch(samples=samples, label=int(labels[i]), fs=rec.fs, duration_ms=config.decision_ms)
        covariances.setdefault(epoch.label, []).append(covariance(epoch, config.covariance_shrinkage))
    bank = bank_from_covariances(covariances, len(vocabulary), config.n_csp_pairs, vocabulary)

    offsets, window = window_offsets(config, rec.fs)
    features = [None] * len(train)
    for i, samples in iter_spans(rec, design.fresh(), spans, config.chunk_ms):
        features[i] = extract_features_batch(bank, np.stack([samples[:, o:o + window] for o in offsets]))
    features = np.concatenate(features)
    window_labels = np.repeat(labels, len(offsets))

    classifier = fit_ovr(features, window_labels, len(vocabulary), c=config.svm_c, tol=config.svm_tol,
                         max_iter=config.svm_max_iter, rng_seed=config.rng_seed)

    model = TrainedModel(
        config=config,
        vocabulary=vocabulary,
        fs=rec.fs,
        bank=bank,
        classifier=classifier,
        metadata={
            'seed': config.rng_seed,
            'dataset_sha256': dataset_sha256,
            'split': split.to_dict(),
            'shuffle_labels': bool(shuffle_labels),
            'n_train_windows': int(features.shape[0]),
            'converged': classifier.converged,
            'version': getattr(settings, 'VERSION', None),
        },
    )
    calibration = Calibration(model=model, train=train, test=test)
    PipelineMetrics.log_calibration_completed(model, calibration.train_counts)
    return calibration


def rest_baseline(rec, model, detector, epochs=None):
    """
    Fit the onset detector's baseline on filtered rest trials, or on the
    lead-in before the first cue when the vocabulary has no rest class.
    """
    length = samples_for_ms(model.config.decision_ms, rec.fs)
    if REST_LABEL in model.vocabulary:
        rest = model.vocabulary.index(REST_LABEL)
        if epochs is None:
            epochs = extract_epochs(rec, duration_ms=model.config.decision_ms, vocabulary=model.vocabulary)
        starts = [rec.ms_to_sample(epoch.start_ms) for epoch in epochs if epoch.label == rest]
        spans = [(start, start + length) for start in starts]
    else:
        first = min((time_ms for time_ms, _ in rec.annotations), default=rec.duration_ms)
        spans = [(0, rec.ms_to_sample(first))]
    spans = [span for span in spans if span[1] > span[0]]
    if not spans:
        raise DecoderError('no rest data to fit the onset baseline on', code='no_rest_data')

    segments = [samples for _, samples in iter_spans(rec, model.filter_design(rec.fs), spans, model.config.chunk_ms)]
    return fit_baseline(detector, segments, rec.fs)
