"""
Common spatial patterns: shrunk class covariances, the generalized
eigenproblem of a class-vs-rest contrast, one-vs-rest filter banks and
log-variance features.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from eeg.exceptions import CovarianceError
from eeg.validators import validate_finite, validate_shrinkage

logger = logging.getLogger('bts.csp')

VARIANCE_FLOOR = 1e-12


def covariance(epoch, shrinkage=0.05):
    """
    C = (1 - shrinkage) * XX'/trace(XX') + shrinkage * I/channels

    ``epoch`` is a TrialEpoch or a channels x time array.
    """
    validate_shrinkage(shrinkage)
    x = np.asarray(getattr(epoch, 'samples', epoch), dtype=np.float64)
    validate_finite(x, 'epoch samples')
    channels = x.shape[0]
    scatter = x @ x.T
    energy = np.trace(scatter)
    if energy <= 0:
        if shrinkage == 0:
            raise CovarianceError('degenerate covariance: zero-energy epoch with no shrinkage',
                                  code='degenerate_covariance')
        return np.eye(channels) / channels
    return (1.0 - shrinkage) * (scatter / energy) + shrinkage * np.eye(channels) / channels


def solve_pencil(c_target, c_rest):
    """
    All generalized eigenpairs of C_target w = lambda (C_target + C_rest) w.

    Returns ascending eigenvalues and the filters as rows, scaled so that
    W (C_target + C_rest) W' = I.
    """
    c_target = np.asarray(c_target, dtype=np.float64)
    c_rest = np.asarray(c_rest, dtype=np.float64)
    if c_target.shape != c_rest.shape or c_target.ndim != 2 or c_target.shape[0] != c_target.shape[1]:
        raise CovarianceError('covariances must be square and equal-sized, got %(a)s and %(b)s',
                              code='shape_mismatch', params={'a': c_target.shape, 'b': c_rest.shape})
    try:
        eigenvalues, vectors = linalg.eigh(c_target, c_target + c_rest)
    except linalg.LinAlgError as exc:
        raise CovarianceError('composite covariance is not positive definite; raise covariance_shrinkage',
                              code='not_spd') from exc
    return eigenvalues, vectors.T


@dataclass(frozen=True, eq=False)
class CspPairModel:
    """Selected filters of one contrast, ordered [largest..., smallest...]"""

    filters: np.ndarray
    eigenvalues: np.ndarray
    patterns: np.ndarray

    @property
    def n_pairs(self):
        return self.filters.shape[0] // 2

    def to_dict(self):
        return {
            'filters': self.filters.tolist(),
            'eigenvalues': self.eigenvalues.tolist(),
            'patterns': self.patterns.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            filters=np.array(data['filters'], dtype=np.float64),
            eigenvalues=np.array(data['eigenvalues'], dtype=np.float64),
            patterns=np.array(data['patterns'], dtype=np.float64),
        )


def fit_csp_pair(c_target, c_rest, m):
    channels = np.shape(c_target)[0]
    if m < 1 or 2 * m > channels:
        raise CovarianceError('%(m)d filter pairs need at least %(need)d channels, have %(channels)d',
                              code='too_many_pairs', params={'m': m, 'need': 2 * m, 'channels': channels})
    eigenvalues, filters = solve_pencil(c_target, c_rest)
    n = len(eigenvalues)
    selected = list(range(n - 1, n - 1 - m, -1)) + list(range(m))

    composite = np.asarray(c_target) + np.asarray(c_rest)
    patterns = filters[selected] @ composite
    patterns /= np.linalg.norm(patterns, axis=1, keepdims=True)
    return CspPairModel(filters=filters[selected], eigenvalues=eigenvalues[selected], patterns=patterns)


@dataclass(frozen=True, eq=False)
class CspBank:
    """One contrast per class, features concatenated in class order"""

    models: tuple[CspPairModel, ...]

    def __post_init__(self):
        object.__setattr__(self, 'models', tuple(self.models))
        stacked = np.vstack([model.filters for model in self.models])
        stacked.flags.writeable = False
        object.__setattr__(self, 'stacked', stacked)

    @property
    def n_classes(self):
        return len(self.models)

    @property
    def n_pairs(self):
        return self.models[0].n_pairs

    @property
    def n_channels(self):
        return self.stacked.shape[1]

    @property
    def feature_dim(self):
        return self.n_classes * 2 * self.n_pairs

    def to_dict(self):
        return {'models': [model.to_dict() for model in self.models]}

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(CspPairModel.from_dict(model) for model in data['models']))


def fit_csp_bank(epochs, n_classes, n_pairs=2, shrinkage=0.05, vocabulary=None):
    """
    One-vs-rest bank: class k's mean covariance against the mean covariance
    of every trial of every other class.
    """
    covariances = {}
    for epoch in epochs:
        covariances.setdefault(epoch.label, []).append(covariance(epoch, shrinkage))
    return bank_from_covariances(covariances, n_classes, n_pairs, vocabulary)


def bank_from_covariances(covariances, n_classes, n_pairs=2, vocabulary=None):
    """Same as fit_csp_bank from per-trial covariances grouped by class index"""
    for k in range(n_classes):
        if len(covariances.get(k, ())) < 2:
            name = vocabulary.label(k) if vocabulary is not None else k
            raise CovarianceError('class %(name)r needs at least 2 training trials, has %(found)d',
                                  code='missing_class', params={'name': name, 'found': len(covariances.get(k, ()))})

    sums = {k: np.sum(covariances[k], axis=0) for k in range(n_classes)}
    counts = {k: len(covariances[k]) for k in range(n_classes)}
    total, total_count = sum(sums.values()), sum(counts.values())

    models = []
    for k in range(n_classes):
        c_target = sums[k] / counts[k]
        c_rest = (total - sums[k]) / (total_count - counts[k])
        models.append(fit_csp_pair(c_target, c_rest, n_pairs))
    logger.debug('Fitted CSP bank: %d classes, %d pairs', n_classes, n_pairs)
    return CspBank(tuple(models))


def _log_variance(variances, bank):
    variances = np.maximum(variances, VARIANCE_FLOOR)
    grouped = variances.reshape(*variances.shape[:-1], bank.n_classes, 2 * bank.n_pairs)
    return np.log(grouped / grouped.sum(axis=-1, keepdims=True)).reshape(variances.shape)


def extract_features(bank, window):
    """log(var / sum of vars) per contrast, concatenated; window is channels x time"""
    window = np.asarray(window)
    if window.ndim != 2 or window.shape[0] != bank.n_channels:
        raise CovarianceError('window has shape %(shape)s, bank expects %(channels)d channels',
                              code='channel_mismatch', params={'shape': window.shape, 'channels': bank.n_channels})
    projected = bank.stacked @ window
    return _log_variance(np.var(projected, axis=-1), bank)


def extract_features_batch(bank, windows):
    """Features for an (n, channels, time) stack, one row per window"""
    windows = np.asarray(windows)
    if windows.ndim != 3 or windows.shape[1] != bank.n_channels:
        raise CovarianceError('windows have shape %(shape)s, bank expects %(channels)d channels',
                              code='channel_mismatch', params={'shape': windows.shape, 'channels': bank.n_channels})
    projected = np.matmul(bank.stacked, windows)
    return _log_variance(np.var(projected, axis=-1), bank)
