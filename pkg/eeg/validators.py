# eeg/validators.py
import numpy as np

from .exceptions import ConfigError, FilterDesignError, RecordingError


def validate_finite(values, what='samples'):
    """Ensure an array holds only finite values"""
    if not np.all(np.isfinite(values)):
        raise RecordingError('%(what)s contain non-finite values', code='non_finite', params={'what': what})


def validate_positive(value, name):
    """Ensure a numeric parameter is strictly positive"""
    if not value > 0:
        raise ConfigError('%(name)s must be positive, got %(value)s', code='not_positive',
                          params={'name': name, 'value': value})


def validate_band(lo_hz, hi_hz, fs=None):
    """Ensure 0 < lo < hi (< fs/2 when fs is known)"""
    if not 0 < lo_hz < hi_hz:
        raise FilterDesignError('band edges must satisfy 0 < lo < hi, got %(lo)s-%(hi)s Hz',
                                code='bad_band', params={'lo': lo_hz, 'hi': hi_hz})
    if fs is not None and hi_hz >= fs / 2:
        raise FilterDesignError('band edge violates Nyquist: %(hi)s Hz >= %(nyquist)s Hz',
                                code='nyquist', params={'hi': hi_hz, 'nyquist': fs / 2})


def validate_shrinkage(gamma):
    """Shrinkage weight must lie in [0, 1]"""
    if not 0.0 <= gamma <= 1.0:
        raise ConfigError('covariance shrinkage must be in [0, 1], got %(gamma)s',
                          code='bad_shrinkage', params={'gamma': gamma})


def samples_for_ms(duration_ms, fs, what='duration'):
    """Convert milliseconds to an exact sample count"""
    exact = duration_ms * fs / 1000.0
    count = int(round(exact))
    if abs(exact - count) > 1e-6:
        raise RecordingError('%(what)s of %(ms)s ms is not a whole number of samples at %(fs)s Hz',
                             code='off_grid', params={'what': what, 'ms': duration_ms, 'fs': fs})
    return count
