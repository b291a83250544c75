"""
Test settings for the bts project.
Optimized for fast test execution.
"""

from .base import *

# Test database - use SQLite in memory for speed
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
        'TEST': {
            'NAME': ':memory:',
        },
    }
}

# Disable migrations for tests
class DisableMigrations:
    def __contains__(self, item):
        return True

    def __getitem__(self, item):
        return None

MIGRATION_MODULES = DisableMigrations()

# Test settings
DEBUG = False
TESTING = True

# Disable logging during tests
LOGGING_CONFIG = None
LOGGING = {}

SECRET_KEY = 'test-secret-key-not-for-production'

# Pin the pipeline to its documented defaults; BTS_* variables in the
# developer's shell or .env must not leak into test expectations.
BTS_PIPELINE_DEFAULTS = {
    'band_lo_hz': 30.0,
    'band_hi_hz': 120.0,
    'window_ms': 1000,
    'hop_ms': 100,
    'decision_ms': 2000,
    'n_csp_pairs': 2,
    'svm_c': 1.0,
    'svm_tol': 1e-4,
    'svm_max_iter': 100_000,
    'covariance_shrinkage': 0.05,
    'filter_order': 4,
    'train_hop_ms': 500,
    'chunk_ms': 10_000,
    'onset_rms_window_ms': 100,
    'onset_threshold_z': 2.5,
    'onset_consecutive': 2,
    'onset_refractory_ms': 1000,
    'rng_seed': 0,
}
BTS_SPLIT_DEFAULTS = {'n_train': 80, 'n_test': 20}
BTS_SYNTH_DEFAULTS = {
    'channels': 64,
    'fs': 1000.0,
    'trials_per_class': 100,
    'snr': 2.0,
    'noise_uv': 10.0,
    'spatial_rho': 0.6,
    'trial_ms': 2000,
    'iti_ms': 1000,
    'lead_ms': 2000,
    'min_angle_deg': 30.0,
}
