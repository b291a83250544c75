"""
Django settings for the bts project.
Base settings shared across all environments.
"""

from pathlib import Path
import environ

# Initialize environment variables
env = environ.Env(
    # set casting, default value
    DEBUG=(bool, False),
    SECRET_KEY=(str, ''),
    BTS_LOG_LEVEL=(str, 'INFO'),
)

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Reading .env file
environ.Env.read_env(BASE_DIR / '.env')

# No web surface; the key only satisfies Django's startup checks
SECRET_KEY = env('SECRET_KEY', default='bts-local-only-key')

DEBUG = env('DEBUG')

ALLOWED_HOSTS = []

# Application definition
DJANGO_APPS = [
    'django.contrib.contenttypes',
]

LOCAL_APPS = [
    'eeg',          # Recordings, epochs, dataset files, synthetic sessions
    'decoding',     # Filtering, CSP, SVM, pseudo-online decoder
    'monitoring',   # Structured pipeline metrics
]

INSTALLED_APPS = DJANGO_APPS + LOCAL_APPS

# Database (sqlite by default, DATABASE_URL overrides)
DATABASES = {
    'default': env.db('DATABASE_URL', default=f'sqlite:///{BASE_DIR / "bts.sqlite3"}'),
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Pipeline defaults (units: Hz, ms, microvolts). Config files and CLI flags override these.
BTS_PIPELINE_DEFAULTS = {
    'band_lo_hz': env.float('BTS_BAND_LO_HZ', default=30.0),
    'band_hi_hz': env.float('BTS_BAND_HI_HZ', default=120.0),
    'window_ms': env.int('BTS_WINDOW_MS', default=1000),
    'hop_ms': env.int('BTS_HOP_MS', default=100),
    'decision_ms': env.int('BTS_DECISION_MS', default=2000),
    'n_csp_pairs': env.int('BTS_N_CSP_PAIRS', default=2),
    'svm_c': env.float('BTS_SVM_C', default=1.0),
    'svm_tol': env.float('BTS_SVM_TOL', default=1e-4),
    'svm_max_iter': env.int('BTS_SVM_MAX_ITER', default=100_000),
    'covariance_shrinkage': env.float('BTS_COVARIANCE_SHRINKAGE', default=0.05),
    'filter_order': env.int('BTS_FILTER_ORDER', default=4),
    'train_hop_ms': env.int('BTS_TRAIN_HOP_MS', default=500),
    'chunk_ms': env.int('BTS_CHUNK_MS', default=10_000),
    'onset_rms_window_ms': env.int('BTS_ONSET_RMS_WINDOW_MS', default=100),
    'onset_threshold_z': env.float('BTS_ONSET_THRESHOLD_Z', default=2.5),
    'onset_consecutive': env.int('BTS_ONSET_CONSECUTIVE', default=2),
    'onset_refractory_ms': env.int('BTS_ONSET_REFRACTORY_MS', default=1000),
    'rng_seed': env.int('BTS_SEED', default=0),
}

BTS_SPLIT_DEFAULTS = {
    'n_train': env.int('BTS_N_TRAIN', default=80),
    'n_test': env.int('BTS_N_TEST', default=20),
}

BTS_SYNTH_DEFAULTS = {
    'channels': env.int('BTS_SYNTH_CHANNELS', default=64),
    'fs': env.float('BTS_SYNTH_FS', default=1000.0),
    'trials_per_class': env.int('BTS_SYNTH_TRIALS_PER_CLASS', default=100),
    'snr': env.float('BTS_SYNTH_SNR', default=2.0),
    'noise_uv': env.float('BTS_SYNTH_NOISE_UV', default=10.0),
    'spatial_rho': env.float('BTS_SYNTH_SPATIAL_RHO', default=0.6),
    'trial_ms': env.int('BTS_SYNTH_TRIAL_MS', default=2000),
    'iti_ms': env.int('BTS_SYNTH_ITI_MS', default=1000),
    'lead_ms': env.int('BTS_SYNTH_LEAD_MS', default=2000),
    'min_angle_deg': env.float('BTS_SYNTH_MIN_ANGLE_DEG', default=30.0),
}

# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {message}',
            'style': '{',
        },
        'json': {
            '()': 'pythonjsonlogger.jsonlogger.JsonFormatter',
            'format': '%(levelname)s %(asctime)s %(module)s %(funcName)s %(lineno)d %(message)s'
        },
    },
    'handlers': {
        'console': {
            'level': env('BTS_LOG_LEVEL'),
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
        'metrics': {
            'level': 'INFO',
            'class': 'logging.StreamHandler',
            'formatter': 'json',
        },
    },
    'loggers': {
        'bts': {
            'handlers': ['console'],
            'level': env('BTS_LOG_LEVEL'),
        },
        'bts.metrics': {
            'handlers': ['metrics'],
            'level': 'INFO',
            'propagate': False,
        },
    },
}

# Application version, embedded in model files and reports
VERSION = '0.1.0'
