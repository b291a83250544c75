"""
Django settings for batch runs on shared compute (JSON logs everywhere).
"""

from .base import *

DEBUG = False

# Database must be provided explicitly
DATABASES = {
    'default': env.db('DATABASE_URL'),
}

LOGGING['handlers']['console']['formatter'] = 'json'
LOGGING['loggers']['django'] = {
    'handlers': ['console'],
    'level': 'WARNING',
    'propagate': False,
}
