"""
Django settings for the bts development environment.
"""

from .base import *

# Debug mode
DEBUG = True
