"""
Structured errors raised by the decoding pipeline.

Every error carries a human message, a stable ``code`` and the ``params``
used to format the message, the same contract as Django's ValidationError.
"""
from django.core.exceptions import ValidationError


class BtsError(ValidationError):
    """Base class for all pipeline errors"""

    default_code = 'bts_error'

    def __init__(self, message, code=None, params=None):
        super().__init__(message, code=code or self.default_code, params=params)

    def one_line(self):
        """Single-line diagnostic used by the command line surface"""
        return f"{self.code}: {'; '.join(self.messages)}"


class RecordingError(BtsError):
    default_code = 'invalid_recording'


class ConfigError(BtsError):
    default_code = 'invalid_config'


class DatasetFormatError(BtsError):
    default_code = 'invalid_dataset_file'


class FilterDesignError(BtsError):
    default_code = 'invalid_filter'


class CovarianceError(BtsError):
    default_code = 'invalid_covariance'


class ClassifierError(BtsError):
    default_code = 'invalid_classifier_input'


class DecoderError(BtsError):
    default_code = 'decoder_error'


class ModelFileError(BtsError):
    default_code = 'invalid_model_file'
