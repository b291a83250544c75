"""
Choosing what a stored model is replayed on, and under which config.
"""
from eeg.config import load_pipeline_config
from eeg.epochs import extract_epochs
from eeg.exceptions import ConfigError
from eeg.types import Vocabulary

from .training import prepare_split


def evaluation_trials(recording, model, config, dataset_sha256, all_trials=False):
    """
    The held-out split when the dataset is the one the model was trained
    on, otherwise every trial in the model's vocabulary.
    """
    same_session = dataset_sha256 == model.metadata.get('dataset_sha256')
    if same_session and not all_trials and model.split is not None:
        _, test = prepare_split(recording, config, model.split, model.vocabulary)
        return test
    return extract_epochs(recording, duration_ms=config.decision_ms, vocabulary=model.vocabulary)


def resolve_config(model, config_path=None, seed=None):
    """The model's own config unless a config file or a seed asks for another one"""
    if config_path is None:
        if seed is None:
            return model.config
        return type(model.config)(**{**model.config.to_dict(), 'rng_seed': seed})
    config, _ = load_pipeline_config(config_path, rng_seed=seed)
    return config


def check_classes(model, option):
    if option is not None and Vocabulary.from_option(option) != model.vocabulary:
        raise ConfigError('--classes %(option)s does not match the model vocabulary (%(labels)s)',
                          code='vocabulary_mismatch',
                          params={'option': option, 'labels': ', '.join(model.vocabulary.labels)})
