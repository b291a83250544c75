"""
Flat key-value configuration files.

Grammar, one entry per line::

    # comment
    band_lo_hz = 30
    svm_c = 0.5        # trailing comments are allowed

Keys are field names of PipelineConfig, SplitSpec or SynthSpec. Values are
cast to the field's type. Unknown or repeated keys are errors.
"""
import dataclasses
import logging
import typing
from pathlib import Path

import environ

from .exceptions import ConfigError
from .synth import SynthSpec
from .types import PipelineConfig, SplitSpec

logger = logging.getLogger('bts.config')


def _field_types(cls):
    hints = typing.get_type_hints(cls)
    return {f.name: hints[f.name] for f in dataclasses.fields(cls)}


def read_config_file(path):
    """Parse a config file into {key: (raw value, line number)}"""
    entries = {}
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise ConfigError('cannot read config file %(path)s: %(error)s', code='config_unreadable',
                          params={'path': str(path), 'error': exc.strerror or exc}) from exc

    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue
        key, sep, value = content.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError('line %(line)d: expected "key = value", got %(text)s', code='config_syntax',
                              params={'line': number, 'text': line.strip()})
        if key in entries:
            raise ConfigError('line %(line)d: duplicate key %(key)s', code='config_duplicate',
                              params={'line': number, 'key': key})
        entries[key] = (value, number)
    return entries


def cast_entries(entries, cls):
    """Cast the entries that belong to dataclass ``cls``"""
    types = _field_types(cls)
    values = {}
    for key, (raw, number) in entries.items():
        if key not in types:
            continue
        cast = types[key]
        if typing.get_origin(cast) is not None:
            # tuples of labels are comma separated
            values[key] = tuple(part.strip() for part in raw.split(',') if part.strip())
            continue
        try:
            # Env's float cast drops exponents ('1e-4'), so floats are parsed directly
            values[key] = float(raw) if cast is float else environ.Env.parse_value(raw, cast)
        except (TypeError, ValueError) as exc:
            raise ConfigError('line %(line)d: %(key)s expects %(type)s, got %(raw)s', code='config_value',
                              params={'line': number, 'key': key, 'type': cast.__name__, 'raw': raw}) from exc
    return values


def check_known_keys(entries, *classes):
    known = set()
    for cls in classes:
        known.update(_field_types(cls))
    for key, (_, number) in entries.items():
        if key not in known:
            raise ConfigError('line %(line)d: unknown key %(key)s', code='config_unknown_key',
                              params={'line': number, 'key': key})


def load_pipeline_config(path=None, **overrides):
    """Settings defaults < config file < explicit overrides (None means unset)"""
    file_values = {}
    split_values = {}
    if path:
        entries = read_config_file(path)
        check_known_keys(entries, PipelineConfig, SplitSpec, SynthSpec)
        file_values = cast_entries(entries, PipelineConfig)
        split_values = cast_entries(entries, SplitSpec)
        logger.debug('Loaded %d config entries from %s', len(entries), path)

    split_overrides = {key: overrides.pop(key) for key in ('n_train', 'n_test') if key in overrides}
    file_values.update({key: value for key, value in overrides.items() if value is not None})
    config = PipelineConfig.from_settings(**file_values)

    split_values.update({key: value for key, value in split_overrides.items() if value is not None})
    split_values['rng_seed'] = config.rng_seed
    split = SplitSpec.from_settings(**split_values)
    return config, split


def load_synth_spec(path=None, **overrides):
    """Same precedence as load_pipeline_config, for SynthSpec"""
    values = {}
    if path:
        entries = read_config_file(path)
        check_known_keys(entries, PipelineConfig, SplitSpec, SynthSpec)
        values = cast_entries(entries, SynthSpec)
    values.update({key: value for key, value in overrides.items() if value is not None})
    return SynthSpec.from_settings(**values)
