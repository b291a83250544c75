"""
Dataset file persistence.

Layout of a ``.btse`` file, all integers and floats little-endian::

    magic      4 bytes   b'BTSE'
    version    uint16
    fs         float64   Hz
    channels   uint32
    samples    uint64    per channel
    names      channels x (uint16 byte length + utf-8 text)
    payload    channels x samples float32, channel-major
    count      uint32    number of annotations
    table      count x (float64 time_ms + uint16 byte length + utf-8 label)
"""
import csv
import hashlib
import json
import logging
import struct
from pathlib import Path

import numpy as np

from .exceptions import DatasetFormatError
from .types import Annotation, EegRecording

logger = logging.getLogger('bts.io')

MAGIC = b'BTSE'
FORMAT_VERSION = 1
SAMPLE_DTYPE = np.dtype('<f4')

_HEADER = struct.Struct('<4sHdIQ')
_LENGTH = struct.Struct('<H')
_COUNT = struct.Struct('<I')
_TIME = struct.Struct('<d')


def _pack_text(text):
    raw = text.encode('utf-8')
    if len(raw) > 0xFFFF:
        raise DatasetFormatError('text field longer than 65535 bytes: %(start)s...', code='text_too_long',
                                 params={'start': text[:20]})
    return _LENGTH.pack(len(raw)) + raw


def _read_exact(handle, size, what):
    data = handle.read(size)
    if len(data) != size:
        raise DatasetFormatError('truncated payload: %(what)s needs %(size)d bytes, %(found)d left',
                                 code='truncated_payload', params={'what': what, 'size': size, 'found': len(data)})
    return data


def _read_text(handle, what):
    (length,) = _LENGTH.unpack(_read_exact(handle, _LENGTH.size, what))
    raw = _read_exact(handle, length, what)
    try:
        return raw.decode('utf-8')
    except UnicodeDecodeError as exc:
        raise DatasetFormatError('%(what)s is not valid utf-8', code='bad_text', params={'what': what}) from exc


def write_dataset(rec, path):
    """
    Write ``rec`` to ``path``; samples are stored as float32.

    Samples that float32 cannot hold exactly are refused rather than
    rounded, so a written file always reads back bit-identical.
    """
    path = Path(path)
    payload = np.ascontiguousarray(rec.samples, dtype=SAMPLE_DTYPE)
    if not np.array_equal(payload.astype(np.float64), rec.samples):
        lost = float(np.max(np.abs(payload.astype(np.float64) - rec.samples)))
        raise DatasetFormatError(
            'samples are not exactly representable as float32 (max rounding error %(lost).3g); '
            'cast the recording to float32 before writing',
            code='lossy_samples', params={'lost': lost})
    with path.open('wb') as handle:
        handle.write(_HEADER.pack(MAGIC, FORMAT_VERSION, rec.fs, rec.n_channels, rec.n_samples))
        for name in rec.channel_names:
            handle.write(_pack_text(name))
        payload.tofile(handle)
        handle.write(_COUNT.pack(len(rec.annotations)))
        for time_ms, label in rec.annotations:
            handle.write(_TIME.pack(time_ms))
            handle.write(_pack_text(label))
    logger.info('Wrote %s: %d channels, %d samples, %d annotations',
                path, rec.n_channels, rec.n_samples, len(rec.annotations))
    return path


def read_dataset(path):
    """Read a dataset file; any corruption raises DatasetFormatError"""
    path = Path(path)
    try:
        handle = path.open('rb')
    except OSError as exc:
        raise DatasetFormatError('cannot open dataset %(path)s: %(error)s', code='unreadable',
                                 params={'path': str(path), 'error': exc.strerror or exc}) from exc

    with handle:
        magic = handle.read(len(MAGIC))
        if magic != MAGIC:
            raise DatasetFormatError('bad magic %(found)r in %(path)s, expected %(magic)r', code='bad_magic',
                                     params={'found': magic, 'path': str(path), 'magic': MAGIC})
        handle.seek(0)
        _, version, fs, channels, samples = _HEADER.unpack(_read_exact(handle, _HEADER.size, 'header'))
        if version != FORMAT_VERSION:
            raise DatasetFormatError('version mismatch: file has version %(found)d, reader supports %(expected)d',
                                     code='version_mismatch', params={'found': version, 'expected': FORMAT_VERSION})

        names = tuple(_read_text(handle, 'channel name') for _ in range(channels))

        count = channels * samples
        payload = np.fromfile(handle, dtype=SAMPLE_DTYPE, count=count)
        if payload.size != count:
            raise DatasetFormatError('truncated payload: header declares %(expected)d values, file holds %(found)d',
                                     code='truncated_payload', params={'expected': count, 'found': payload.size})

        (n_annotations,) = _COUNT.unpack(_read_exact(handle, _COUNT.size, 'annotation count'))
        annotations = []
        for _ in range(n_annotations):
            (time_ms,) = _TIME.unpack(_read_exact(handle, _TIME.size, 'annotation time'))
            annotations.append(Annotation(time_ms, _read_text(handle, 'annotation label')))

        if handle.read(1):
            raise DatasetFormatError('trailing bytes after annotation table in %(path)s', code='trailing_bytes',
                                     params={'path': str(path)})

    return EegRecording(
        samples=payload.reshape(channels, samples),
        fs=fs,
        channel_names=names,
        annotations=tuple(annotations),
    )


def read_csv(path, fs, annotations=()):
    """
    Import a time-major CSV: a header row of channel names, then one row per sample.
    """
    path = Path(path)
    try:
        with path.open(newline='', encoding='utf-8') as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise DatasetFormatError('cannot open csv %(path)s: %(error)s', code='unreadable',
                                 params={'path': str(path), 'error': exc.strerror or exc}) from exc
    if len(rows) < 2:
        raise DatasetFormatError('csv %(path)s needs a header row and at least one sample row', code='empty_csv',
                                 params={'path': str(path)})

    names = tuple(name.strip() for name in rows[0])
    body = [row for row in rows[1:] if row]
    for number, row in enumerate(body, start=2):
        if len(row) != len(names):
            raise DatasetFormatError('csv row %(row)d has %(found)d values, header names %(expected)d channels',
                                     code='ragged_csv',
                                     params={'row': number, 'found': len(row), 'expected': len(names)})
    try:
        values = np.array(body, dtype=np.float64)
    except ValueError as exc:
        raise DatasetFormatError('csv %(path)s holds a non-numeric sample', code='bad_csv_value',
                                 params={'path': str(path)}) from exc

    return EegRecording(
        samples=np.ascontiguousarray(values.T, dtype=np.float32),
        fs=fs,
        channel_names=names,
        annotations=tuple(annotations),
    )


def file_sha256(path):
    digest = hashlib.sha256()
    with Path(path).open('rb') as handle:
        for block in iter(lambda: handle.read(1 << 20), b''):
            digest.update(block)
    return digest.hexdigest()


def manifest_path_for(dataset_path):
    return Path(dataset_path).with_suffix('.manifest.json')


def dumps_json(data):
    """Deterministic JSON: sorted keys, fixed indentation"""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


def write_json(data, path):
    path = Path(path)
    path.write_text(dumps_json(data) + '\n', encoding='utf-8')
    return path


def read_json(path, error=DatasetFormatError):
    try:
        return json.loads(Path(path).read_text(encoding='utf-8'))
    except OSError as exc:
        raise error('cannot read %(path)s: %(error)s', code='unreadable',
                    params={'path': str(path), 'error': exc.strerror or exc}) from exc
    except json.JSONDecodeError as exc:
        raise error('%(path)s is not valid JSON: %(error)s', code='bad_json',
                    params={'path': str(path), 'error': exc.msg}) from exc
