"""
Causal Butterworth bandpass filtering as a cascade of second-order sections.

The filter keeps one delay state per section and channel, so a signal fed
in consecutive chunks comes out bit-identical to the same signal filtered
in one call.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import signal

from eeg.exceptions import FilterDesignError
from eeg.validators import samples_for_ms, validate_band

logger = logging.getLogger('bts.dsp')


@dataclass(eq=False)
class BiquadCascade:
    sos: np.ndarray
    lo_hz: float
    hi_hz: float
    order: int
    fs: float
    state: np.ndarray | None = None

    @property
    def n_sections(self):
        return self.sos.shape[0]

    @property
    def sections(self):
        """(b0, b1, b2, a1, a2) per section; a0 is always 1"""
        return [tuple(row[[0, 1, 2, 4, 5]]) for row in self.sos]

    @property
    def poles(self):
        return np.concatenate([np.roots(row[3:]) for row in self.sos])

    @property
    def n_channels(self):
        return None if self.state is None else self.state.shape[1]

    def reset(self, channels):
        """Zero state for ``channels`` channels: 2 delays per section and channel"""
        self.state = np.zeros((self.n_sections, channels, 2))
        return self

    def fresh(self):
        """Same design, no state"""
        return BiquadCascade(self.sos, self.lo_hz, self.hi_hz, self.order, self.fs)


def design_bandpass(lo_hz, hi_hz, fs, order=4):
    """
    Butterworth bandpass via the bilinear transform with prewarped edges.

    ``order`` counts poles per band edge, so the default gives 8 poles in
    4 sections.
    """
    if order < 2 or order % 2:
        raise FilterDesignError('filter order must be even and >= 2, got %(order)s', code='bad_order',
                                params={'order': order})
    validate_band(lo_hz, hi_hz, fs)

    sos = signal.butter(order, [lo_hz, hi_hz], btype='bandpass', fs=fs, output='sos')
    cascade = BiquadCascade(sos=sos, lo_hz=float(lo_hz), hi_hz=float(hi_hz), order=order, fs=float(fs))
    radius = np.max(np.abs(cascade.poles))
    if radius >= 1.0:
        raise FilterDesignError('unstable design: pole radius %(radius).6f', code='unstable',
                                params={'radius': radius})
    return cascade


def design_from_config(config, fs):
    return design_bandpass(config.band_lo_hz, config.band_hi_hz, fs, config.filter_order)


def filter_apply(cascade, x):
    """
    Filter a channels x time array (or an EegRecording) causally.

    State carries over from the previous call; a cascade without state
    starts from rest.
    """
    recording = None
    if hasattr(x, 'samples'):
        recording, x = x, x.samples
    x = np.asarray(x)
    if x.ndim != 2:
        raise FilterDesignError('expected channels x time, got shape %(shape)s', code='bad_shape',
                                params={'shape': x.shape})
    if cascade.state is None:
        cascade.reset(x.shape[0])
    elif cascade.n_channels != x.shape[0]:
        raise FilterDesignError('filter state holds %(state)d channels, input has %(channels)d',
                                code='channel_mismatch', params={'state': cascade.n_channels, 'channels': x.shape[0]})

    y, cascade.state = signal.sosfilt(cascade.sos, x, axis=-1, zi=cascade.state)
    if recording is not None:
        return recording.with_samples(y)
    return y


def iter_filtered(rec, cascade, chunk_ms=10_000):
    """Yield (first sample index, filtered chunk) over the whole recording"""
    chunk = samples_for_ms(chunk_ms, rec.fs, what='chunk_ms')
    cascade.reset(rec.n_channels)
    for start in range(0, rec.n_samples, chunk):
        yield start, filter_apply(cascade, rec.samples[:, start:start + chunk])


def iter_spans(rec, cascade, spans, chunk_ms=10_000, dtype=np.float64):
    """
    Filter the whole recording causally and yield (span index, filtered
    span) for each requested (start, stop) sample span as soon as it is
    complete. Only spans in progress are held in memory.
    """
    order = sorted(range(len(spans)), key=lambda i: spans[i][0])
    open_spans = {}
    first = 0
    for offset, chunk in iter_filtered(rec, cascade, chunk_ms):
        end = offset + chunk.shape[1]
        while first < len(order) and spans[order[first]][0] < end:
            i = order[first]
            open_spans[i] = np.empty((rec.n_channels, spans[i][1] - spans[i][0]), dtype=dtype)
            first += 1
        for i in sorted(open_spans):
            start, stop = spans[i]
            lo, hi = max(start, offset), min(stop, end)
            if lo < hi:
                open_spans[i][:, lo - start:hi - start] = chunk[:, lo - offset:hi - offset]
            if stop <= end:
                yield i, open_spans.pop(i)

