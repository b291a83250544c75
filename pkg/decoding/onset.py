"""
Amplitude-based onset detection.

The signal is cut into consecutive non-overlapping frames. Each frame's
statistic is the channel-averaged RMS after removing the frame mean, and
is z-scored against a baseline fitted on rest data. An onset fires at the
end of the frame that completes a run of ``consecutive_required`` frames
above threshold. The detector re-arms only after a frame below threshold,
and never fires within ``refractory_ms`` of the previous onset.
"""
import dataclasses
import logging
from dataclasses import dataclass

import numpy as np

from eeg.exceptions import DecoderError
from eeg.validators import samples_for_ms, validate_positive

logger = logging.getLogger('bts.onset')


@dataclass(frozen=True)
class OnsetDetector:
    rms_window_ms: int = 100
    threshold_z: float = 2.5
    consecutive_required: int = 2
    refractory_ms: int = 1000
    baseline_mean: float | None = None
    baseline_std: float | None = None

    def __post_init__(self):
        validate_positive(self.rms_window_ms, 'rms_window_ms')
        validate_positive(self.threshold_z, 'threshold_z')
        validate_positive(self.consecutive_required, 'consecutive_required')
        if self.refractory_ms < 0:
            raise DecoderError('refractory_ms must be >= 0', code='bad_refractory')
        if self.baseline_std is not None and not self.baseline_std > 0:
            raise DecoderError('baseline std must be positive, got %(std)s', code='flat_baseline',
                               params={'std': self.baseline_std})

    @classmethod
    def from_config(cls, config):
        return cls(
            rms_window_ms=config.onset_rms_window_ms,
            threshold_z=config.onset_threshold_z,
            consecutive_required=config.onset_consecutive,
            refractory_ms=config.onset_refractory_ms,
        )

    @property
    def fitted(self):
        return self.baseline_mean is not None and self.baseline_std is not None

    def to_dict(self):
        return dataclasses.asdict(self)


def moving_rms(samples, fs, rms_window_ms=100):
    """Channel-averaged RMS of each complete frame; a trailing partial frame is dropped"""
    samples = np.asarray(samples, dtype=np.float64)
    frame = samples_for_ms(rms_window_ms, fs, what='rms_window_ms')
    n_frames = samples.shape[1] // frame
    frames = samples[:, :n_frames * frame].reshape(samples.shape[0], n_frames, frame)
    centered = frames - frames.mean(axis=-1, keepdims=True)
    return np.sqrt(np.mean(centered ** 2, axis=-1)).mean(axis=0)


def fit_baseline(detector, segments, fs):
    """Baseline mean and std of the frame statistic over rest segments"""
    values = [moving_rms(segment, fs, detector.rms_window_ms) for segment in segments]
    values = np.concatenate(values) if values else np.empty(0)
    if values.size < 2:
        raise DecoderError('baseline needs at least 2 frames of rest data, got %(n)d', code='short_baseline',
                           params={'n': values.size})
    return dataclasses.replace(detector, baseline_mean=float(values.mean()), baseline_std=float(values.std()))


class OnsetTracker:
    """Streaming onset detection; feed chunks, collect onset times in ms"""

    def __init__(self, detector, fs):
        if not detector.fitted:
            raise DecoderError('onset detector has no baseline; fit it on rest data first', code='no_baseline')
        self.detector = detector
        self.fs = fs
        self.frame = samples_for_ms(detector.rms_window_ms, fs, what='rms_window_ms')
        self.frames_seen = 0
        self.run = 0
        self.armed = True
        self.last_onset_ms = None
        self.onsets = []
        self._pending = None

    def feed(self, chunk):
        chunk = np.asarray(chunk, dtype=np.float64)
        if self._pending is not None:
            chunk = np.concatenate([self._pending, chunk], axis=1)
        complete = (chunk.shape[1] // self.frame) * self.frame
        self._pending = chunk[:, complete:].copy()

        found = []
        z = (moving_rms(chunk[:, :complete], self.fs, self.detector.rms_window_ms) - self.detector.baseline_mean)
        z /= self.detector.baseline_std
        for value in z:
            self.frames_seen += 1
            if value > self.detector.threshold_z:
                self.run += 1
            else:
                self.run = 0
                self.armed = True
            if self.run < self.detector.consecutive_required or not self.armed:
                continue
            t_ms = self.frames_seen * self.detector.rms_window_ms
            if self.last_onset_ms is not None and t_ms - self.last_onset_ms < self.detector.refractory_ms:
                continue
            self.armed = False
            self.last_onset_ms = t_ms
            found.append(t_ms)
        self.onsets.extend(found)
        return found


def detect_onsets(rec, detector):
    """Onset times in ms over a whole recording"""
    tracker = OnsetTracker(detector, rec.fs)
    tracker.feed(rec.samples)
    return list(tracker.onsets)
