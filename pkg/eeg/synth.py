"""
Seeded synthetic imagined-speech sessions.

Background activity is 1/f noise with a fixed spatial correlation. During
each trial a band-limited source is projected through the class's unit
mixing vector, so classes differ only in their spatial pattern. The rest
class carries no source.
"""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from scipy import linalg, signal

from .exceptions import ConfigError
from .types import DEFAULT_LABELS, REST_LABEL, Annotation, EegRecording, Vocabulary
from .validators import samples_for_ms, validate_band, validate_positive

logger = logging.getLogger('bts.synth')

# 1/f approximation: three real poles and zeros interleaved across the band
PINK_B = np.array([0.049922035, -0.095993537, 0.050612699, -0.004408786])
PINK_A = np.array([1.0, -2.494956002, 2.017265875, -0.522189400])

_NOISE, _SOURCE, _MIXING, _ORDER = range(4)
_MAX_DRAWS = 10_000


@dataclass(frozen=True)
class SynthSpec:
    labels: tuple[str, ...] = DEFAULT_LABELS
    channels: int = 64
    fs: float = 1000.0
    trials_per_class: int = 100
    snr: float = 2.0
    noise_uv: float = 10.0
    spatial_rho: float = 0.6
    trial_ms: int = 2000
    iti_ms: int = 1000
    lead_ms: int = 2000
    min_angle_deg: float = 30.0
    band_lo_hz: float = 30.0
    band_hi_hz: float = 120.0
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'labels', tuple(self.labels))
        Vocabulary(self.labels)
        for name in ('channels', 'fs', 'trials_per_class', 'noise_uv', 'trial_ms', 'min_angle_deg'):
            validate_positive(getattr(self, name), name)
        if self.snr < 0:
            raise ConfigError('snr must be >= 0, got %(snr)s', code='bad_snr', params={'snr': self.snr})
        if self.iti_ms < 0 or self.lead_ms < 0:
            raise ConfigError('iti_ms and lead_ms must be >= 0', code='bad_layout')
        if not 0 <= self.spatial_rho < 1:
            raise ConfigError('spatial_rho must be in [0, 1), got %(rho)s', code='bad_rho',
                              params={'rho': self.spatial_rho})
        validate_band(self.band_lo_hz, self.band_hi_hz, self.fs)
        for name in ('trial_ms', 'iti_ms', 'lead_ms'):
            samples_for_ms(getattr(self, name), self.fs, what=name)

    @classmethod
    def from_settings(cls, **overrides):
        values = dict(getattr(settings, 'BTS_SYNTH_DEFAULTS', {}))
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    @property
    def vocabulary(self):
        return Vocabulary(self.labels)

    @property
    def n_trials(self):
        return len(self.labels) * self.trials_per_class

    @property
    def duration_ms(self):
        return self.lead_ms + self.n_trials * (self.trial_ms + self.iti_ms)

    def class_snr(self, label):
        return 0.0 if label == REST_LABEL else self.snr

    def to_dict(self):
        values = dataclasses.asdict(self)
        values['labels'] = list(self.labels)
        return values


@dataclass(frozen=True, eq=False)
class SynthManifest:
    """Ground truth of a generated session"""

    spec: SynthSpec
    trial_labels: tuple[str, ...]
    trial_starts_ms: tuple[float, ...]
    mixing: np.ndarray
    noise_scale: float

    def to_dict(self):
        return {
            'spec': self.spec.to_dict(),
            'trial_labels': list(self.trial_labels),
            'trial_starts_ms': list(self.trial_starts_ms),
            'mixing': {label: self.mixing[k].tolist() for k, label in enumerate(self.spec.labels)},
            'class_snr': {label: self.spec.class_snr(label) for label in self.spec.labels},
            'noise_scale': self.noise_scale,
        }

    @classmethod
    def from_dict(cls, data):
        spec = SynthSpec(**{**data['spec'], 'labels': tuple(data['spec']['labels'])})
        return cls(
            spec=spec,
            trial_labels=tuple(data['trial_labels']),
            trial_starts_ms=tuple(data['trial_starts_ms']),
            mixing=np.array([data['mixing'][label] for label in spec.labels]),
            noise_scale=data['noise_scale'],
        )

    def mixing_vector(self, label):
        return self.mixing[self.spec.vocabulary.index(label)]


def _stream(seed, which):
    return np.random.default_rng([seed, which])


def pink_noise_gain():
    """RMS gain of the 1/f shaping filter for unit white input"""
    impulse = np.zeros(1 << 16)
    impulse[0] = 1.0
    response = signal.lfilter(PINK_B, PINK_A, impulse)
    return float(np.sqrt(np.sum(response ** 2)))


def spatial_mixer(channels, rho):
    """Lower Cholesky factor of the rho**|i-j| channel correlation"""
    correlation = linalg.toeplitz(rho ** np.arange(channels))
    return linalg.cholesky(correlation, lower=True)


def draw_mixing_vectors(k, channels, min_angle_deg, rng):
    """
    Unit vectors with every pairwise angle >= min_angle_deg (sign ignored).
    """
    limit = np.cos(np.deg2rad(min_angle_deg))
    vectors = []
    draws = 0
    while len(vectors) < k:
        draws += 1
        if draws > _MAX_DRAWS:
            raise ConfigError('cannot place %(k)d mixing vectors %(angle)s degrees apart in %(channels)d channels',
                              code='mixing_infeasible',
                              params={'k': k, 'angle': min_angle_deg, 'channels': channels})
        candidate = rng.standard_normal(channels)
        candidate /= np.linalg.norm(candidate)
        if all(abs(candidate @ other) <= limit for other in vectors):
            vectors.append(candidate)
    return np.array(vectors)


def bandlimited_source(n_samples, fs, lo_hz, hi_hz, rng):
    """White noise masked to [lo, hi] Hz in the frequency domain, unit RMS"""
    spectrum = np.fft.rfft(rng.standard_normal(n_samples))
    freqs = np.fft.rfftfreq(n_samples, d=1.0 / fs)
    spectrum[(freqs < lo_hz) | (freqs > hi_hz)] = 0.0
    source = np.fft.irfft(spectrum, n=n_samples)
    return source / np.sqrt(np.mean(source ** 2))


def background_noise(channels, n_samples, fs, noise_uv, rho, rng, block_ms=10_000):
    """Spatially correlated 1/f noise, channels x time float32, per-channel RMS ~ noise_uv"""
    block = max(1, int(round(block_ms * fs / 1000.0)))
    scale = noise_uv / pink_noise_gain()
    mixer = spatial_mixer(channels, rho)
    out = np.empty((channels, n_samples), dtype=np.float32)

    state = np.zeros((channels, len(PINK_A) - 1))
    # warm-up block brings the filter state to steady state
    _, state = signal.lfilter(PINK_B, PINK_A, rng.standard_normal((channels, block)), axis=1, zi=state)
    for start in range(0, n_samples, block):
        stop = min(start + block, n_samples)
        white = rng.standard_normal((channels, stop - start))
        shaped, state = signal.lfilter(PINK_B, PINK_A, white, axis=1, zi=state)
        out[:, start:stop] = scale * (mixer @ shaped)
    return out, scale


def generate_session(spec):
    """Generate one continuous session and its ground-truth manifest"""
    vocabulary = spec.vocabulary
    fs = spec.fs
    trial_n = samples_for_ms(spec.trial_ms, fs)
    n_samples = samples_for_ms(spec.duration_ms, fs, what='session duration')

    order = _stream(spec.rng_seed, _ORDER).permutation(
        np.repeat(np.arange(len(vocabulary)), spec.trials_per_class))
    mixing = draw_mixing_vectors(len(vocabulary), spec.channels, spec.min_angle_deg,
                                 _stream(spec.rng_seed, _MIXING))
    samples, scale = background_noise(spec.channels, n_samples, fs, spec.noise_uv, spec.spatial_rho,
                                      _stream(spec.rng_seed, _NOISE))

    source_rng = _stream(spec.rng_seed, _SOURCE)
    annotations = []
    for trial, k in enumerate(order):
        label = vocabulary.label(int(k))
        start_ms = spec.lead_ms + trial * (spec.trial_ms + spec.iti_ms)
        start = samples_for_ms(start_ms, fs)
        source = bandlimited_source(trial_n, fs, spec.band_lo_hz, spec.band_hi_hz, source_rng)
        amplitude = spec.class_snr(label) * spec.noise_uv
        if amplitude:
            samples[:, start:start + trial_n] += (amplitude * np.outer(mixing[k], source)).astype(np.float32)
        annotations.append(Annotation(float(start_ms), label))

    recording = EegRecording(samples=samples, fs=fs, annotations=tuple(annotations))
    manifest = SynthManifest(
        spec=spec,
        trial_labels=tuple(label for _, label in annotations),
        trial_starts_ms=tuple(time_ms for time_ms, _ in annotations),
        mixing=mixing,
        noise_scale=scale,
    )
    logger.debug('Generated %d trials over %.1f s (seed %d)', len(annotations), n_samples / fs, spec.rng_seed)
    return recording, manifest
