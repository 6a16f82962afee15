"""Synthetic recording scenes: channel model, microphone IRs, latency calibration.

A scene is built from a dry solo d and a clean accompaniment reference s0:
the accompaniment reaches the microphone attenuated and delayed, both parts
pass through the microphone impulse response, and the recorded mixture is
x = h * (d + A s0(k - kappa)). The metric ground truth is h * d — the
microphone's signature stays part of the estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.signal

from .audio import AudioBuffer, FirFilter, require_matched
from .errors import NoSignalError
from .simo import half_wavelength_spacing


def make_mic_ir(
    rt_ms: float = 13.7, length: int = 606, seed: int = 0, sample_rate: int = 44100
) -> FirFilter:
    """Synthetic microphone impulse response.

    Seeded Gaussian noise under an exponential envelope whose energy falls
    60 dB over ``rt_ms``, a unit first tap (direct path), normalized to unit
    energy. Only the decay rate and length matter to the cancellers; the
    response of any particular capsule is not modeled.
    """
    if rt_ms <= 0:
        raise ValueError("rt_ms must be positive")
    if length < 1:
        raise ValueError("length must be >= 1")
    if length == 1:
        return FirFilter(np.ones(1))
    rt_samples = rt_ms / 1000.0 * sample_rate
    k = np.arange(length)
    envelope = 10.0 ** (-3.0 * k / rt_samples)
    h = envelope * np.random.default_rng(seed).standard_normal(length)
    h[0] = 1.0
    return FirFilter(h / np.linalg.norm(h))


def spl_delta(r1: float, r2: float) -> float:
    """Sound-pressure-level difference of the distance law, 20 log10(r1/r2)."""
    if r1 <= 0 or r2 <= 0:
        raise ValueError("radii must be positive")
    return 20.0 * math.log10(r1 / r2)


def fractional_delay(x: np.ndarray, delay: float, num_taps: int = 31) -> np.ndarray:
    """Delay a sequence by a possibly fractional number of samples.

    Integer delays shift exactly; fractional parts use a windowed-sinc
    interpolator. Output has the input's length (zeros shifted in).
    """
    if num_taps % 2 == 0:
        raise ValueError("num_taps must be odd")
    n = len(x)
    int_part = math.floor(delay)
    frac = delay - int_part

    if frac == 0.0:
        y = x
    else:
        center = num_taps // 2
        t = np.arange(num_taps)
        taps = np.sinc(t - center - frac) * np.blackman(num_taps)
        taps /= np.sum(taps)
        y = np.convolve(x, taps)[center : center + n]

    out = np.zeros(n)
    if int_part >= 0:
        if int_part < n:
            out[int_part:] = y[: n - int_part]
    else:
        if -int_part < n:
            out[: n + int_part] = y[-int_part:]
    return out


@dataclass
class SidoLayout:
    """Two-microphone scene geometry: spacing and the source angles."""

    spacing: float
    solo_angle_deg: float
    accomp_angle_deg: float = 90.0
    f_max: float = 8000.0
    speed_of_sound: float = 343.0

    def validate(self):
        limit = half_wavelength_spacing(self.f_max, self.speed_of_sound)
        if not 0 < self.spacing <= limit * (1.0 + 1e-6):
            raise ValueError(
                f"spacing {self.spacing:.4f} m violates the half-wavelength "
                f"limit {limit:.4f} m at f_max = {self.f_max:.0f} Hz"
            )

    def solo_delay_samples(self, sample_rate: int) -> float:
        return (
            self.spacing
            * math.sin(math.radians(self.solo_angle_deg))
            * sample_rate
            / self.speed_of_sound
        )


@dataclass
class SceneConfig:
    """Everything needed to synthesize a scene.

    The accompaniment gain is either derived from ``level_diff_db`` (recorded
    accompaniment RMS minus recorded solo RMS, in dB) or taken verbatim from
    ``accompaniment_gain`` when ``level_diff_db`` is None (0 mutes it).
    """

    solo: AudioBuffer
    accompaniment_reference: AudioBuffer
    mic_ir: FirFilter
    channel_delay: int = 32
    level_diff_db: float | None = 6.02
    accompaniment_gain: float | None = None
    sido: SidoLayout | None = None

    def __post_init__(self):
        if self.channel_delay < 0:
            raise ValueError("channel_delay must be >= 0")
        if self.level_diff_db is None:
            if self.accompaniment_gain is None:
                raise ValueError("need level_diff_db or accompaniment_gain")
            if self.accompaniment_gain < 0:
                raise ValueError("accompaniment_gain must be >= 0")
        require_matched(self.solo, self.accompaniment_reference, "solo/accompaniment")
        if self.channel_delay >= len(self.solo):
            raise ValueError("buffers too short to absorb the channel delay")


@dataclass
class Scene:
    """A synthesized recording with its clean reference and ground truth."""

    mixture: AudioBuffer
    reference: AudioBuffer
    reference_solo: AudioBuffer  # mic IR applied to the solo
    config: SceneConfig
    mixture2: AudioBuffer | None = None
    accompaniment_gain: float = 1.0

    @property
    def is_sido(self) -> bool:
        return self.mixture2 is not None


def _recorded_parts(cfg: SceneConfig):
    d = cfg.solo
    s0 = cfg.accompaniment_reference
    shifted = np.zeros(len(s0))
    if cfg.channel_delay < len(s0):
        shifted[cfg.channel_delay :] = s0.samples[: len(s0) - cfg.channel_delay]
    recorded_solo = cfg.mic_ir.apply(d)
    recorded_accomp_unit = cfg.mic_ir.apply(AudioBuffer(shifted, s0.sample_rate))
    if cfg.level_diff_db is not None:
        rms_solo = recorded_solo.rms()
        if rms_solo == 0.0:
            raise ValueError("level_diff_db is undefined for a silent solo")
        rms_unit = recorded_accomp_unit.rms()
        if rms_unit == 0.0:
            raise ValueError("accompaniment reference is silent")
        gain = 10.0 ** (cfg.level_diff_db / 20.0) * rms_solo / rms_unit
    else:
        gain = float(cfg.accompaniment_gain)
    return recorded_solo, recorded_accomp_unit, gain


def synth_siso(cfg: SceneConfig) -> Scene:
    """Single-microphone scene: x = h * d + A h * s0(k - kappa)."""
    recorded_solo, accomp_unit, gain = _recorded_parts(cfg)
    mixture = AudioBuffer(
        recorded_solo.samples + gain * accomp_unit.samples, cfg.solo.sample_rate
    )
    return Scene(
        mixture=mixture,
        reference=cfg.accompaniment_reference.copy(),
        reference_solo=recorded_solo,
        config=cfg,
        accompaniment_gain=gain,
    )


def synth_sido(cfg: SceneConfig) -> Scene:
    """Two-microphone scene.

    Channel 2 sees the solo delayed by spacing * sin(solo angle) * fs / c
    (fractional, windowed-sinc); the recorded accompaniment is identical on
    both channels.
    """
    if cfg.sido is None:
        raise ValueError("SceneConfig.sido geometry is required")
    cfg.sido.validate()
    recorded_solo, accomp_unit, gain = _recorded_parts(cfg)
    accomp = gain * accomp_unit.samples

    kappa_d = cfg.sido.solo_delay_samples(cfg.solo.sample_rate)
    if kappa_d == 0.0:
        solo2 = recorded_solo.samples
    else:
        d2 = fractional_delay(cfg.solo.samples, kappa_d)
        solo2 = cfg.mic_ir.apply(AudioBuffer(d2, cfg.solo.sample_rate)).samples

    sr = cfg.solo.sample_rate
    return Scene(
        mixture=AudioBuffer(recorded_solo.samples + accomp, sr),
        mixture2=AudioBuffer(solo2 + accomp, sr),
        reference=cfg.accompaniment_reference.copy(),
        reference_solo=recorded_solo,
        config=cfg,
        accompaniment_gain=gain,
    )


def calibrate_latency(recorded: AudioBuffer, reference: AudioBuffer, max_lag: int) -> int:
    """Lag (in samples) at which the cross-correlation with the reference peaks.

    Searches non-negative lags up to ``max_lag``; intended for measuring the
    playback-to-capture offset from an accompaniment-only calibration take.
    """
    if max_lag < 0 or max_lag >= min(len(recorded), len(reference)):
        raise ValueError("max_lag must satisfy 0 <= max_lag < min length")
    if not np.any(recorded.samples) or not np.any(reference.samples):
        raise NoSignalError("cannot calibrate on silent audio")
    corr = scipy.signal.correlate(recorded.samples, reference.samples, mode="full")
    zero = len(reference) - 1
    window = corr[zero : zero + max_lag + 1]
    return int(np.argmax(window))


# ---------------------------------------------------------------------------
# Test-signal generators. Music-like rather than musical: the solo is a line
# of plucked notes that follows the accompaniment's chord progression (the
# two generators share it through the seed), the accompaniment is comping
# chords, a bass line, light percussion, and a low noise bed under a slow
# tremolo. Shared tonality and note rests are what make the scene behave
# like real material rather than like independent noise.
# ---------------------------------------------------------------------------

CHORD_ROOTS = (110.0, 130.81, 146.83, 164.81, 196.0)
CHORD_SPAN = 0.5  # seconds per chord


def _progression(duration: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    count = int(np.ceil(duration / CHORD_SPAN)) + 1
    return rng.integers(0, len(CHORD_ROOTS), count)


def noise_plus_tones(
    duration: float,
    sample_rate: int = 44100,
    seed: int = 0,
    rms: float = 0.05,
    note_span: float = 0.25,
    sustain: float = 0.6,
    noise_gain: float = 0.08,
    pick_gain: float = 4.0,
) -> AudioBuffer:
    """A solo-like test signal: decaying harmonic notes with pick transients
    and gated noise, resting between notes, on the shared chord progression."""
    rng = np.random.default_rng(seed + 1)
    prog = _progression(duration, seed)
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    out = np.zeros(n)
    slot = int(note_span * sample_rate)
    note_len = int(sustain * slot)
    for start in range(0, n, slot):
        stop = min(n, start + note_len)
        span = stop - start
        if span <= 0:
            break
        root = CHORD_ROOTS[prog[int(start / sample_rate / CHORD_SPAN)]]
        f0 = root * rng.choice((2.0, 3.0, 4.0))
        phase = 2 * np.pi * f0 * t[start:stop]
        tone = (
            np.sin(phase)
            + 0.5 * np.sin(2 * phase + rng.uniform(0, 2 * np.pi))
            + 0.25 * np.sin(3 * phase + rng.uniform(0, 2 * np.pi))
        )
        env = np.exp(-6.0 * np.arange(span) / sample_rate / note_span)
        attack = min(int(0.005 * sample_rate), span)
        env[:attack] *= np.linspace(0.0, 1.0, attack)
        out[start:stop] += env * (tone + noise_gain * rng.standard_normal(span))
        pick = min(int(0.008 * sample_rate), span)
        out[start : start + pick] += (
            pick_gain
            * np.exp(-np.arange(pick) / (0.002 * sample_rate))
            * rng.standard_normal(pick)
        )
    out *= rms / np.sqrt(np.mean(out**2))
    return AudioBuffer(out, sample_rate)


def broadband_accompaniment(
    duration: float,
    sample_rate: int = 44100,
    seed: int = 0,
    rms: float = 0.05,
    bed: float = 0.015,
    tremolo_hz: float = 5.0,
    tremolo_depth: float = 0.6,
    hat_gain: float = 1.0,
    kick_gain: float = 1.5,
) -> AudioBuffer:
    """An accompaniment-like test signal: comping chords and bass over the
    shared progression, hat/kick percussion, a noise bed, and tremolo."""
    rng = np.random.default_rng(seed + 2)
    prog = _progression(duration, seed)
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    out = np.zeros(n)
    chord_len = int(CHORD_SPAN * sample_rate)
    for j, start in enumerate(range(0, n, chord_len)):
        stop = min(n, start + chord_len)
        span = stop - start
        root = CHORD_ROOTS[prog[j]]
        _t = t[start:stop]
        env = np.exp(-2.0 * np.arange(span) / sample_rate / CHORD_SPAN)
        attack = min(int(0.005 * sample_rate), span)
        env[:attack] *= np.linspace(0.0, 1.0, attack)
        chord = np.zeros(span)
        for mult in (1.0, 1.5, 2.0, 2.5, 3.0, 4.0):
            f0 = root * mult
            for harm in range(1, 9):
                if f0 * harm > sample_rate / 2 * 0.9:
                    break
                chord += (1.0 / harm) * np.sin(
                    2 * np.pi * f0 * harm * _t + rng.uniform(0, 2 * np.pi)
                )
        out[start:stop] += 0.5 * env * chord
        bass = np.sin(2 * np.pi * (root / 2) * _t + rng.uniform(0, 2 * np.pi))
        bass += 0.3 * np.sin(2 * np.pi * root * _t)
        out[start:stop] += 0.8 * bass * np.exp(
            -1.0 * np.arange(span) / sample_rate / CHORD_SPAN
        )
    hat_len = int(0.02 * sample_rate)
    hat_env = np.exp(-np.arange(hat_len) / (0.003 * sample_rate))
    b, a = scipy.signal.butter(2, 6000 / (sample_rate / 2), "high")
    for start in range(0, n - hat_len, int(0.25 * sample_rate)):
        out[start : start + hat_len] += hat_gain * hat_env * scipy.signal.lfilter(
            b, a, rng.standard_normal(hat_len)
        )
    kick_len = int(0.06 * sample_rate)
    for start in range(0, n - kick_len, int(0.5 * sample_rate)):
        sweep = 2 * np.pi * np.cumsum(np.linspace(120.0, 50.0, kick_len)) / sample_rate
        out[start : start + kick_len] += kick_gain * np.exp(
            -np.arange(kick_len) / (0.01 * sample_rate)
        ) * np.sin(sweep)
    out *= 1.0 + tremolo_depth * np.sin(2 * np.pi * tremolo_hz * t)
    out += bed * scipy.signal.lfilter([1.0], [1.0, -0.7], rng.standard_normal(n))
    out *= rms / np.sqrt(np.mean(out**2))
    return AudioBuffer(out, sample_rate)


# ---------------------------------------------------------------------------
# Plain-text key=value files (scene parameters and manifests).
# ---------------------------------------------------------------------------


def read_kv(path) -> dict[str, str]:
    """Parse a key=value file; '#' starts a comment, blank lines ignored."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def write_kv(path, entries: dict):
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in entries.items():
            fh.write(f"{key}={value}\n")
