"""Accompaniment cancellation for live solo recordings.

Given a recording of a soloist playing over a known backing track and the
clean backing-track reference, these modules estimate the isolated solo.
Six cancellers are provided (adaptive LMS/NLMS with optional pre-whitening,
block Wiener filtering with time-domain or spectral subtraction, short-time
ERB-band Wiener filtering, and a two-microphone MRC variant), together with
a scene simulator and the matching objective metrics.
"""

from .audio import AudioBuffer, FirFilter
from .erb import ErbPartition, erbs, make_partition
from .errors import NoSignalError, SolverError
from .anc import AncConfig, LmsState, Whitener, anc_cancel, fit_whitener, lms_step
from .metrics import MetricsReport, measure, rmsd, rtf, snrf
from .sbw import SbwConfig, sbw_cancel, subband_wiener_gains
from .scenes import (
    Scene,
    SceneConfig,
    SidoLayout,
    broadband_accompaniment,
    calibrate_latency,
    fractional_delay,
    make_mic_ir,
    noise_plus_tones,
    spl_delta,
    synth_sido,
    synth_siso,
)
from .simo import (
    ArrayGeometry,
    DelayEstimate,
    angle_from_delay,
    delay_from_angle,
    estimate_delay,
    half_wavelength_spacing,
    mrc_combine,
    sbw_simo_cancel,
)
from .stft import SpectralFrameSeq, Window, istft, make_window, stft
from .wavio import read_channels, read_mono, read_wav, write_wav
from .wiener import (
    BlockWienerConfig,
    block_wiener,
    matched_accompaniment,
    maw_cancel,
    maw_ss_cancel,
    spectral_subtract,
)

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer",
    "FirFilter",
    "AncConfig",
    "LmsState",
    "Whitener",
    "anc_cancel",
    "fit_whitener",
    "lms_step",
    "ErbPartition",
    "erbs",
    "make_partition",
    "NoSignalError",
    "SolverError",
    "MetricsReport",
    "measure",
    "rmsd",
    "rtf",
    "snrf",
    "SbwConfig",
    "sbw_cancel",
    "subband_wiener_gains",
    "Scene",
    "SceneConfig",
    "SidoLayout",
    "broadband_accompaniment",
    "calibrate_latency",
    "fractional_delay",
    "make_mic_ir",
    "noise_plus_tones",
    "spl_delta",
    "synth_sido",
    "synth_siso",
    "ArrayGeometry",
    "DelayEstimate",
    "angle_from_delay",
    "delay_from_angle",
    "estimate_delay",
    "half_wavelength_spacing",
    "mrc_combine",
    "sbw_simo_cancel",
    "SpectralFrameSeq",
    "Window",
    "istft",
    "make_window",
    "stft",
    "read_channels",
    "read_mono",
    "read_wav",
    "write_wav",
    "BlockWienerConfig",
    "block_wiener",
    "matched_accompaniment",
    "maw_cancel",
    "maw_ss_cancel",
    "spectral_subtract",
]
