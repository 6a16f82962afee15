"""Block Wiener filtering over Toeplitz data matrices, plus spectral subtraction.

Each block solves the sample normal equations (R + loading) w = p, where R
and p are built from an M x N Toeplitz matrix of reference samples. The
matched accompaniment w * s0 is subtracted either per sample (maw_cancel) or
per STFT bin after a magnitude comparison (maw_ss_cancel).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .audio import AudioBuffer, FirFilter, require_matched
from .errors import SolverError
from .stft import Window, istft, make_window, stft


@dataclass
class BlockWienerConfig:
    """Block Wiener settings: filter length M, block size N, hop L.

    ``regularization`` scales diagonal loading relative to the mean diagonal
    of the sample covariance; ``interpolate`` crossfades the taps linearly
    between consecutive blocks to avoid clicks at block boundaries.
    """

    taps: int
    block_size: int
    hop: int
    regularization: float = 1e-8
    interpolate: bool = True

    def __post_init__(self):
        if self.taps < 1:
            raise ValueError("taps must be >= 1")
        if self.taps >= self.block_size:
            raise ValueError("taps must be smaller than block_size")
        if not 0 < self.hop <= self.block_size:
            raise ValueError("hop must satisfy 0 < hop <= block_size")
        if self.regularization < 0:
            raise ValueError("regularization must be >= 0")


def _solve_block(ref_window: np.ndarray, block: np.ndarray, taps: int, reg: float) -> np.ndarray:
    """Wiener-Hopf solve on one block.

    ``ref_window`` holds the M + N - 1 reference samples ending with the
    block; returns the M optimal taps. A silent reference window yields the
    zero filter (the normal equations vanish identically).
    """
    n = len(block)
    col = ref_window[taps - 1 :: -1]
    row = ref_window[taps - 1 :]
    data = scipy.linalg.toeplitz(col, row)
    cov = (data @ data.T) / n
    cross = (data @ block) / n
    trace = float(np.trace(cov))
    if trace <= 0.0:
        return np.zeros(taps)
    if reg > 0.0:
        cov[np.diag_indices_from(cov)] += reg * trace / taps
    try:
        factor = scipy.linalg.cho_factor(cov, check_finite=False)
        return scipy.linalg.cho_solve(factor, cross, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SolverError(
            "sample covariance is singular; retry with regularization > 0"
        ) from exc


def block_wiener(
    reference_window: AudioBuffer,
    mixture_block: AudioBuffer,
    taps: int,
    regularization: float = 1e-8,
) -> FirFilter:
    """Optimal FIR filter matching the reference to one mixture block.

    ``reference_window`` must hold taps + N - 1 samples, where N is the
    mixture block length: the N in-block samples preceded by the taps - 1
    samples of left context the convolution needs.
    """
    n = len(mixture_block)
    if taps < 1 or taps >= n:
        raise ValueError("need 1 <= taps < block length")
    if len(reference_window) != taps + n - 1:
        raise ValueError(
            f"reference window must hold taps + N - 1 = {taps + n - 1} samples, "
            f"got {len(reference_window)}"
        )
    w = _solve_block(reference_window.samples, mixture_block.samples, taps, regularization)
    return FirFilter(w)


def matched_accompaniment(
    mixture: AudioBuffer, reference: AudioBuffer, cfg: BlockWienerConfig
) -> AudioBuffer:
    """The block-Wiener estimate y(k) = w(k) * s0(k) of the accompaniment.

    A new filter is solved every ``hop`` samples on the trailing
    taps + N - 1 reference window (zero-padded before the signal start and
    after its end); with ``interpolate`` the taps blend linearly from the
    previous block's filter across each hop.
    """
    require_matched(mixture, reference)
    x = mixture.samples
    n = len(x)
    m, nblk, hop = cfg.taps, cfg.block_size, cfg.hop
    ref_pad = np.concatenate((np.zeros(m - 1), reference.samples, np.zeros(nblk)))
    x_pad = np.concatenate((x, np.zeros(nblk)))

    y = np.empty(n)
    w_prev: np.ndarray | None = None
    for k in range(0, n, hop):
        w = _solve_block(
            ref_pad[k : k + m + nblk - 1], x_pad[k : k + nblk], m, cfg.regularization
        )
        span = min(hop, n - k)
        seg = ref_pad[k : k + m + span - 1]
        y_new = np.convolve(seg, w)[m - 1 : m - 1 + span]
        if cfg.interpolate and w_prev is not None:
            y_old = np.convolve(seg, w_prev)[m - 1 : m - 1 + span]
            alpha = np.arange(1, span + 1) / hop
            y[k : k + span] = (1.0 - alpha) * y_old + alpha * y_new
        else:
            y[k : k + span] = y_new
        w_prev = w
    return AudioBuffer(y, mixture.sample_rate)


def maw_cancel(
    mixture: AudioBuffer, reference: AudioBuffer, cfg: BlockWienerConfig
) -> AudioBuffer:
    """Moving-average Wiener cancellation with time-domain subtraction.

    The first ``hop`` output samples are produced before any block statistics
    exist and should be treated as warm-up.
    """
    y = matched_accompaniment(mixture, reference, cfg)
    return AudioBuffer(mixture.samples - y.samples, mixture.sample_rate)


def spectral_subtract(spec_x: np.ndarray, spec_y: np.ndarray, p: float) -> np.ndarray:
    """Per-bin magnitude subtraction with half-wave rectification.

    |E| = (|X|^p - |Y|^p)^(1/p) where |X| > |Y| and 0 elsewhere; the phase of
    X is kept. Works on single frames or stacks of frames.
    """
    if p <= 0:
        raise ValueError("p must be > 0")
    spec_x = np.asarray(spec_x, dtype=np.complex128)
    spec_y = np.asarray(spec_y, dtype=np.complex128)
    if spec_x.shape != spec_y.shape:
        raise ValueError("spectra must have identical shapes")
    ax = np.abs(spec_x)
    ay = np.abs(spec_y)
    out = np.zeros_like(spec_x)
    passthrough = ay == 0.0
    out[passthrough] = spec_x[passthrough]
    active = (ax > ay) & ~passthrough
    if np.any(active):
        mag = (ax[active] ** p - ay[active] ** p) ** (1.0 / p)
        np.minimum(mag, ax[active], out=mag)  # guard rounding above |X|
        out[active] = mag * (spec_x[active] / ax[active])
    return out


def maw_ss_cancel(
    mixture: AudioBuffer,
    reference: AudioBuffer,
    cfg: BlockWienerConfig,
    fft_size: int = 4096,
    fft_hop: int = 2048,
    window: Window | None = None,
    p: float = 2.0,
) -> AudioBuffer:
    """Block Wiener matching with subtraction performed in the STFT domain.

    The matched accompaniment is computed exactly as in :func:`maw_cancel`,
    then removed per frame with :func:`spectral_subtract` and resynthesized
    by weighted overlap-add.
    """
    if window is None:
        window = make_window("kbd", fft_size, 4.0)
    y = matched_accompaniment(mixture, reference, cfg)
    spec_x = stft(mixture, window, fft_hop)
    spec_y = stft(y, window, fft_hop)
    est = spectral_subtract(spec_x.frames, spec_y.frames, p)
    out = istft(spec_x.copy_with(est))
    return AudioBuffer(out.samples[: len(mixture)], mixture.sample_rate)
