# -*- coding: utf-8 -*-
"""Zero-phase Butterworth low-pass"""
import numpy as np
from scipy.signal import butter, sosfilt, sosfiltfilt

from lamb_toa.signal import CutoffOutOfRange, Waveform

ORDER = 2
SETTLE_THRESHOLD = 1e-12
PAD_SETTLE_FACTOR = 3
_SETTLE_START = 1024
_SETTLE_LIMIT = 1 << 24


def design(cutoff: float, fs: float, order: int = ORDER) -> np.ndarray:
    """Second-order sections of the digital Butterworth low-pass (prewarped bilinear)"""
    nyquist = 0.5 * fs
    if not 0 < cutoff < nyquist:
        raise CutoffOutOfRange(cutoff, nyquist)
    return butter(order, cutoff, btype="low", fs=fs, output="sos")


def settling_length(sos: np.ndarray, threshold: float = SETTLE_THRESHOLD) -> int:
    """Samples until the impulse response stays below `threshold` of its peak"""
    length = _SETTLE_START
    while True:
        impulse = np.zeros(length)
        impulse[0] = 1.0
        h = np.abs(sosfilt(sos, impulse))
        above = np.flatnonzero(h > threshold * h.max())
        last = int(above[-1]) + 1
        if last < length // 2 or length >= _SETTLE_LIMIT:
            return last
        length *= 2


def lowpass(w: Waveform, cutoff: float, order: int = ORDER) -> Waveform:
    """Forward-backward Butterworth low-pass, zero group delay

    Edges are mirror-padded with 3x the settling length (at most N - 1).

    Raises:
        CutoffOutOfRange: cutoff not in (0, fs / 2)
    """
    sos = design(cutoff, w.fs, order)
    padlen = min(PAD_SETTLE_FACTOR * settling_length(sos), w.n - 1)
    return w.with_samples(sosfiltfilt(sos, w.samples, padtype="even", padlen=padlen))
