# -*- coding: utf-8 -*-
"""Short-time Fourier transform"""
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import fft as sp_fft
from scipy.signal import get_window

from lamb_toa.common import InvalidParameter, worker_count
from lamb_toa.estimators import WindowTooLong
from lamb_toa.signal import Waveform


class Spectrogram(NamedTuple):
    values: np.ndarray
    """|X|^2, one row per frame, one column per rfft bin"""
    freqs: np.ndarray
    times: np.ndarray
    """frame centre times"""


def stft(w: Waveform, window: str = "hann", window_len: int = 256, hop: int = 64) -> Spectrogram:
    """Magnitude-squared one-sided spectra of windowed frames starting every `hop` samples"""
    if window_len < 1 or window_len > w.n:
        raise WindowTooLong("STFT", window_len, w.n)
    if hop < 1:
        raise InvalidParameter("hop", hop, "(须 >= 1)")
    taper = get_window(window, window_len, fftbins=True)
    frames = sliding_window_view(w.samples, window_len)[::hop]
    values = np.abs(sp_fft.rfft(frames * taper, axis=-1, workers=worker_count())) ** 2
    starts = np.arange(frames.shape[0]) * hop
    return Spectrogram(
        values,
        sp_fft.rfftfreq(window_len, w.dt),
        w.t0 + (starts + (window_len - 1) / 2) * w.dt,
    )
