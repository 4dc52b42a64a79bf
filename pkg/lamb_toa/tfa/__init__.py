# -*- coding: utf-8 -*-
"""Time-frequency analysis: STFT, Morlet CWT and the scalogram threshold picker"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from lamb_toa.common import LambToaException

logger = logging.getLogger("TFA")

DEFAULT_OMEGA_C = 5.0
DEFAULT_SUPPORT = 3.0
"""Half-width C of the wavelet support used by the cone of influence"""
DEFAULT_SPACING = 100.0


# region Exceptions
class FrequencyOutOfRange(LambToaException, ValueError):
    def __init__(self, freqs, nyquist) -> None:
        self.freqs = freqs
        super().__init__("频率须在 (0, %.6g) Hz 内且严格递增：%s" % (nyquist, freqs))


class InconsistentChannels(LambToaException, ValueError):
    def __init__(self, desc) -> None:
        super().__init__("各通道尺度图不一致：%s" % desc)


# endregion


class Scalogram:
    """|W|^2 of one channel: rows are times, columns are pseudo-frequencies

    Row r sits at t0 + r * dt. `signal_span` keeps the edges of the analysed
    record, which may be wider than the rows kept. `coi` gives, per row, the
    lowest frequency whose coefficient is unaffected by those edges.
    """

    def __init__(
        self,
        values: np.ndarray,
        freqs: Sequence[float],
        scales: Sequence[float],
        dt: float,
        t0: float,
        signal_span: Tuple[float, float],
        omega_c: float = DEFAULT_OMEGA_C,
        support: float = DEFAULT_SUPPORT,
        normalizer: Optional[float] = None,
        name: str = "",
    ) -> None:
        values = np.array(values, dtype=float)
        freqs = np.array(freqs, dtype=float)
        scales = np.array(scales, dtype=float)
        if values.ndim != 2 or values.shape[1] != freqs.size or scales.size != freqs.size:
            raise InconsistentChannels("values %s 与 %d 个频率不匹配" % (values.shape, freqs.size))
        if freqs.size > 1 and np.any(np.diff(freqs) <= 0):
            raise FrequencyOutOfRange(freqs, 0.5 / dt)
        for a in (values, freqs, scales):
            a.flags.writeable = False
        self.values, self.freqs, self.scales = values, freqs, scales
        self.dt = float(dt)
        self.t0 = float(t0)
        self.signal_span = (float(signal_span[0]), float(signal_span[1]))
        self.omega_c = float(omega_c)
        self.support = float(support)
        self.normalizer = float(values.max()) if normalizer is None else float(normalizer)
        self.name = name

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.values.shape[0]) * self.dt

    @property
    def coi(self) -> np.ndarray:
        """Lowest trustworthy frequency per row (Hz); inf on the record edges"""
        first, last = self.signal_span
        edge = np.maximum(np.minimum(self.times - first, last - self.times), 0.0)
        if self.support == 0:
            return np.zeros_like(edge)
        with np.errstate(divide="ignore"):
            return self.support * self.omega_c / (2 * np.pi * edge)

    def nearest(self, f: float) -> int:
        return int(np.argmin(np.abs(self.freqs - f)))

    def with_normalizer(self, normalizer: float) -> "Scalogram":
        return Scalogram(
            self.values,
            self.freqs,
            self.scales,
            self.dt,
            self.t0,
            self.signal_span,
            self.omega_c,
            self.support,
            normalizer,
            self.name,
        )

    def to_frame(self) -> pd.DataFrame:
        """Long format: time_s, freq_hz, value"""
        n_t, n_f = self.values.shape
        return pd.DataFrame(
            {
                "time_s": np.repeat(self.times, n_f),
                "freq_hz": np.tile(self.freqs, n_t),
                "value": self.values.ravel(),
            }
        )

    def __repr__(self) -> str:
        return "< scalogram %s : %d x %d , %.6g..%.6g Hz >" % (
            self.name,
            self.values.shape[0],
            self.values.shape[1],
            self.freqs[0],
            self.freqs[-1],
        )


def frequency_grid(f_lo: float, f_hi: float, spacing: float = DEFAULT_SPACING) -> np.ndarray:
    """f_lo, f_lo + spacing, ... up to and including f_hi"""
    if not (0 < f_lo <= f_hi and spacing > 0):
        raise FrequencyOutOfRange((f_lo, f_hi, spacing), np.inf)
    count = int(np.floor((f_hi - f_lo) / spacing + 1e-9)) + 1
    return f_lo + spacing * np.arange(count)


from lamb_toa.tfa.stft import Spectrogram, stft
from lamb_toa.tfa.cwt import (
    coi_boundary,
    cwt,
    cwt_coefficients,
    cwt_tc_pick,
    morlet,
    normalize_channels,
    scalogram_section,
    shared_normalizer,
)
