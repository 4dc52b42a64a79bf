# -*- coding: utf-8 -*-
"""Sampled waveforms and the transforms that make or alter them"""
import logging
from typing import NamedTuple, Optional

import numpy as np

from lamb_toa.common import LambToaException

logger = logging.getLogger("Signal")

DEFAULT_DT = 0.2e-6
DEFAULT_DURATION = 3e-3


# region Exceptions
class InvalidWaveform(LambToaException, ValueError):
    def __init__(self, desc) -> None:
        super().__init__("波形无效：%s" % desc)


class NyquistViolation(LambToaException, ValueError):
    def __init__(self, f0, dt) -> None:
        self.f0 = f0
        self.dt = dt
        super().__init__("频率 %.6g Hz 超出 Nyquist 频率 %.6g Hz" % (f0, 0.5 / dt))


class ZeroSignal(LambToaException, ValueError):
    def __init__(self, name="") -> None:
        super().__init__("信号 %s 的 RMS 为 0，无法按 SNR 加噪" % name)


class BandNotCovered(LambToaException, ValueError):
    def __init__(self, mode_name, band, coverage, channel="") -> None:
        self.mode_name = mode_name
        self.band = band
        self.coverage = coverage
        self.channel = channel
        super().__init__(
            "%s频散曲线 %s 未覆盖信号频带：[%.6g, %.6g] Hz（覆盖 [%.6g, %.6g] Hz）"
            % ("%s: " % channel if channel else "", mode_name, band[0], band[1], coverage[0], coverage[1])
        )


class CutoffOutOfRange(LambToaException, ValueError):
    def __init__(self, cutoff, nyquist) -> None:
        self.cutoff = cutoff
        super().__init__("截止频率 %.6g Hz 须在 (0, %.6g) Hz 内" % (cutoff, nyquist))


# endregion


class Waveform:
    """Uniformly sampled real signal; sample i sits at t0 + i * dt

    Samples are copied on construction and frozen.
    """

    dt: float
    t0: float
    name: str

    def __init__(self, samples, dt: float, t0: float = 0.0, name: str = "") -> None:
        samples = np.array(samples, dtype=float)
        if samples.ndim != 1 or samples.size < 2:
            raise InvalidWaveform("须为一维且至少 2 个采样点 (shape %s)" % (samples.shape,))
        if not (np.isfinite(dt) and dt > 0):
            raise InvalidWaveform("dt = %r 须为正数" % dt)
        samples.flags.writeable = False
        self.samples = samples
        self.dt = float(dt)
        self.t0 = float(t0)
        self.name = name

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def fs(self) -> float:
        return 1.0 / self.dt

    @property
    def t_end(self) -> float:
        return self.t0 + (self.n - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.n) * self.dt

    def time_at(self, index: int) -> float:
        return self.t0 + index * self.dt

    def index_of(self, t: float) -> int:
        """Nearest sample index, clamped to the record"""
        return int(np.clip(np.rint((t - self.t0) / self.dt), 0, self.n - 1))

    def crop(self, t_start: Optional[float] = None, t_end: Optional[float] = None) -> "Waveform":
        i0 = 0 if t_start is None else self.index_of(t_start)
        i1 = self.n - 1 if t_end is None else self.index_of(t_end)
        if i1 - i0 < 1:
            raise InvalidWaveform("裁剪窗口 [%s, %s] 内少于 2 个采样点" % (t_start, t_end))
        return Waveform(self.samples[i0 : i1 + 1], self.dt, self.time_at(i0), self.name)

    def with_samples(self, samples, name: Optional[str] = None) -> "Waveform":
        return Waveform(samples, self.dt, self.t0, self.name if name is None else name)

    def scaled(self, factor: float) -> "Waveform":
        return self.with_samples(self.samples * factor)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return "< %s : %d samples , dt : %.4g s , t0 : %.4g s >" % (
            self.name or "waveform",
            self.n,
            self.dt,
            self.t0,
        )


class SignalStats(NamedTuple):
    mean: float
    variance: float
    rms: float
    energy: float


def stats(w: Waveform) -> SignalStats:
    """Mean, 1/N variance, RMS and energy (sum of squares)"""
    s = w.samples
    energy = float(np.dot(s, s))
    return SignalStats(float(np.mean(s)), float(np.var(s)), float(np.sqrt(energy / s.size)), energy)


from lamb_toa.signal.generate import (
    DEFAULT_MODE_WEIGHTS,
    dispersive_spectrum,
    propagate_dispersive,
    synthesize_channels,
    tone_burst,
)
from lamb_toa.signal.noise import add_noise, channel_seed, noise_floor
from lamb_toa.signal.filters import lowpass
from lamb_toa.signal.layout import (
    REFERENCE_LAYOUT,
    Marker,
    SensorLayout,
    a0_arrival_window,
    distances,
    effective_distances,
    reference_markers,
)
from lamb_toa.signal.io import check_dt, read_waveforms_csv, write_waveforms_csv
