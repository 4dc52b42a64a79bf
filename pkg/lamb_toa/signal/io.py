# -*- coding: utf-8 -*-
"""Multichannel waveform CSV: `time_s,<channel>,...`"""
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from lamb_toa.common import check_file
from lamb_toa.signal import InvalidWaveform, Waveform, logger

TIME_COLUMN = "time_s"
DT_RTOL = 1e-6


def check_dt(channels: Sequence[Waveform], expected_dt: Optional[float] = None) -> float:
    """Shared dt of all channels; raises `InvalidWaveform` on a mismatch"""
    if not channels:
        raise InvalidWaveform("通道列表为空")
    dt = channels[0].dt if expected_dt is None else expected_dt
    for w in channels:
        if not np.isclose(w.dt, dt, rtol=DT_RTOL, atol=0):
            raise InvalidWaveform("%s 的 dt = %.6g s 与期望的 %.6g s 不符" % (w.name, w.dt, dt))
    return dt


def waveforms_to_frame(channels: Sequence[Waveform]) -> pd.DataFrame:
    check_dt(channels)
    if len({w.n for w in channels}) != 1 or len({w.t0 for w in channels}) != 1:
        raise InvalidWaveform("各通道的长度与起始时间须一致")
    frame = pd.DataFrame({TIME_COLUMN: channels[0].times})
    for i, w in enumerate(channels):
        frame[w.name or "ch%d" % (i + 1)] = w.samples
    return frame


def write_waveforms_csv(channels: Sequence[Waveform], path: str) -> str:
    waveforms_to_frame(channels).to_csv(path, index=False, float_format="%.17g")
    logger.debug("写入 %d 个通道 -> %s" % (len(channels), path))
    return path


def read_waveforms_csv(path: str, expected_dt: Optional[float] = None) -> List[Waveform]:
    """Reads a waveform CSV; dt is taken from the time column, which must be uniform"""
    frame = pd.read_csv(check_file(path), float_precision="round_trip")
    if TIME_COLUMN not in frame.columns or len(frame.columns) < 2:
        raise InvalidWaveform("%s 须包含 %s 列及至少一个通道" % (path, TIME_COLUMN))
    times = frame[TIME_COLUMN].to_numpy(dtype=float)
    if times.size < 2:
        raise InvalidWaveform("%s 少于 2 个采样点" % path)
    steps = np.diff(times)
    dt = (times[-1] - times[0]) / (times.size - 1)
    if not np.allclose(steps, dt, rtol=DT_RTOL, atol=0):
        raise InvalidWaveform("%s 的时间列不等间隔" % path)
    channels = [
        Waveform(frame[column].to_numpy(dtype=float), dt, times[0], str(column))
        for column in frame.columns
        if column != TIME_COLUMN
    ]
    if expected_dt is not None:
        check_dt(channels, expected_dt)
    return channels
