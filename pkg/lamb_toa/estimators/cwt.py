# -*- coding: utf-8 -*-
"""Scalogram threshold crossing, per frequency"""
from typing import List, Sequence

from lamb_toa.common import InvalidParameter

__desc__ = "频域阈值穿越 (Morlet CWT 尺度图)"
__cfg_help__ = """
    f_lo, f_hi (float) - 频率范围 Hz (默认 50e3 ~ 100e3)
    spacing (float) - 频率间隔 Hz (默认 100)
    threshold (float) - 相对于各通道最大值中最小者的阈值 (默认 1e-2)
    omega_c (float) - Morlet 中心频率 (默认 5)
    support (float) - COI 支撑半宽 C (默认 3)
    normalization (l1,l2) - 小波归一化 (默认 l1)
    window ([t_start, t_end]) - 仅保留该时间窗内的尺度图行 (默认 全部)
    subsample (True,False) - 线性插值穿越时刻 (默认 False)"""
options = {
    "f_lo": 50e3,
    "f_hi": 100e3,
    "spacing": 100.0,
    "threshold": 1e-2,
    "omega_c": 5.0,
    "support": 3.0,
    "normalization": "l1",
    "window": None,
    "subsample": False,
}


def update_config(opt):
    global options
    options = {**options, **opt}


def scalograms(channels) -> list:
    from lamb_toa.tfa import cwt, frequency_grid

    freqs = frequency_grid(float(options["f_lo"]), float(options["f_hi"]), float(options["spacing"]))
    window = options.get("window")
    return [
        cwt(
            w,
            freqs,
            float(options["omega_c"]),
            float(options["support"]),
            options["normalization"],
            None if window is None else (float(window[0]), float(window[1])),
        )
        for w in channels
    ]


def pick_scalograms(scs: Sequence) -> List:
    """One {frequency: ToaEstimate} per scalogram, with the configured threshold"""
    from lamb_toa.tfa import cwt_tc_pick

    return cwt_tc_pick(scs, float(options["threshold"]), subsample=bool(options["subsample"]))


def pick_channels(channels: Sequence) -> List:
    picks = pick_scalograms(scalograms(channels))
    return [estimate for per_channel in picks for estimate in per_channel.values()]


def check_options(opt: dict, fs: float):
    from lamb_toa.tfa import FrequencyOutOfRange, frequency_grid
    from lamb_toa.tfa.cwt import NORMALIZATIONS

    freqs = frequency_grid(float(opt["f_lo"]), float(opt["f_hi"]), float(opt["spacing"]))
    if freqs[-1] >= 0.5 * fs:
        raise FrequencyOutOfRange(freqs[[0, -1]], 0.5 * fs)
    if not float(opt["threshold"]) > 0:
        raise InvalidParameter("threshold", opt["threshold"], "(须为正数)")
    if opt["normalization"] not in NORMALIZATIONS:
        raise InvalidParameter("normalization", opt["normalization"], "(可选：%s)" % ", ".join(NORMALIZATIONS))
    window = opt.get("window")
    if window is not None and (len(window) != 2 or float(window[1]) <= float(window[0])):
        raise InvalidParameter("window", window, "(须为 [t_start, t_end] 且 t_end > t_start)")
