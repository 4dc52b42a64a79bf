# -*- coding: utf-8 -*-
"""Windowed tone burst excitation"""
import numpy as np

from lamb_toa.signal import Waveform

__desc__ = "窗函数调制的正弦猝发信号"
__cfg_help__ = """
    frequency (float) - 载波频率 Hz (默认 100e3)
    cycles (float) - 周期数 (默认 5)
    window (hanning,gaussian,blackman) - 窗函数 (默认 hanning)
    delay (float) - 猝发起始时刻 s (默认 0)"""
options = {"frequency": 100e3, "cycles": 5, "window": "hanning", "delay": 0.0}


def update_config(opt):
    global options
    options = {**options, **opt}


def build(dt: float, n: int, t0: float = 0.0, **overrides) -> Waveform:
    from lamb_toa.signal.generate import tone_burst

    opt = {**options, **overrides}
    burst = tone_burst(float(opt["frequency"]), float(opt["cycles"]), opt["window"], dt).samples
    start = int(np.rint(float(opt["delay"]) / dt))
    samples = np.zeros(n)
    stop = min(n, start + burst.size)
    if 0 <= start < n:
        samples[start:stop] = burst[: stop - start]
    return Waveform(samples, dt, t0, "tone_burst")
