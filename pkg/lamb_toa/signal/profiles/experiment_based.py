# -*- coding: utf-8 -*-
"""Measured-looking impact: steep rise, slow relaxation and a lingering low-frequency ring"""
import numpy as np

from lamb_toa.common import InvalidParameter
from lamb_toa.signal import Waveform

__desc__ = "实验型冲击：陡升、指数衰减并叠加低频阻尼振荡"
__cfg_help__ = """
    rise_time (float) - 上升时间 s (默认 20e-6)
    relaxation (float) - 指数衰减时间常数 s (默认 40e-6)
    oscillation_frequency (float) - 振荡频率 Hz (默认 6e3)
    oscillation_amplitude (float) - 振荡幅值，相对峰值 (默认 0.3)
    oscillation_decay (float) - 振荡衰减时间常数 s (默认 1e-3)
    amplitude (float) - 峰值 (默认 1.0)
    delay (float) - 起始时刻 s (默认 0)"""
options = {
    "rise_time": 20e-6,
    "relaxation": 40e-6,
    "oscillation_frequency": 6e3,
    "oscillation_amplitude": 0.3,
    "oscillation_decay": 1e-3,
    "amplitude": 1.0,
    "delay": 0.0,
}


def update_config(opt):
    global options
    options = {**options, **opt}


def build(dt: float, n: int, t0: float = 0.0, **overrides) -> Waveform:
    opt = {**options, **overrides}
    for key in ("rise_time", "relaxation", "oscillation_decay"):
        if not float(opt[key]) > 0:
            raise InvalidParameter(key, opt[key], "(须为正数)")
    rise, tau = float(opt["rise_time"]), float(opt["relaxation"])
    t = t0 + np.arange(n) * dt - float(opt["delay"])
    after = np.clip(t, 0, None)
    pulse = np.where(
        after < rise,
        np.sin(0.5 * np.pi * after / rise) ** 2,
        np.exp(-(after - rise) / tau),
    )
    ring = (
        float(opt["oscillation_amplitude"])
        * np.sin(2 * np.pi * float(opt["oscillation_frequency"]) * after)
        * np.exp(-after / float(opt["oscillation_decay"]))
    )
    force = np.where(t >= 0, pulse + ring, 0.0)
    return Waveform(float(opt["amplitude"]) * force, dt, t0, "experiment_based")
