# -*- coding: utf-8 -*-
"""Smooth short contact pulse"""
import numpy as np

from lamb_toa.common import InvalidParameter
from lamb_toa.signal import Waveform

__desc__ = "理想化冲击：升余弦力脉冲"
__cfg_help__ = """
    contact_time (float) - 接触时间 s (默认 10e-6)
    amplitude (float) - 峰值 (默认 1.0)
    delay (float) - 脉冲起始时刻 s (默认 0)
e.g. "profile": "idealized", "profile_params": {"contact_time": 10e-6}"""
options = {"contact_time": 10e-6, "amplitude": 1.0, "delay": 0.0}


def update_config(opt):
    global options
    options = {**options, **opt}


def build(dt: float, n: int, t0: float = 0.0, **overrides) -> Waveform:
    """A sin^2 pulse of width `contact_time`, zero elsewhere"""
    opt = {**options, **overrides}
    contact = float(opt["contact_time"])
    if not contact > 0:
        raise InvalidParameter("contact_time", contact, "(须为正数)")
    t = t0 + np.arange(n) * dt - float(opt["delay"])
    inside = (t >= 0) & (t <= contact)
    force = np.where(inside, np.sin(np.pi * np.clip(t, 0, contact) / contact) ** 2, 0.0)
    return Waveform(float(opt["amplitude"]) * force, dt, t0, "idealized")
