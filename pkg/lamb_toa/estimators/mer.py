# -*- coding: utf-8 -*-
"""Modified energy ratio picker"""
from typing import List, Sequence, Tuple

import numpy as np

from lamb_toa.common import InvalidParameter, round_half_up
from lamb_toa.estimators import Method, ToaEstimate, WindowTooLong, pick_each
from lamb_toa.signal import Waveform

__desc__ = "修正能量比 (MER)"
__cfg_help__ = """
    alpha (float) - 窗长系数，n_e = alpha * fs * t_dom (默认 40)
    t_dom (float) - 主周期 s (默认 10e-6)"""
options = {"alpha": 40.0, "t_dom": 10e-6}


def update_config(opt):
    global options
    options = {**options, **opt}


def window_length(alpha: float, fs: float, t_dom: float) -> int:
    if not (alpha > 0 and fs > 0 and t_dom > 0):
        raise InvalidParameter("alpha, fs, t_dom", (alpha, fs, t_dom), "(须为正数)")
    return max(1, round_half_up(alpha * fs * t_dom))


def energy_ratio(w: Waveform, n_e: int) -> np.ndarray:
    """Energy of s[i .. i+n_e] over energy of s[i-n_e .. i]

    Out-of-record samples take the mean of the two samples at that edge.
    The ratio is 0 where the preceding energy vanishes.
    """
    if n_e < 1:
        raise InvalidParameter("n_e", n_e, "(须 >= 1)")
    if n_e >= w.n:
        raise WindowTooLong("MER", n_e, w.n)
    s = w.samples
    left, right = 0.5 * (s[0] + s[1]), 0.5 * (s[-2] + s[-1])
    padded = np.concatenate([np.full(n_e, left), s, np.full(n_e, right)])
    reference = left * left
    cumulative = np.concatenate([[0.0], np.cumsum(padded * padded - reference)])
    n = w.n
    i = np.arange(n)
    base = (n_e + 1) * reference
    leading = np.maximum(base + cumulative[i + 2 * n_e + 1] - cumulative[i + n_e], 0.0)
    trailing = np.maximum(base + cumulative[i + n_e + 1] - cumulative[i], 0.0)
    ratio = np.zeros(n)
    np.divide(leading, trailing, out=ratio, where=trailing > 0)
    return ratio


def mer_pick(w: Waveform, n_e: int) -> Tuple[ToaEstimate, np.ndarray]:
    """argmax of (|s| * ER)^3, earliest on ties

    Returns:
        (ToaEstimate, MER trace)
    """
    trace = (np.abs(w.samples) * energy_ratio(w, n_e)) ** 3
    i = int(np.argmax(trace))
    return ToaEstimate(Method.MER, w.time_at(i), i, {"n_e": int(n_e)}, channel=w.name), trace


def pick_channels(channels: Sequence[Waveform]) -> List[ToaEstimate]:
    def pick(w):
        n_e = window_length(float(options["alpha"]), w.fs, float(options["t_dom"]))
        estimate, _ = mer_pick(w, n_e)
        estimate.params["alpha"] = float(options["alpha"])
        return [estimate]

    return pick_each(channels, pick)


def check_options(opt: dict, fs: float):
    window_length(float(opt["alpha"]), fs, float(opt["t_dom"]))
