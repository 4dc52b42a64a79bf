# -*- coding: utf-8 -*-
"""Short-term / long-term average ratio picker"""
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from lamb_toa.common import InvalidParameter, round_half_up
from lamb_toa.estimators import Method, ToaEstimate, WindowTooLong, pick_each
from lamb_toa.signal import Waveform

__desc__ = "短时/长时平均比 (SLA, STA/LTA)"
__cfg_help__ = """
    alpha (float) - 短窗系数，n_s = alpha * fs * t_dom (默认 10)
    beta (float) - 长窗系数，n_l = beta * n_s (默认 10)
    t_dom (float) - 主周期 s (默认 10e-6)"""
options = {"alpha": 10.0, "beta": 10.0, "t_dom": 10e-6}

DEFAULT_T_DOM = 10e-6


def update_config(opt):
    global options
    options = {**options, **opt}


class SlaParams(NamedTuple):
    alpha: float
    beta: float
    t_dom: float = DEFAULT_T_DOM
    fs: float = 5e6


def window_lengths(params: SlaParams) -> Tuple[int, int]:
    """(n_s, n_l) in samples, rounded half up"""
    if not (params.alpha >= 1 and params.beta >= 1):
        raise InvalidParameter("alpha, beta", (params.alpha, params.beta), "(须 >= 1)")
    if not (params.t_dom > 0 and params.fs > 0):
        raise InvalidParameter("t_dom, fs", (params.t_dom, params.fs), "(须为正数)")
    n_s = max(1, round_half_up(params.alpha * params.fs * params.t_dom))
    return n_s, round_half_up(params.beta * n_s)


def _trailing_means(w: Waveform, lengths: Sequence[int]) -> List[np.ndarray]:
    """Means of s^2 over the n samples ending at each index, left padded

    Energies are taken relative to the padding value's energy before the
    cumulative sum, so a constant record gives exactly constant means.
    """
    s = w.samples
    pad_energy = (0.5 * (s[0] + s[1])) ** 2
    centered = s * s - pad_energy
    means = []
    for n in lengths:
        cumulative = np.concatenate([[0.0], np.cumsum(np.concatenate([np.zeros(n - 1), centered]))])
        means.append(np.maximum(pad_energy + (cumulative[n:] - cumulative[:-n]) / n, 0.0))
    return means


def sla_ratio(w: Waveform, n_s: int, n_l: int) -> np.ndarray:
    """STA / LTA per sample; 0 where the LTA vanishes"""
    if not 1 <= n_s <= n_l:
        raise InvalidParameter("n_s, n_l", (n_s, n_l), "(须满足 1 <= n_s <= n_l)")
    if n_l >= w.n:
        raise WindowTooLong("LTA", n_l, w.n)
    sta, lta = _trailing_means(w, (n_s, n_l))
    ratio = np.zeros(w.n)
    np.divide(sta, lta, out=ratio, where=lta > 0)
    return ratio


def sla_pick(w: Waveform, params: SlaParams) -> Tuple[ToaEstimate, np.ndarray]:
    """Sample of steepest rise of the STA/LTA ratio (forward difference, earliest on ties)

    Returns:
        (ToaEstimate, ratio trace)
    """
    n_s, n_l = window_lengths(params)
    ratio = sla_ratio(w, n_s, n_l)
    i = int(np.argmax(np.diff(ratio)))
    estimate = ToaEstimate(
        Method.SLA,
        w.time_at(i),
        i,
        {"alpha": params.alpha, "beta": params.beta, "n_s": n_s, "n_l": n_l},
        channel=w.name,
    )
    return estimate, ratio


def pick_channels(channels: Sequence[Waveform]) -> List[ToaEstimate]:
    def pick(w):
        params = SlaParams(float(options["alpha"]), float(options["beta"]), float(options["t_dom"]), w.fs)
        return [sla_pick(w, params)[0]]

    return pick_each(channels, pick)


def check_options(opt: dict, fs: float):
    window_lengths(SlaParams(float(opt["alpha"]), float(opt["beta"]), float(opt["t_dom"]), fs))
