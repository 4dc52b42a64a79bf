# -*- coding: utf-8 -*-
"""Amplitude threshold crossing"""
from typing import List, Sequence

import numpy as np

from lamb_toa.common import InvalidParameter
from lamb_toa.estimators import Method, ToaEstimate, logger, pick_each
from lamb_toa.signal import Waveform

__desc__ = "时域阈值穿越 (TC)"
__cfg_help__ = """
    p (float) - 阈值系数，阈值 = p * 各通道最大幅值中的最小者 (默认 1e-2)
e.g. "methods": {"tc": {"p": 1e-3}}"""
options = {"p": 1e-2}


def update_config(opt):
    global options
    options = {**options, **opt}


def tc_pick(w: Waveform, threshold: float) -> ToaEstimate:
    """Earliest sample with |s| strictly above `threshold`"""
    if not threshold > 0:
        raise InvalidParameter("threshold", threshold, "(须为正数)")
    params = {"threshold": float(threshold)}
    above = np.flatnonzero(np.abs(w.samples) > threshold)
    if not above.size:
        return ToaEstimate.not_found(Method.TC, params, channel=w.name)
    i = int(above[0])
    return ToaEstimate(Method.TC, w.time_at(i), i, params, channel=w.name)


def common_threshold(channels: Sequence[Waveform], p: float) -> float:
    """p times the smallest per-channel peak magnitude"""
    if not p > 0:
        raise InvalidParameter("p", p, "(须为正数)")
    if not channels:
        raise InvalidParameter("channels", channels, "(不可为空)")
    return float(p * min(np.max(np.abs(w.samples)) for w in channels))


def pick_channels(channels: Sequence[Waveform]) -> List[ToaEstimate]:
    threshold = common_threshold(channels, float(options["p"]))
    if threshold == 0:
        logger.warning("所有通道中存在全零信号，阈值为 0")
        return [ToaEstimate.not_found(Method.TC, {"threshold": 0.0}, channel=w.name) for w in channels]
    logger.debug("TC 阈值 : %.6g" % threshold)
    return pick_each(channels, lambda w: [tc_pick(w, threshold)])


def check_options(opt: dict, fs: float):
    if not float(opt["p"]) > 0:
        raise InvalidParameter("p", opt["p"], "(须为正数)")
