# -*- coding: utf-8 -*-
"""Quantities derived from picks: group speeds, relative times, histograms"""
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from lamb_toa.common import InvalidParameter
from lamb_toa.dispersion import PlateMaterial, bulk_speeds
from lamb_toa.estimators import ToaEstimate
from lamb_toa.estimators.tc import common_threshold, tc_pick
from lamb_toa.harness import MissingReference, NonpositiveEstimate, SweepResult, logger
from lamb_toa.signal import SensorLayout, Waveform, distances

REFERENCE_P = 1e-2


def _time_of(estimate: Union[ToaEstimate, float, None]) -> Optional[float]:
    if isinstance(estimate, ToaEstimate):
        return estimate.time
    return None if estimate is None else float(estimate)


def estimate_group_speed(
    layout: SensorLayout, impact_index, estimates: Sequence[Union[ToaEstimate, float, None]]
) -> np.ndarray:
    """Centre distance over estimated arrival time, per sensor (m/s)

    NotFound picks give NaN. A sensor sitting on the impact gives 0.
    """
    r = distances(layout, impact_index)
    if len(estimates) != r.size:
        raise InvalidParameter("estimates", len(estimates), "(须与传感器数 %d 一致)" % r.size)
    speeds = np.full(r.size, np.nan)
    for i, (name, distance, estimate) in enumerate(zip(layout.sensor_names, r, estimates)):
        t = _time_of(estimate)
        if distance == 0:
            logger.warning("%s 距冲击点为 0，群速度记为 0" % name)
            speeds[i] = 0.0
        elif t is None:
            logger.warning("%s 无到达时间估计" % name)
        elif not t > 0:
            raise NonpositiveEstimate(name, t)
        else:
            speeds[i] = distance / t
    return speeds


def speed_violations(speeds: Sequence[float], material: PlateMaterial) -> List[int]:
    """Indices of speeds at or above the material's pressure wave speed"""
    c_p, _ = bulk_speeds(material)
    bad = [i for i, c in enumerate(speeds) if np.isfinite(c) and c >= c_p]
    for i in bad:
        logger.warning("群速度估计 #%d = %.1f m/s 超过纵波波速 %.1f m/s" % (i, speeds[i], c_p))
    return bad


def default_reference_channel(channels: Sequence[Waveform], p: float = REFERENCE_P) -> str:
    """Channel with the earliest common-threshold TC pick; the first one on ties"""
    threshold = common_threshold(channels, p)
    best, best_time = channels[0].name, np.inf
    if threshold == 0:
        return best
    for w in channels:
        e = tc_pick(w, threshold)
        if e.found and e.time < best_time:
            best, best_time = w.name, e.time
    return best


def relative_times(
    estimates: Mapping[str, Mapping[float, ToaEstimate]], reference: str
) -> pd.DataFrame:
    """t_channel - t_reference per frequency (rows) and channel (columns)

    Cells where either pick is NotFound are NaN.
    """
    if reference not in estimates:
        raise MissingReference(reference, estimates.keys())
    freqs = sorted(estimates[reference])
    for name, picks in estimates.items():
        if sorted(picks) != freqs:
            raise InvalidParameter("estimates", name, "(频率网格须与参考通道一致)")
    ref = {f: estimates[reference][f].time for f in freqs}
    table = {
        name: [
            np.nan if picks[f].time is None or ref[f] is None else picks[f].time - ref[f]
            for f in freqs
        ]
        for name, picks in estimates.items()
    }
    return pd.DataFrame(table, index=pd.Index(freqs, name="frequency_hz"), dtype=float)


def sla_histogram(result: SweepResult, bin_width: float = 0.2e-6) -> pd.DataFrame:
    """How many grid estimates land in each time bin, one column per channel"""
    if not bin_width > 0:
        raise InvalidParameter("bin_width", bin_width, "(须为正数)")
    times = result.times()
    found = times[np.isfinite(times)]
    if not found.size:
        return pd.DataFrame(columns=["time_s"] + result.channels)
    first = np.floor(found.min() / bin_width)
    last = np.floor(found.max() / bin_width)
    edges = (np.arange(first, last + 2)) * bin_width
    columns: Dict[str, np.ndarray] = {"time_s": edges[:-1]}
    for j, name in enumerate(result.channels):
        column = times[:, j]
        columns[name] = np.histogram(column[np.isfinite(column)], bins=edges)[0]
    return pd.DataFrame(columns)
