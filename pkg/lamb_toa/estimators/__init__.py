# -*- coding: utf-8 -*-
"""Time-of-arrival pickers

Each picker module exposes the plain functions plus a `pick_channels`
adapter configured through its module-level `options`.
"""
import logging
from enum import Enum
from typing import Any, Dict, List, Optional

from lamb_toa.common import LambToaException

logger = logging.getLogger("Estimators")


class Method(Enum):
    TC = "TC"
    SLA = "SLA"
    MER = "MER"
    AIC_GM = "AIC_GM"
    AIC_LM = "AIC_LM"
    CWT_TC = "CWT_TC"


# region Exceptions
class WindowTooLong(LambToaException, ValueError):
    def __init__(self, what, length, count) -> None:
        self.length = length
        self.count = count
        super().__init__("%s 窗口长度 %s 超出信号长度 %s" % (what, length, count))


class DegenerateWindow(LambToaException, ValueError):
    def __init__(self, start, stop, desc="") -> None:
        self.start = start
        self.stop = stop
        super().__init__("AIC 窗口 [%s, %s] 少于 3 个采样点 %s" % (start, stop, desc))


# endregion


class ToaEstimate:
    """One arrival-time pick; `time` is None when nothing was found"""

    method: Method
    time: Optional[float] = None
    index: Optional[int] = None
    params: Dict[str, Any]
    frequency: Optional[float] = None
    in_coi: bool = False
    channel: str = ""

    def __init__(
        self,
        method: Method,
        time: Optional[float] = None,
        index: Optional[int] = None,
        params: Optional[Dict[str, Any]] = None,
        frequency: Optional[float] = None,
        in_coi: bool = False,
        channel: str = "",
    ) -> None:
        self.method = method
        self.time = None if time is None else float(time)
        self.index = None if index is None else int(index)
        self.params = dict(params or {})
        self.frequency = None if frequency is None else float(frequency)
        self.in_coi = bool(in_coi)
        self.channel = channel

    @staticmethod
    def not_found(method: Method, params=None, frequency=None, channel="") -> "ToaEstimate":
        return ToaEstimate(method, None, None, params, frequency, channel=channel)

    @property
    def found(self) -> bool:
        return self.time is not None

    def to_dict(self) -> dict:
        return {
            "channel": self.channel,
            "method": self.method.value,
            "time_s": self.time,
            "index": self.index,
            "frequency_hz": self.frequency,
            "in_coi": self.in_coi,
            "found": self.found,
            **{"param_%s" % k: v for k, v in sorted(self.params.items())},
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, ToaEstimate):
            return NotImplemented
        return (self.method, self.time, self.index, self.frequency, self.in_coi) == (
            other.method,
            other.time,
            other.index,
            other.frequency,
            other.in_coi,
        )

    def __repr__(self) -> str:
        where = "NotFound" if not self.found else "%.4f us" % (self.time * 1e6)
        freq = "" if self.frequency is None else " @ %.6g Hz" % self.frequency
        return "< %s %s : %s%s%s >" % (
            self.method.value,
            self.channel,
            where,
            freq,
            " (COI)" if self.in_coi else "",
        )


def pick_each(channels, pick) -> List[ToaEstimate]:
    """Runs `pick(w) -> [ToaEstimate]` per channel; a failing channel is logged and left out"""
    results = []
    for w in channels:
        try:
            estimates = pick(w)
        except LambToaException as e:
            logger.error("%s : %s" % (w.name, e))
            continue
        for estimate in estimates:
            estimate.channel = w.name
            results.append(estimate)
    return results


def enumerate_estimators():
    """name -> estimator module, for every `estimator_` member of this package"""
    return {
        name[len("estimator_") :]: module
        for name, module in globals().items()
        if name.startswith("estimator_")
    }


from lamb_toa.estimators import tc as estimator_tc
from lamb_toa.estimators import sla as estimator_sla
from lamb_toa.estimators import mer as estimator_mer
from lamb_toa.estimators import aic as estimator_aic
from lamb_toa.estimators import cwt as estimator_cwt
from lamb_toa.estimators.tc import common_threshold, tc_pick
from lamb_toa.estimators.sla import SlaParams, sla_pick, sla_ratio, window_lengths
from lamb_toa.estimators.mer import energy_ratio, mer_pick
from lamb_toa.estimators.aic import AicParams, AicVariant, aic_curve, aic_pick, allen_cf
