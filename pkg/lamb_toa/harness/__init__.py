# -*- coding: utf-8 -*-
"""Parametric studies over the pickers and the quantities derived from them"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from lamb_toa.common import InvalidParameter, LambToaException, worker_count
from lamb_toa.estimators import ToaEstimate

logger = logging.getLogger("Harness")


# region Exceptions
class NonpositiveEstimate(LambToaException, ValueError):
    def __init__(self, channel, time) -> None:
        self.channel = channel
        self.time = time
        super().__init__("%s 的到达时间估计 %r 须为正数" % (channel, time))


class MissingReference(LambToaException, KeyError):
    def __init__(self, reference, channels) -> None:
        self.reference = reference
        super().__init__("参考通道 %s 不在 %s 中" % (reference, list(channels)))


# endregion


def run_points(func: Callable[[Any], Any], points: Sequence[Any], progress=None) -> List[Any]:
    """func(point) for every point on a thread pool, results in point order

    Args:
        progress: optional callable(current, total), called as points finish
    """
    points = list(points)
    if not points:
        return []
    results = [None] * len(points)
    with ThreadPoolExecutor(max_workers=min(worker_count(), len(points))) as executor:
        futures = {executor.submit(func, point): index for index, point in enumerate(points)}
        done = 0
        for future, index in futures.items():
            results[index] = future.result()
            done += 1
            if progress:
                progress(done, len(points))
    return results


class SweepResult:
    """Estimates of one sweep: one row per axis value, one column per channel

    `axis` names the swept parameter(s); each entry of `values` is a tuple
    with one element per name.
    """

    def __init__(
        self,
        axis: Sequence[str],
        values: Sequence[Sequence[Any]],
        channels: Sequence[str],
        estimates: Sequence[Sequence[ToaEstimate]],
        aggregates: Optional[pd.DataFrame] = None,
        diagnostics: Optional[Dict[str, Any]] = None,
    ) -> None:
        self.axis = list(axis)
        self.values = [tuple(v) for v in values]
        self.channels = list(channels)
        self.estimates = [list(row) for row in estimates]
        if len(self.estimates) != len(self.values) or any(len(row) != len(self.channels) for row in self.estimates):
            raise InvalidParameter(
                "estimates",
                [len(r) for r in self.estimates],
                "(须为 %d 个取值 x %d 个通道)" % (len(self.values), len(self.channels)),
            )
        self.aggregates = aggregates
        self.diagnostics = dict(diagnostics or {})

    @property
    def count(self) -> int:
        return len(self.values) * len(self.channels)

    def times(self) -> np.ndarray:
        """(values x channels) matrix of times in seconds, NaN where not found"""
        return np.array(
            [[e.time if e.found else np.nan for e in row] for row in self.estimates],
            dtype=float,
        ).reshape(len(self.values), len(self.channels))

    def column(self, channel: str) -> List[ToaEstimate]:
        j = self.channels.index(channel)
        return [row[j] for row in self.estimates]

    def to_frame(self) -> pd.DataFrame:
        """Long format: axis columns, channel, time_s, found, in_coi, frequency_hz"""
        rows = []
        for value, row in zip(self.values, self.estimates):
            for channel, e in zip(self.channels, row):
                rows.append(
                    {
                        **dict(zip(self.axis, value)),
                        "channel": channel,
                        "method": e.method.value,
                        "time_s": e.time,
                        "found": e.found,
                        "in_coi": e.in_coi,
                        "frequency_hz": e.frequency,
                    }
                )
        return pd.DataFrame(rows, columns=self.axis + ["channel", "method", "time_s", "found", "in_coi", "frequency_hz"])

    def summary(self) -> dict:
        found = int(sum(e.found for row in self.estimates for e in row))
        return {
            "axis": self.axis,
            "points": len(self.values),
            "channels": self.channels,
            "estimates": self.count,
            "found": found,
            "aggregates": [] if self.aggregates is None else self.aggregates.to_dict(orient="records"),
            "diagnostics": self.diagnostics,
        }

    def __repr__(self) -> str:
        return "< sweep %s : %d points x %d channels >" % (",".join(self.axis), len(self.values), len(self.channels))


from lamb_toa.harness.sweeps import (
    aic_window_sweep,
    cutoff_sweep,
    mer_sweep,
    sla_grid,
    tc_sweep,
)
from lamb_toa.harness.derived import (
    default_reference_channel,
    estimate_group_speed,
    relative_times,
    sla_histogram,
    speed_violations,
)
