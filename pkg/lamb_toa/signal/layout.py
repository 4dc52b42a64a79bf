# -*- coding: utf-8 -*-
"""Sensor/impact geometry and the earliest-arrival markers derived from it"""
import math
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from lamb_toa.common import IndexOutOfRange, InvalidParameter
from lamb_toa.signal import logger


class SensorLayout:
    """Sensor and impact centres on a plate, with the square patch width

    Positions are (x, y) in metres. When `plate_size` is given, every
    position must lie inside [0, width] x [0, height].
    """

    def __init__(
        self,
        sensor_positions: Sequence[Tuple[float, float]],
        impact_positions: Sequence[Tuple[float, float]],
        patch_width: float = 0.0,
        plate_size: Optional[Tuple[float, float]] = None,
        sensor_names: Optional[Sequence[str]] = None,
        impact_names: Optional[Sequence[str]] = None,
    ) -> None:
        sensors = np.array(sensor_positions, dtype=float).reshape(-1, 2)
        impacts = np.array(impact_positions, dtype=float).reshape(-1, 2)
        if not len(sensors) or not len(impacts):
            raise InvalidParameter("positions", (len(sensors), len(impacts)), "(传感器与冲击点均不可为空)")
        if not patch_width >= 0:
            raise InvalidParameter("patch_width", patch_width, "(不可为负)")
        if plate_size is not None:
            width, height = plate_size
            for kind, points in (("sensor_positions", sensors), ("impact_positions", impacts)):
                outside = (points[:, 0] < 0) | (points[:, 0] > width) | (points[:, 1] < 0) | (points[:, 1] > height)
                if np.any(outside):
                    raise InvalidParameter(kind, points[outside].tolist(), "(超出板面 %s x %s m)" % (width, height))
        sensors.flags.writeable = False
        impacts.flags.writeable = False
        self.sensors = sensors
        self.impacts = impacts
        self.patch_width = float(patch_width)
        self.plate_size = tuple(plate_size) if plate_size is not None else None
        self.sensor_names = list(sensor_names or ["S%d" % (i + 1) for i in range(len(sensors))])
        self.impact_names = list(impact_names or ["I%d" % (i + 1) for i in range(len(impacts))])
        if len(self.sensor_names) != len(sensors) or len(self.impact_names) != len(impacts):
            raise InvalidParameter("names", (self.sensor_names, self.impact_names), "(名称数量与位置数量不符)")

    @property
    def sensor_count(self) -> int:
        return len(self.sensors)

    def impact_index(self, name_or_index) -> int:
        if isinstance(name_or_index, str):
            if name_or_index not in self.impact_names:
                raise IndexOutOfRange("impact", name_or_index, len(self.impacts))
            return self.impact_names.index(name_or_index)
        index = int(name_or_index)
        if not 0 <= index < len(self.impacts):
            raise IndexOutOfRange("impact", index, len(self.impacts))
        return index

    def to_dict(self) -> dict:
        return {
            "sensor_positions": self.sensors.tolist(),
            "impact_positions": self.impacts.tolist(),
            "patch_width": self.patch_width,
            "plate_size": list(self.plate_size) if self.plate_size else None,
            "sensor_names": self.sensor_names,
            "impact_names": self.impact_names,
        }

    def __repr__(self) -> str:
        return "< layout : %d sensors , %d impacts , patch %.4g m >" % (
            len(self.sensors),
            len(self.impacts),
            self.patch_width,
        )


REFERENCE_LAYOUT = SensorLayout(
    [(0.125, 0.125), (0.775, 0.125), (0.125, 0.875), (0.775, 0.875)],
    [(0.563, 0.403), (0.203, 0.203)],
    patch_width=0.030,
    plate_size=(0.9, 1.0),
)
"""Four corner sensors and two impacts on a 0.9 x 1.0 m plate, 30 mm patches"""


def distances(layout: SensorLayout, impact_index) -> np.ndarray:
    """Centre-to-centre sensor distances from one impact (m), in sensor order"""
    impact = layout.impacts[layout.impact_index(impact_index)]
    result = np.hypot(*(layout.sensors - impact).T)
    for name, r in zip(layout.sensor_names, result):
        if r == 0:
            logger.warning("%s 与冲击点重合 (r = 0)" % name)
    return result


def effective_distances(layout: SensorLayout, impact_index) -> np.ndarray:
    """Distances to the nearest patch corner: r - (w / 2) sqrt(2), clamped at 0"""
    return np.maximum(distances(layout, impact_index) - layout.patch_width / 2 * math.sqrt(2), 0.0)


class Marker(NamedTuple):
    sensor: str
    t_s0: float
    t_a0: float


def reference_markers(layout: SensorLayout, impact_index, c_s0_max: float, c_a0_max: float) -> List[Marker]:
    """Earliest possible S0 and A0 arrivals per sensor"""
    if not (c_s0_max > 0 and c_a0_max > 0):
        raise InvalidParameter("c_s0_max, c_a0_max", (c_s0_max, c_a0_max), "(须为正数)")
    return [
        Marker(name, float(r / c_s0_max), float(r / c_a0_max))
        for name, r in zip(layout.sensor_names, effective_distances(layout, impact_index))
    ]


def a0_arrival_window(
    layout: SensorLayout, impact_index, curve_a0, band: Tuple[float, float] = (10e3, 20e3)
) -> List[Tuple[float, float]]:
    """(earliest, latest) A0 arrival per sensor for content inside `band` (Hz)"""
    f_lo, f_hi = band
    if not 0 < f_lo < f_hi:
        raise InvalidParameter("band", band, "(须满足 0 < f_lo < f_hi)")
    omega = 2 * np.pi * np.linspace(f_lo, f_hi, 64)
    speeds = curve_a0.group_speed_of_omega(omega)
    if np.any(~np.isfinite(speeds)):
        lo, hi = curve_a0.frequency[0], curve_a0.frequency[-1]
        raise InvalidParameter("band", band, "(超出 %s 曲线覆盖范围 [%.6g, %.6g] Hz)" % (curve_a0.name, lo, hi))
    c_fast, c_slow = float(speeds.max()), float(speeds.min())
    return [(float(r / c_fast), float(r / c_slow)) for r in effective_distances(layout, impact_index)]
