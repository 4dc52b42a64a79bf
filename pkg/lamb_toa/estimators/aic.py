# -*- coding: utf-8 -*-
"""Two-step AIC picker (Maeda's variance-split criterion, Allen characteristic function)

Step 1 evaluates the criterion on [t_first_lb, t_max + t_am], t_max being the
peak of Allen's function, and takes its global (GM) or first local (LM)
minimum as t_fe. Step 2 re-evaluates on [t_fe - t_fb, t_fe + t_fa] and keeps
the global minimum. Every window is cropped out of the record before the
criterion is computed.
"""
from enum import Enum
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from lamb_toa.common import EmptyRange, InvalidParameter
from lamb_toa.estimators import DegenerateWindow, Method, ToaEstimate, pick_each
from lamb_toa.signal import Waveform

__desc__ = "两步 AIC (全局最小 GM / 首个局部最小 LM)"
__cfg_help__ = """
    variant (GM,LM) - 第一步取全局最小或首个局部最小 (默认 GM)
    r_a (float) - Allen 特征函数系数 (默认 1)
    t_am (float) - 第一窗口上界在 t_max 之后的延伸 s (默认 20e-6)
    t_first_lb (float) - 第一窗口下界 s (默认 0)
    t_first_ub (float) - 第一窗口上界 s，指定时覆盖 t_max + t_am (默认 无)
    t_fb (float) - 第二窗口在 t_fe 之前的长度 s (默认 40e-6)
    t_fa (float) - 第二窗口在 t_fe 之后的长度 s (默认 40e-6)"""
options = {
    "variant": "GM",
    "r_a": 1.0,
    "t_am": 20e-6,
    "t_first_lb": 0.0,
    "t_first_ub": None,
    "t_fb": 40e-6,
    "t_fa": 40e-6,
}

VARIANCE_FLOOR = 1e-30


def update_config(opt):
    global options
    options = {**options, **opt}


class AicVariant(Enum):
    GM = "GM"
    LM = "LM"

    @property
    def method(self) -> Method:
        return Method.AIC_GM if self is AicVariant.GM else Method.AIC_LM


class AicParams(NamedTuple):
    r_a: float = 1.0
    t_am: float = 20e-6
    t_first_lb: float = 0.0
    t_fb: float = 40e-6
    t_fa: float = 40e-6

    def validate(self) -> "AicParams":
        for name, value in self._asdict().items():
            if not value >= 0:
                raise InvalidParameter(name, value, "(不可为负)")
        return self


def allen_cf(w: Waveform, r_a: float = 1.0) -> np.ndarray:
    """|s[i]| + r_a |s[i] - s[i-1]|, the difference taken as 0 at i = 0"""
    s = w.samples
    return np.abs(s) + r_a * np.abs(np.diff(s, prepend=s[0]))


def aic_curve(w: Waveform, i_range: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """i ln var(s[0..i]) + (N - i - 1) ln var(s[i+1..N-1]) for i in `i_range` (inclusive)

    Variances are 1/n, clamped below at 1e-30 before the logarithm. Each
    side is shifted by its own edge sample so a quiet stretch keeps its
    variance next to a loud one.
    """
    n = w.n
    first, last = (1, n - 2) if i_range is None else (int(i_range[0]), int(i_range[1]))
    if not 1 <= first <= last <= n - 2:
        raise EmptyRange("AIC 索引区间 [%s, %s] 须在 [1, %s] 内" % (first, last, n - 2))
    left, right = w.samples - w.samples[0], w.samples - w.samples[-1]
    i = np.arange(first, last + 1)
    left_sum, left_sq = np.cumsum(left)[i], np.cumsum(left * left)[i]
    right_sum = np.cumsum(right[::-1])[::-1][i + 1]
    right_sq = np.cumsum((right * right)[::-1])[::-1][i + 1]
    left_n, right_n = i + 1, n - i - 1
    left_var = np.maximum(left_sq / left_n - (left_sum / left_n) ** 2, VARIANCE_FLOOR)
    right_var = np.maximum(right_sq / right_n - (right_sum / right_n) ** 2, VARIANCE_FLOOR)
    return i * np.log(left_var) + (n - i - 1) * np.log(right_var)


def first_local_minimum(curve: np.ndarray) -> Optional[int]:
    """Smallest j with curve[j] < curve[j-1] and curve[j] <= curve[j+1]"""
    if curve.size < 3:
        return None
    hits = np.flatnonzero((curve[1:-1] < curve[:-2]) & (curve[1:-1] <= curve[2:]))
    return int(hits[0]) + 1 if hits.size else None


class AicStep(NamedTuple):
    start: int
    stop: int
    curve: np.ndarray
    """criterion at record indices start + 1 ... stop - 1"""
    pick: Optional[int]


class AicSteps(NamedTuple):
    t_max: float
    first: AicStep
    second: Optional[AicStep]
    estimate: ToaEstimate


def _evaluate(w: Waveform, start: int, stop: int, variant: AicVariant) -> AicStep:
    if stop - start + 1 < 3:
        raise DegenerateWindow(w.time_at(start), w.time_at(stop), "(%s)" % w.name)
    curve = aic_curve(w.with_samples(w.samples[start : stop + 1]))
    j = int(np.argmin(curve)) if variant is AicVariant.GM else first_local_minimum(curve)
    return AicStep(start, stop, curve, None if j is None else start + 1 + j)


def aic_steps(
    w: Waveform,
    params: AicParams = AicParams(),
    variant: AicVariant = AicVariant.GM,
    t_first_ub: Optional[float] = None,
) -> AicSteps:
    """Both AIC steps with their windows and curves, for plotting"""
    params = AicParams(*params).validate()
    variant = AicVariant(variant)
    t_max = w.time_at(int(np.argmax(allen_cf(w, params.r_a))))
    upper = t_max + params.t_am if t_first_ub is None else t_first_ub
    record = {
        **params._asdict(),
        "t_first_ub": float(upper),
    }
    first = _evaluate(w, w.index_of(params.t_first_lb), w.index_of(upper), variant)
    if first.pick is None:
        return AicSteps(t_max, first, None, ToaEstimate.not_found(variant.method, record, channel=w.name))
    t_fe = w.time_at(first.pick)
    record["t_fe"] = t_fe
    second = _evaluate(
        w, w.index_of(t_fe - params.t_fb), w.index_of(t_fe + params.t_fa), AicVariant.GM
    )
    estimate = ToaEstimate(variant.method, w.time_at(second.pick), second.pick, record, channel=w.name)
    return AicSteps(t_max, first, second, estimate)


def aic_pick(
    w: Waveform,
    params: AicParams = AicParams(),
    variant: AicVariant = AicVariant.GM,
    t_first_ub: Optional[float] = None,
) -> ToaEstimate:
    """Two-step AIC arrival time

    Args:
        w (Waveform): record
        params (AicParams): window parameters, all >= 0
        variant (AicVariant): GM or LM for the first step
        t_first_ub (float): replaces t_max + t_am as the first window's upper bound

    Returns:
        ToaEstimate: NotFound when LM finds no local minimum in the first window
    """
    return aic_steps(w, params, variant, t_first_ub).estimate


def pick_channels(channels: Sequence[Waveform]) -> List[ToaEstimate]:
    params = AicParams(*(float(options[k]) for k in AicParams._fields))
    variant = AicVariant(str(options["variant"]).upper())
    ub = options.get("t_first_ub")
    return pick_each(channels, lambda w: [aic_pick(w, params, variant, None if ub is None else float(ub))])


def check_options(opt: dict, fs: float):
    AicParams(*(float(opt[k]) for k in AicParams._fields)).validate()
    try:
        AicVariant(str(opt["variant"]).upper())
    except ValueError:
        raise InvalidParameter("variant", opt["variant"], "(可选：GM, LM)")
    ub = opt.get("t_first_ub")
    if ub is not None and not float(ub) > 0:
        raise InvalidParameter("t_first_ub", ub, "(须为正数)")
