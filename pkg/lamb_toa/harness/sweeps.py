# -*- coding: utf-8 -*-
"""Sweeps of one picker parameter over channels"""
import math
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from lamb_toa.common import InvalidParameter, LambToaException
from lamb_toa.estimators import Method, ToaEstimate
from lamb_toa.estimators.aic import AicParams, AicVariant, aic_pick
from lamb_toa.estimators.mer import mer_pick, window_length
from lamb_toa.estimators.sla import DEFAULT_T_DOM, SlaParams, sla_pick
from lamb_toa.estimators.tc import common_threshold, tc_pick
from lamb_toa.harness import SweepResult, logger, run_points
from lamb_toa.signal import Waveform, lowpass, stats


def _increasing(name: str, values: Sequence[float]) -> List[float]:
    values = [float(v) for v in values]
    if not values:
        raise InvalidParameter(name, values, "(不可为空)")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidParameter(name, values, "(须严格递增)")
    return values


def _arrival_order(estimates: Sequence[ToaEstimate]) -> List[str]:
    found = sorted((e for e in estimates if e.found), key=lambda e: e.time)
    return [e.channel for e in found] + [e.channel for e in estimates if not e.found]


def tc_sweep(channels: Sequence[Waveform], p_values: Sequence[float], progress=None) -> SweepResult:
    """Common-threshold TC per p; diagnostics hold thresholds and the arrival order"""
    p_values = _increasing("p_values", p_values)

    def point(p):
        threshold = common_threshold(channels, p)
        if threshold == 0:
            return threshold, [ToaEstimate.not_found(Method.TC, {"threshold": 0.0}, channel=w.name) for w in channels]
        return threshold, [tc_pick(w, threshold) for w in channels]

    results = run_points(point, p_values, progress)
    estimates = [row for _, row in results]
    return SweepResult(
        ["p"],
        [(p,) for p in p_values],
        [w.name for w in channels],
        estimates,
        diagnostics={
            "thresholds": [t for t, _ in results],
            "order": [_arrival_order(row) for row in estimates],
        },
    )


def _is_integral(values: Sequence[float]) -> bool:
    return all(float(v).is_integer() for v in values)


def _bucket(product: float, integral: bool) -> Union[int, float]:
    if integral:
        return int(round(product))
    return float("%.3g" % product)


def sla_grid(
    channel: Waveform,
    alphas: Sequence[float],
    betas: Sequence[float],
    t_dom: float = DEFAULT_T_DOM,
    fs: Optional[float] = None,
    progress=None,
) -> SweepResult:
    """Every (alpha, beta) SLA pick, collapsed onto alpha * beta

    Aggregates hold, per product bucket, the count of raw grid points, how
    many were found, and the mean/std (1/n) of the found times. Window
    lengths that do not fit the record give NotFound.
    """
    if not len(alphas) or not len(betas):
        raise InvalidParameter("alphas, betas", (alphas, betas), "(不可为空)")
    fs = channel.fs if fs is None else fs
    grid = [(float(a), float(b)) for a in alphas for b in betas]

    def point(ab):
        params = SlaParams(ab[0], ab[1], t_dom, fs)
        try:
            return sla_pick(channel, params)[0]
        except LambToaException as e:
            logger.debug("SLA %s : %s" % (ab, e))
            return ToaEstimate.not_found(Method.SLA, {"alpha": ab[0], "beta": ab[1]}, channel=channel.name)

    estimates = run_points(point, grid, progress)
    integral = _is_integral(alphas) and _is_integral(betas)
    buckets: Dict[Union[int, float], List[ToaEstimate]] = {}
    for (a, b), e in zip(grid, estimates):
        buckets.setdefault(_bucket(a * b, integral), []).append(e)
    rows = []
    for key in sorted(buckets):
        times = np.array([e.time for e in buckets[key] if e.found], dtype=float)
        rows.append(
            {
                "alpha_beta": key,
                "count": len(buckets[key]),
                "found": int(times.size),
                "mean_s": float(times.mean()) if times.size else math.nan,
                "std_s": float(times.std()) if times.size else math.nan,
            }
        )
    return SweepResult(
        ["alpha", "beta"],
        grid,
        [channel.name],
        [[e] for e in estimates],
        aggregates=pd.DataFrame(rows, columns=["alpha_beta", "count", "found", "mean_s", "std_s"]),
    )


def mer_sweep(
    channel: Waveform,
    alphas: Sequence[float],
    t_dom: float = DEFAULT_T_DOM,
    fs: Optional[float] = None,
    progress=None,
) -> SweepResult:
    """MER pick per alpha, n_e = round(alpha * fs * t_dom)"""
    alphas = _increasing("alphas", alphas)
    fs = channel.fs if fs is None else fs

    def point(alpha):
        n_e = window_length(alpha, fs, t_dom)
        try:
            estimate = mer_pick(channel, n_e)[0]
        except LambToaException as e:
            logger.debug("MER alpha = %s : %s" % (alpha, e))
            estimate = ToaEstimate.not_found(Method.MER, {"n_e": n_e}, channel=channel.name)
        estimate.params["alpha"] = alpha
        return [estimate]

    return SweepResult(["alpha"], [(a,) for a in alphas], [channel.name], run_points(point, alphas, progress))


AIC_AXES = ("ub", "t_fb", "t_fa")


def aic_window_sweep(
    channel: Waveform,
    params: AicParams = AicParams(),
    values: Sequence[float] = (),
    variant: str = "GM",
    axis: str = "ub",
    progress=None,
) -> SweepResult:
    """AIC picks while one window parameter varies

    Args:
        axis (str): "ub" overrides the first window's upper bound, "t_fb" and
            "t_fa" replace the second window's widths
        variant (str): "GM", "LM" or "both"; with "both" the result has one
            column per variant, named "<channel>:GM" and "<channel>:LM"
    """
    if axis not in AIC_AXES:
        raise InvalidParameter("axis", axis, "(可选：%s)" % ", ".join(AIC_AXES))
    values = _increasing("values", values)
    variants = [AicVariant.GM, AicVariant.LM] if str(variant).lower() == "both" else [AicVariant(str(variant).upper())]
    params = AicParams(*params)

    def point(value):
        row = []
        for v in variants:
            if axis == "ub":
                row.append(aic_pick(channel, params, v, t_first_ub=value))
            else:
                row.append(aic_pick(channel, params._replace(**{axis: value}), v))
        return row

    names = [channel.name] if len(variants) == 1 else ["%s:%s" % (channel.name, v.value) for v in variants]
    return SweepResult([axis], [(v,) for v in values], names, run_points(point, values, progress))


PICKERS = ("MER", "AIC_GM")


def cutoff_sweep(
    channels: Sequence[Waveform],
    cutoffs: Sequence[float],
    picker: str = "AIC_GM",
    picker_params: Optional[dict] = None,
    progress=None,
) -> SweepResult:
    """Low-pass each channel at every cutoff, then pick

    `picker_params` holds `n_e` (or `alpha`, `t_dom`) for MER and the
    `AicParams` fields for AIC_GM. Diagnostics keep the filtered energies.
    """
    picker = str(picker).upper()
    if picker not in PICKERS:
        raise InvalidParameter("picker", picker, "(可选：%s)" % ", ".join(PICKERS))
    cutoffs = _increasing("cutoffs", cutoffs)
    opt = dict(picker_params or {})

    def pick(w: Waveform) -> ToaEstimate:
        if picker == "MER":
            n_e = opt.get("n_e") or window_length(float(opt.get("alpha", 40.0)), w.fs, float(opt.get("t_dom", DEFAULT_T_DOM)))
            return mer_pick(w, int(n_e))[0]
        params = AicParams(**{k: float(v) for k, v in opt.items() if k in AicParams._fields})
        return aic_pick(w, params, AicVariant.GM)

    def point(cutoff):
        row, energies = [], []
        for w in channels:
            filtered = lowpass(w, cutoff)
            energies.append(stats(filtered).energy)
            try:
                estimate = pick(filtered)
            except LambToaException as e:
                logger.warning("%s @ %.6g Hz : %s" % (w.name, cutoff, e))
                estimate = ToaEstimate.not_found(Method[picker], channel=w.name)
            estimate.params["cutoff"] = cutoff
            row.append(estimate)
        return row, energies

    results = run_points(point, cutoffs, progress)
    return SweepResult(
        ["cutoff"],
        [(c,) for c in cutoffs],
        [w.name for w in channels],
        [row for row, _ in results],
        diagnostics={"energy": [energies for _, energies in results]},
    )
