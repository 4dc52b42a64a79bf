# -*- coding: utf-8 -*-
"""SVG figures; identical inputs give identical files"""
import logging
import math
from typing import Dict, Optional

import numpy as np
import matplotlib as mpl

mpl.use("Agg")

svg_settings = {
    "svg.hashsalt": "lamb-toa",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.0,
    "figure.figsize": (7.0, 4.5),
    "savefig.dpi": 100,
}
mpl.rcParams.update(svg_settings)

import matplotlib.pyplot as plt

from lamb_toa.tfa import coi_boundary

logger = logging.getLogger("toa-cli")

MAX_HEATMAP = (300, 200)
MARKER_STYLE = {"t_s0": ("tab:orange", "--"), "t_a0": ("tab:green", "--")}


def new(nrows=1, ncols=1, sharex=False, height=None):
    figsize = None if height is None else (svg_settings["figure.figsize"][0], height)
    return plt.subplots(nrows=nrows, ncols=ncols, sharex=sharex, squeeze=False, figsize=figsize)


def save(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.debug("图像 -> %s" % path)
    return path


def plot_dispersion(curves, path: str) -> str:
    fig, ax = new(1, 2)
    for curve in curves:
        ax[0, 0].plot(curve.fd, curve.c_phase, label=curve.name)
        ax[0, 1].plot(curve.fd, curve.c_group, label=curve.name)
    for a, what in zip(ax[0], ("phase speed", "group speed")):
        a.set_xlabel("fd (Hz·m)")
        a.set_ylabel("%s (m/s)" % what)
        a.legend()
    return save(fig, path)


def plot_signals(channels, markers=None, picks=None, path: str = "signals.svg") -> str:
    """One trace per channel with t_S0/t_A0 marker lines and picks

    Args:
        markers: Marker per sensor, matched by channel name
        picks: ToaEstimates, drawn on the trace of their channel
    """
    markers = {m.sensor: m for m in (markers or [])}
    picks = [e for e in (picks or []) if e.found and e.frequency is None]
    methods = sorted({e.method.value for e in picks})
    fig, ax = new(len(channels), 1, sharex=True, height=1.6 * len(channels) + 0.8)
    for a, w in zip(ax[:, 0], channels):
        a.plot(w.times * 1e6, w.samples, color="black", linewidth=0.6)
        a.set_ylabel(w.name)
        marker = markers.get(w.name)
        if marker is not None:
            for key, (color, style) in MARKER_STYLE.items():
                a.axvline(getattr(marker, key) * 1e6, color=color, linestyle=style, label=key)
        for j, method in enumerate(methods):
            for e in picks:
                if e.channel == w.name and e.method.value == method:
                    a.axvline(e.time * 1e6, color="C%d" % (j % 10), linestyle=":", label=method)
        handles, labels = a.get_legend_handles_labels()
        if handles:
            unique = dict(zip(labels, handles))
            a.legend(unique.values(), unique.keys(), loc="upper right")
    ax[-1, 0].set_xlabel("t (us)")
    return save(fig, path)


def _base_channel(name: str) -> str:
    return name.split(":")[0]


def plot_sweep(results, markers=None, path: str = "sweep.svg", logx: bool = False) -> str:
    """Picked time against the swept value, per channel

    Results carrying mean/std aggregates are drawn as mean +- std bands over
    the aggregate key instead. Marker lines are horizontal.
    """
    markers = {m.sensor: m for m in (markers or [])}
    fig, ax = new()
    a = ax[0, 0]
    drawn = set()
    for i, result in enumerate(results):
        color = "C%d" % (i % 10)
        aggregates = result.aggregates
        if aggregates is not None and "mean_s" in aggregates:
            x = aggregates.iloc[:, 0].to_numpy(dtype=float)
            mean = aggregates["mean_s"].to_numpy(dtype=float) * 1e6
            std = aggregates["std_s"].to_numpy(dtype=float) * 1e6
            a.plot(x, mean, color=color, label="%s mean" % ",".join(result.channels))
            a.fill_between(x, mean - std, mean + std, color=color, alpha=0.25, linewidth=0)
            a.set_xlabel(aggregates.columns[0])
        else:
            x = np.array([v[0] for v in result.values], dtype=float)
            times = result.times() * 1e6
            for j, name in enumerate(result.channels):
                a.plot(x, times[:, j], marker=".", color="C%d" % ((i + j) % 10), label=name)
            a.set_xlabel(result.axis[0])
        for name in result.channels:
            marker = markers.get(_base_channel(name))
            if marker is None or marker.sensor in drawn:
                continue
            drawn.add(marker.sensor)
            for key, (mcolor, style) in MARKER_STYLE.items():
                a.axhline(getattr(marker, key) * 1e6, color=mcolor, linestyle=style, linewidth=0.7)
                a.annotate(
                    "%s %s" % (marker.sensor, key),
                    (0, getattr(marker, key) * 1e6),
                    xycoords=("axes fraction", "data"),
                    fontsize=6,
                    color=mcolor,
                )
    if logx:
        a.set_xscale("log")
    a.set_ylabel("ToA (us)")
    a.legend(loc="best")
    return save(fig, path)


def _decimate(count: int, limit: int) -> int:
    return max(1, int(math.ceil(count / limit)))


def plot_scalogram(scalogram, path: str, picks: Optional[Dict[float, object]] = None) -> str:
    """Normalized scalogram heatmap (viridis) with the cone of influence as white dash-dot lines"""
    rows = _decimate(scalogram.values.shape[0], MAX_HEATMAP[0])
    cols = _decimate(scalogram.values.shape[1], MAX_HEATMAP[1])
    normalizer = scalogram.normalizer if scalogram.normalizer > 0 else 1.0
    values = scalogram.values[::rows, ::cols] / normalizer
    times = scalogram.times[::rows] * 1e6
    freqs = scalogram.freqs[::cols] * 1e-3
    fig, ax = new()
    a = ax[0, 0]
    mesh = a.pcolormesh(times, freqs, values.T, cmap="viridis", shading="nearest", rasterized=True)
    fig.colorbar(mesh, ax=a, label="|W|² / norm")
    earliest, latest = coi_boundary(scalogram)
    span = (times[0], times[-1])
    for edge in (earliest, latest):
        a.plot(np.clip(edge * 1e6, *span), scalogram.freqs * 1e-3, color="white", linestyle="-.", linewidth=0.8)
    if picks:
        found = [e for e in picks.values() if e.found]
        a.plot(
            [e.time * 1e6 for e in found],
            [e.frequency * 1e-3 for e in found],
            linestyle="none",
            marker=".",
            markersize=2,
            color="white",
        )
    a.set_xlim(*span)
    a.set_xlabel("t (us)")
    a.set_ylabel("f (kHz)")
    a.set_title(scalogram.name)
    return save(fig, path)
