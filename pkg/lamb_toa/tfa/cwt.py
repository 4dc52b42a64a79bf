# -*- coding: utf-8 -*-
"""Morlet continuous wavelet transform and the frequency-domain threshold picker"""
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import fft as sp_fft

from lamb_toa.common import InvalidParameter, worker_count
from lamb_toa.estimators import Method, ToaEstimate
from lamb_toa.signal import Waveform
from lamb_toa.tfa import (
    DEFAULT_OMEGA_C,
    DEFAULT_SUPPORT,
    FrequencyOutOfRange,
    InconsistentChannels,
    Scalogram,
    logger,
)

KERNEL_HALF_WIDTH = 8.0
"""Kernels are truncated at +-8 standard deviations of the Gaussian envelope"""
NORMALIZATIONS = ("l1", "l2")
_CHUNK = 32


def morlet(t, omega_c: float = DEFAULT_OMEGA_C) -> np.ndarray:
    """pi^-1/4 exp(i omega_c t) exp(-t^2 / 2)"""
    if not omega_c > 0:
        raise InvalidParameter("omega_c", omega_c, "(须为正数)")
    t = np.asarray(t, dtype=float)
    return math.pi ** -0.25 * np.exp(1j * omega_c * t) * np.exp(-0.5 * t * t)


def _scales(w: Waveform, freqs, omega_c: float) -> Tuple[np.ndarray, np.ndarray]:
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    nyquist = 0.5 * w.fs
    if (
        freqs.size == 0
        or np.any(freqs <= 0)
        or np.any(freqs >= nyquist)
        or np.any(np.diff(freqs) <= 0)
    ):
        raise FrequencyOutOfRange(freqs, nyquist)
    return freqs, omega_c / (2 * np.pi * freqs * w.dt)


def cwt_coefficients(
    w: Waveform,
    freqs: Sequence[float],
    omega_c: float = DEFAULT_OMEGA_C,
    normalization: str = "l1",
) -> np.ndarray:
    """Complex coefficients, shape (N, len(freqs))

    Scale a = omega_c / (2 pi f dt) samples. Each column is the signal
    convolved with the sampled, truncated wavelet psi(m / a) scaled by
    1/a ("l1", default) or 1/sqrt(a) ("l2"); the Morlet is its own conjugate
    time-reverse, so this equals the projection on the shifted wavelet.
    """
    if normalization not in NORMALIZATIONS:
        raise InvalidParameter("normalization", normalization, "(可选：%s)" % ", ".join(NORMALIZATIONS))
    freqs, scales = _scales(w, freqs, omega_c)
    half_widths = np.ceil(KERNEL_HALF_WIDTH * scales).astype(int)
    nfft = sp_fft.next_fast_len(w.n + 2 * int(half_widths.max()) + 1)
    workers = worker_count()
    spectrum = sp_fft.fft(w.samples, nfft, workers=workers)
    coefficients = np.empty((w.n, freqs.size), dtype=complex)
    for start in range(0, freqs.size, _CHUNK):
        stop = min(start + _CHUNK, freqs.size)
        bank = np.zeros((stop - start, nfft), dtype=complex)
        for row, (a, k) in enumerate(zip(scales[start:stop], half_widths[start:stop])):
            m = np.arange(-k, k + 1)
            gain = 1 / math.sqrt(a) if normalization == "l2" else 1 / a
            bank[row, m % nfft] = gain * morlet(m / a, omega_c)
        kernel_spectra = sp_fft.fft(bank, axis=-1, workers=workers)
        product = sp_fft.ifft(kernel_spectra * spectrum, axis=-1, workers=workers)
        coefficients[:, start:stop] = product[:, : w.n].T
    return coefficients


def cwt(
    w: Waveform,
    freqs: Sequence[float],
    omega_c: float = DEFAULT_OMEGA_C,
    support: float = DEFAULT_SUPPORT,
    normalization: str = "l1",
    window: Optional[Tuple[float, float]] = None,
) -> Scalogram:
    """Scalogram |W|^2 of `w` at the target pseudo-frequencies

    Args:
        w (Waveform): record
        freqs: strictly increasing, inside (0, fs / 2)
        omega_c (float): Morlet centre frequency
        support (float): C of the cone of influence
        normalization (str): "l1" puts a tone's peak on its own frequency, "l2" keeps wavelet energy
        window ((float, float)): keep only rows inside this time span. The cone
            of influence still refers to the full record.
    """
    if not support >= 0:
        raise InvalidParameter("support", support, "(不可为负)")
    freqs, scales = _scales(w, freqs, omega_c)
    values = np.abs(cwt_coefficients(w, freqs, omega_c, normalization)) ** 2
    t0 = w.t0
    if window is not None:
        i0, i1 = w.index_of(window[0]), w.index_of(window[1])
        if i1 < i0:
            raise InvalidParameter("window", window, "(起止时间颠倒)")
        values = values[i0 : i1 + 1]
        t0 = w.time_at(i0)
    logger.debug("%s : CWT %d 个频率, %d 行" % (w.name, freqs.size, values.shape[0]))
    return Scalogram(values, freqs, scales, w.dt, t0, (w.t0, w.t_end), omega_c, support, name=w.name)


def coi_boundary(scalogram: Scalogram) -> Tuple[np.ndarray, np.ndarray]:
    """Per frequency, (earliest, latest) trustworthy time

    A coefficient is trustworthy strictly inside these bounds, i.e. farther
    than C * a * dt from both record edges.
    """
    first, last = scalogram.signal_span
    reach = scalogram.support * scalogram.scales * scalogram.dt
    return first + reach, last - reach


def shared_normalizer(scalograms: Sequence[Scalogram]) -> float:
    """Smallest per-channel maximum of the scalogram values"""
    _check_consistent(scalograms)
    return float(min(sc.values.max() for sc in scalograms))


def normalize_channels(scalograms: Sequence[Scalogram]) -> List[Scalogram]:
    normalizer = shared_normalizer(scalograms)
    return [sc.with_normalizer(normalizer) for sc in scalograms]


def _check_consistent(scalograms: Sequence[Scalogram]):
    if not scalograms:
        raise InconsistentChannels("通道列表为空")
    ref = scalograms[0]
    for sc in scalograms[1:]:
        if not np.array_equal(sc.freqs, ref.freqs):
            raise InconsistentChannels("%s 与 %s 的频率网格不同" % (sc.name, ref.name))
        if sc.dt != ref.dt or sc.t0 != ref.t0 or sc.values.shape != ref.values.shape:
            raise InconsistentChannels("%s 与 %s 的时间窗不同" % (sc.name, ref.name))


def cwt_tc_pick(
    scalograms: Sequence[Scalogram],
    threshold: float,
    freq_subset: Optional[Sequence[float]] = None,
    subsample: bool = False,
) -> List[Dict[float, ToaEstimate]]:
    """Threshold crossing on the cross-channel normalized scalograms

    Values are divided by the smallest per-channel maximum; per channel and
    frequency the ToA is the first row strictly above `threshold`.

    Args:
        scalograms: one per channel, sharing frequencies, dt and window
        threshold (float): > 0, relative to the shared normalizer
        freq_subset: frequencies to pick at (nearest bin); all when None
        subsample (bool): interpolate the crossing linearly between rows

    Returns:
        one {frequency: ToaEstimate} per channel, in channel order
    """
    if not threshold > 0:
        raise InvalidParameter("threshold", threshold, "(须为正数)")
    normalizer = shared_normalizer(scalograms)
    ref = scalograms[0]
    columns = (
        list(range(ref.freqs.size))
        if freq_subset is None
        else sorted({ref.nearest(f) for f in freq_subset})
    )
    earliest, latest = coi_boundary(ref)
    results = []
    for sc in scalograms:
        picks = {}
        for j in columns:
            f = float(sc.freqs[j])
            params = {"threshold": float(threshold), "normalizer": normalizer}
            if normalizer == 0:
                picks[f] = ToaEstimate.not_found(Method.CWT_TC, params, f, sc.name)
                continue
            section = sc.values[:, j] / normalizer
            above = np.flatnonzero(section > threshold)
            if not above.size:
                picks[f] = ToaEstimate.not_found(Method.CWT_TC, params, f, sc.name)
                continue
            i = int(above[0])
            t = sc.t0 + i * sc.dt
            if subsample and i > 0:
                lo, hi = section[i - 1], section[i]
                t -= (hi - threshold) / (hi - lo) * sc.dt
            in_coi = not earliest[j] < t < latest[j]
            picks[f] = ToaEstimate(Method.CWT_TC, t, i, params, f, in_coi, sc.name)
        results.append(picks)
    return results


def scalogram_section(scalogram: Scalogram, f: float) -> Waveform:
    """values(:, nearest bin) / normalizer as a waveform on the scalogram rows"""
    j = scalogram.nearest(f)
    column = scalogram.values[:, j]
    if scalogram.normalizer > 0:
        column = column / scalogram.normalizer
    else:
        column = np.zeros_like(column)
    if column.size < 2:
        column = np.concatenate([column, np.zeros(2 - column.size)])
    return Waveform(column, scalogram.dt, scalogram.t0, "%s@%.6gHz" % (scalogram.name, scalogram.freqs[j]))
