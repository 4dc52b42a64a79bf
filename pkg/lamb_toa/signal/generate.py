# -*- coding: utf-8 -*-
"""Synthetic excitations and phase-delay propagation through a dispersive plate"""
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Union

import numpy as np
from scipy import fft as sp_fft
from scipy.signal import windows

from lamb_toa.common import InvalidParameter, round_half_up, worker_count
from lamb_toa.dispersion import DispersionCurve
from lamb_toa.signal import (
    DEFAULT_DT,
    BandNotCovered,
    NyquistViolation,
    Waveform,
    logger,
)

WINDOWS = ("hanning", "gaussian", "blackman")
DEFAULT_MODE_WEIGHTS = {"S0": 0.1, "A0": 1.0}
PAD_FACTOR = 16
"""FFT length as a multiple of the record, leaves room for slow components"""
FADE_SPAN = 1.0
"""Group delays from one record length to (1 + FADE_SPAN) records are faded out"""
BAND_TAIL = 0.01
"""Energy fraction allowed outside the coverage check on each side of the band"""
REFERENCE_DISTANCE = 0.1


def _window(name: str, n: int) -> np.ndarray:
    name = name.lower()
    if name in ("hanning", "hann"):
        return windows.hann(n)
    if name == "gaussian":
        return windows.gaussian(n, std=n / 6)
    if name == "blackman":
        return windows.blackman(n)
    raise InvalidParameter("window", name, "(可选：%s)" % ", ".join(WINDOWS))


def tone_burst(
    f0: float,
    cycles: float,
    window: str = "hanning",
    dt: float = DEFAULT_DT,
    pad: int = 0,
    t0: float = 0.0,
) -> Waveform:
    """Windowed sinusoid of `cycles` periods with `pad` zeros on either side

    The carrier is cosine-phased about the window centre so both peak together.
    """
    if not f0 > 0:
        raise InvalidParameter("f0", f0, "(须为正数)")
    if f0 * dt >= 0.5:
        raise NyquistViolation(f0, dt)
    if cycles < 0 or pad < 0:
        raise InvalidParameter("cycles, pad", (cycles, pad), "(不可为负)")
    n = round_half_up(cycles / (f0 * dt))
    burst = np.zeros(0)
    if n > 0:
        t = (np.arange(n) - (n - 1) / 2) * dt
        burst = _window(window, n) * np.cos(2 * np.pi * f0 * t)
    samples = np.concatenate([np.zeros(pad), burst, np.zeros(pad)])
    if samples.size < 2:
        samples = np.zeros(2)
    return Waveform(samples, dt, t0, "tone_burst")


class DispersiveSpectrum(NamedTuple):
    freqs: np.ndarray
    source: np.ndarray
    output: np.ndarray
    retained: np.ndarray
    nfft: int


def _as_curve_list(curves) -> List[DispersionCurve]:
    if isinstance(curves, DispersionCurve):
        return [curves]
    if isinstance(curves, Mapping):
        return list(curves.values())
    return list(curves)


def occupied_band(freqs: np.ndarray, spectrum: np.ndarray, tail: float = BAND_TAIL):
    """Frequency interval holding all but `tail` of the energy on each side"""
    power = np.abs(spectrum) ** 2
    total = power.sum()
    if total == 0:
        return None
    cumulative = np.cumsum(power) / total
    lo = freqs[min(int(np.searchsorted(cumulative, tail)), freqs.size - 1)]
    hi = freqs[min(int(np.searchsorted(cumulative, 1 - tail)), freqs.size - 1)]
    return float(lo), float(hi)


def delay_taper(delay: np.ndarray, record: float, fade_end: float) -> np.ndarray:
    """Gain 1 up to `record`, raised-cosine down to 0 at `fade_end`, 0 beyond (and for NaN)"""
    delay = np.nan_to_num(np.asarray(delay, dtype=float), nan=np.inf)
    gain = np.zeros(delay.shape)
    gain[delay <= record] = 1.0
    fading = (delay > record) & (delay < fade_end)
    if fade_end > record:
        gain[fading] = 0.5 * (1 + np.cos(np.pi * (delay[fading] - record) / (fade_end - record)))
    return gain


def dispersive_spectrum(
    source: Waveform,
    curves: Union[DispersionCurve, Iterable[DispersionCurve], Mapping[str, DispersionCurve]],
    distance: float,
    mode_weights: Optional[Dict[str, float]] = None,
    band_tail: float = BAND_TAIL,
    channel: Optional[str] = None,
) -> DispersiveSpectrum:
    """Spectrum of the source after `distance` metres of travel

    Per mode, each bin is multiplied by weight * exp(-i k(w) r). Bins outside
    the curve's coverage are dropped, as are bins whose group delay does not
    fit in the zero padding (they would wrap around into the record). Bins
    arriving after the record are faded out smoothly: a hard cut next to the
    dropped DC bin of a slow mode rings back into the record as an offset.
    Modes missing from `mode_weights` get weight 0.
    """
    if distance < 0:
        raise InvalidParameter("distance", distance, "(不可为负)")
    weights = dict(DEFAULT_MODE_WEIGHTS if mode_weights is None else mode_weights)
    n = source.n
    nfft = sp_fft.next_fast_len(PAD_FACTOR * n, real=True)
    spectrum = sp_fft.rfft(source.samples, nfft, workers=worker_count())
    freqs = sp_fft.rfftfreq(nfft, source.dt)
    omega = 2 * np.pi * freqs
    band = occupied_band(freqs, spectrum, band_tail)
    max_delay = (nfft - n) * source.dt
    record = n * source.dt
    fade_end = min(record * (1 + FADE_SPAN), max_delay)

    output = np.zeros_like(spectrum)
    retained = np.zeros(freqs.size, dtype=bool)
    for curve in _as_curve_list(curves):
        weight = float(weights.get(curve.name, 0.0))
        if weight == 0:
            continue
        coverage = (float(curve.frequency[0]), float(curve.frequency[-1]))
        if band is not None and (band[0] < coverage[0] or band[1] > coverage[1]):
            raise BandNotCovered(curve.name, band, coverage, source.name if channel is None else channel)
        k = curve.k_of_omega(omega)
        keep = np.isfinite(k)
        gain = np.ones(freqs.size)
        if distance > 0:
            with np.errstate(divide="ignore", invalid="ignore"):
                delay = distance / curve.group_speed_of_omega(omega)
            gain = delay_taper(delay, record, fade_end)
            keep &= gain > 0
        output[keep] += weight * gain[keep] * spectrum[keep] * np.exp(-1j * k[keep] * distance)
        retained |= keep
    return DispersiveSpectrum(freqs, spectrum, output, retained, nfft)


def propagate_dispersive(
    source: Waveform,
    curves,
    distance: float,
    mode_weights: Optional[Dict[str, float]] = None,
    spreading: bool = False,
    reference_distance: float = REFERENCE_DISTANCE,
    name: Optional[str] = None,
) -> Waveform:
    """Phase-delay synthesis of the source as seen `distance` metres away

    Args:
        source (Waveform): excitation at the impact point
        curves: one curve, a list of curves or a name -> curve mapping
        distance (float): propagation distance, m
        mode_weights (dict): mode name -> real weight. Defaults to S0 0.1, A0 1.0;
            other modes are silent unless named
        spreading (bool): scale by sqrt(reference_distance / distance)

    Returns:
        Waveform: same length, dt and t0 as the source
    """
    result = dispersive_spectrum(source, curves, distance, mode_weights, channel=name)
    samples = sp_fft.irfft(result.output, result.nfft, workers=worker_count())[: source.n]
    if spreading and distance > 0:
        samples = samples * np.sqrt(reference_distance / distance)
    return source.with_samples(samples, name=source.name if name is None else name)


def synthesize_channels(
    layout,
    impact_index: int,
    source: Waveform,
    curves,
    mode_weights: Optional[Dict[str, float]] = None,
    spreading: bool = True,
) -> List[Waveform]:
    """One propagated waveform per sensor of `layout`, named after the sensor"""
    from lamb_toa.signal.layout import distances

    channels = []
    for name, distance in zip(layout.sensor_names, distances(layout, impact_index)):
        channel = propagate_dispersive(
            source, curves, distance, mode_weights, spreading=spreading, name=name
        )
        logger.debug("%s : r = %.1f mm" % (name, distance * 1e3))
        channels.append(channel)
    return channels
