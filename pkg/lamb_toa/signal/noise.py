# -*- coding: utf-8 -*-
"""Seeded Gaussian noise"""
from typing import Sequence, Union

import numpy as np

from lamb_toa.common import InvalidParameter
from lamb_toa.signal import Waveform, ZeroSignal, stats

SNR_CAP_DB = 300.0

Seed = Union[int, Sequence[int]]


def generator(seed: Seed) -> np.random.Generator:
    """Philox (counter-based, 64-bit keyed) generator, identical on every platform"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def channel_seed(seed: int, index: int) -> Sequence[int]:
    """Independent stream for channel `index` under a run-wide seed"""
    return [int(seed), int(index)]


def add_noise(w: Waveform, snr_db: float, seed: Seed = 0) -> Waveform:
    """White Gaussian noise at `snr_db` relative to the signal RMS

    Args:
        w (Waveform): signal, must not be silent
        snr_db (float): 20 log10(rms_signal / rms_noise); capped at 300 dB
        seed: int or int sequence, same seed gives identical output

    Raises:
        ZeroSignal: the signal RMS is 0
    """
    rms = stats(w).rms
    if rms == 0:
        raise ZeroSignal(w.name)
    sigma = rms / 10 ** (min(float(snr_db), SNR_CAP_DB) / 20)
    return w.with_samples(w.samples + sigma * generator(seed).standard_normal(w.n))


def noise_floor(w: Waveform, sigma: float, seed: Seed = 0) -> Waveform:
    """Zero-mean Gaussian noise of absolute standard deviation `sigma`"""
    if not sigma >= 0:
        raise InvalidParameter("sigma", sigma, "(不可为负)")
    if sigma == 0:
        return w
    return w.with_samples(w.samples + sigma * generator(seed).standard_normal(w.n))
