# -*- coding: utf-8 -*-
"""Rayleigh-Lamb root tracing for the fundamental and first-order modes"""
import logging
import math
from enum import Enum
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import bisect

from lamb_toa.common import EmptyRange, InvalidParameter, LambToaException
from lamb_toa.dispersion.material import (
    PlateMaterial,
    bulk_speeds,
    flexural_speed,
    plate_axial_speed,
)

logger = logging.getLogger("Dispersion")

SCAN_POINTS = 2000
SCAN_LOWER = 0.05
SCAN_UPPER = 0.999 * 5
CONTINUATION_WINDOW = 0.1
CONTINUATION_STEPS = 16
BISECT_RTOL = 1e-10
ORDER1_SCAN_FROM = 0.8
"""Order-1 roots are looked for from this fraction of the k = 0 cutoff on"""

CSV_COLUMNS = ["fd_Hz_m", "k_rad_per_m", "c_phase_m_s", "c_group_m_s", "mode"]


class BranchLost(LambToaException):
    def __init__(self, mode, fd, desc="") -> None:
        self.mode = mode
        self.fd = fd
        super().__init__("%s 分支丢失 @ fd = %.6g Hz·m %s" % (mode.name, fd, desc))


class ModeFamily(Enum):
    SYMMETRIC = "S"
    ANTISYMMETRIC = "A"


class LambMode(NamedTuple):
    family: ModeFamily
    order: int

    @property
    def name(self) -> str:
        return "%s%d" % (self.family.value, self.order)

    @property
    def symmetric(self) -> bool:
        return self.family is ModeFamily.SYMMETRIC

    @staticmethod
    def parse(name: str) -> "LambMode":
        key = str(name).strip().upper()
        if key not in MODES:
            raise InvalidParameter("mode", name, "(可选：%s)" % ", ".join(MODES))
        return MODES[key]


S0 = LambMode(ModeFamily.SYMMETRIC, 0)
A0 = LambMode(ModeFamily.ANTISYMMETRIC, 0)
S1 = LambMode(ModeFamily.SYMMETRIC, 1)
A1 = LambMode(ModeFamily.ANTISYMMETRIC, 1)
MODES = {m.name: m for m in (S0, A0, S1, A1)}


class DispersionCurve:
    """One traced mode branch, sampled on an increasing fd grid"""

    mode: LambMode
    half_thickness: float

    def __init__(
        self,
        mode: LambMode,
        fd: Sequence[float],
        k: Sequence[float],
        c_phase: Sequence[float],
        c_group: Sequence[float],
        half_thickness: float,
    ) -> None:
        arrays = [np.array(a, dtype=float) for a in (fd, k, c_phase, c_group)]
        if len({len(a) for a in arrays}) != 1 or len(arrays[0]) < 2:
            raise InvalidParameter("samples", [len(a) for a in arrays], "(长度须一致且 >= 2)")
        fd, k, c_phase, c_group = arrays
        if np.any(np.diff(fd) <= 0):
            raise InvalidParameter("fd", "...", "(须严格递增)")
        if np.any(np.diff(k) <= 0):
            raise InvalidParameter("k", "...", "(须沿分支严格递增)")
        if np.any(c_phase <= 0) or np.any(c_group <= 0):
            raise InvalidParameter("speeds", "...", "(须为正数)")
        for a in arrays:
            a.flags.writeable = False
        self.mode = mode
        self.fd, self.k, self.c_phase, self.c_group = fd, k, c_phase, c_group
        self.half_thickness = float(half_thickness)

    @property
    def name(self) -> str:
        return self.mode.name

    @property
    def omega(self) -> np.ndarray:
        return 2 * np.pi * self.fd / self.half_thickness

    @property
    def frequency(self) -> np.ndarray:
        return self.fd / self.half_thickness

    @property
    def fd_range(self) -> Tuple[float, float]:
        return float(self.fd[0]), float(self.fd[-1])

    def at(self, fd: float) -> Tuple[float, float, float]:
        """(k, c_phase, c_group) linearly interpolated at `fd`"""
        if not self.fd[0] <= fd <= self.fd[-1]:
            raise EmptyRange("fd = %s 不在 %s 的范围 %s 内" % (fd, self.name, self.fd_range))
        return tuple(float(np.interp(fd, self.fd, a)) for a in (self.k, self.c_phase, self.c_group))

    def group_speed_at(self, fd: float) -> float:
        return self.at(fd)[2]

    def k_of_omega(self, omega) -> np.ndarray:
        """Wavenumber at angular frequencies, linear in omega; NaN outside coverage"""
        return np.interp(omega, self.omega, self.k, left=np.nan, right=np.nan)

    def group_speed_of_omega(self, omega) -> np.ndarray:
        return np.interp(omega, self.omega, self.c_group, left=np.nan, right=np.nan)

    def __len__(self) -> int:
        return len(self.fd)

    def __repr__(self) -> str:
        return "< %s : %d samples , fd %.4g..%.4g Hz·m >" % ((self.name, len(self)) + self.fd_range)


# region Residual
def _residual_function(mat: PlateMaterial, mode: LambMode):
    """Residual closure over (k, omega) with the material constants bound"""
    cp, cs = bulk_speeds(mat)
    d = mat.half_thickness
    inv_cp2, inv_cs2 = 1 / cp ** 2, 1 / cs ** 2
    symmetric = mode.symmetric

    def residual(k: float, omega: float) -> float:
        k2, w2 = k * k, omega * omega
        eta_p2 = w2 * inv_cp2 - k2
        eta_s2 = w2 * inv_cs2 - k2
        a = (k2 - eta_s2) ** 2
        b = 4 * k2
        if eta_p2 >= 0:
            p, s = math.sqrt(eta_p2), math.sqrt(eta_s2)
            if symmetric:
                return a * math.cos(p * d) * math.sin(s * d) + b * p * s * math.sin(p * d) * math.cos(s * d)
            return a * math.sin(p * d) * math.cos(s * d) + b * p * s * math.cos(p * d) * math.sin(s * d)
        # eta_p = i q; the common factor i is dropped where it appears
        q = math.sqrt(-eta_p2)
        ch, sh = math.cosh(q * d), math.sinh(q * d)
        if eta_s2 >= 0:
            s = math.sqrt(eta_s2)
            if symmetric:
                return a * ch * math.sin(s * d) - b * q * s * sh * math.cos(s * d)
            return a * sh * math.cos(s * d) + b * q * s * ch * math.sin(s * d)
        r = math.sqrt(-eta_s2)
        if symmetric:
            return a * ch * math.sinh(r * d) - b * q * r * sh * math.cosh(r * d)
        return a * sh * math.cosh(r * d) - b * q * r * ch * math.sinh(r * d)

    return residual


def rayleigh_lamb_residual(mat: PlateMaterial, mode: LambMode, k: float, omega: float) -> float:
    """Pole-free Rayleigh-Lamb residual, real-valued on both sides of the bulk speeds

    Args:
        mat (PlateMaterial): plate
        mode (LambMode): only the family matters
        k (float): wavenumber, rad/m
        omega (float): angular frequency, rad/s
    """
    if not (k > 0 and omega > 0):
        raise InvalidParameter("k, omega", (k, omega), "(须为正数)")
    return _residual_function(mat, mode)(float(k), float(omega))


# endregion


# region Tracing
def cutoff_fd(mat: PlateMaterial, mode: LambMode) -> float:
    """fd of the k = 0 cutoff for an order-1 mode, 0 for the fundamentals"""
    if mode.order == 0:
        return 0.0
    cp, cs = bulk_speeds(mat)
    if mode.symmetric:
        # cos(w d / cp) = 0 or sin(w d / cs) = 0
        return min(cp / 4, cs / 2)
    # sin(w d / cp) = 0 or cos(w d / cs) = 0
    return min(cp / 2, cs / 4)


def default_fd_grid() -> np.ndarray:
    """1 ... 5000 Hz·m in 1 Hz·m steps"""
    return np.arange(1.0, 5001.0)


def generation_fd_grid(fd_max: float = 1000.0, fd_min: float = 0.02) -> np.ndarray:
    """Fine geometric head below 1 Hz·m so slow low-frequency A0 content is covered"""
    head = np.geomspace(fd_min, 1.0, 40, endpoint=False)
    return np.concatenate([head, np.arange(1.0, float(fd_max) + 1.0)])


def _asymptote(mat: PlateMaterial, mode: LambMode, omega: float) -> Optional[float]:
    if mode == S0:
        return plate_axial_speed(mat)
    if mode == A0:
        return flexural_speed(mat, omega)
    return None


def _sign_changes(speeds: np.ndarray, values: np.ndarray) -> List[Tuple[float, float]]:
    negative = np.signbit(values)
    idx = np.flatnonzero(negative[1:] != negative[:-1])
    return [(speeds[i], speeds[i + 1]) for i in idx]


def _scan(g, lo: float, hi: float, points: int, geometric=True):
    speeds = np.geomspace(lo, hi, points) if geometric else np.linspace(lo, hi, points)
    values = np.array([g(c) for c in speeds])
    return _sign_changes(speeds, values)


def _refine(g, bracket: Tuple[float, float], rtol: float) -> float:
    return bisect(g, bracket[0], bracket[1], xtol=1e-12, rtol=rtol)


def _predict(mode: LambMode, mat, omegas: List[float], ks: List[float], omega: float, cutoff_omega: float):
    """Phase speed guess at `omega` from the already traced roots"""
    if len(ks) == 1:
        if mode.order == 0:
            ratio = _asymptote(mat, mode, omega) / _asymptote(mat, mode, omegas[-1])
            return omegas[-1] / ks[-1] * ratio
        # k^2 grows linearly with (omega - cutoff) right above the cutoff
        k2 = ks[-1] ** 2 * max(omega - cutoff_omega, 0.0) / max(omegas[-1] - cutoff_omega, 1e-300)
    elif mode.order == 0:
        # locally k ~ omega^n: secant in log-log
        slope = math.log(ks[-1] / ks[-2]) / math.log(omegas[-1] / omegas[-2])
        return omega / (ks[-1] * (omega / omegas[-1]) ** slope)
    else:
        slope = (ks[-1] ** 2 - ks[-2] ** 2) / (omegas[-1] - omegas[-2])
        k2 = ks[-1] ** 2 + slope * (omega - omegas[-1])
    if k2 <= 0:
        return omegas[-1] / ks[-1]
    return omega / math.sqrt(k2)


def trace_mode(
    mat: PlateMaterial,
    mode: LambMode,
    fd_grid: Iterable[float],
    scan_points: int = SCAN_POINTS,
    window: float = CONTINUATION_WINDOW,
    rtol: float = BISECT_RTOL,
) -> DispersionCurve:
    """Traces one mode branch over `fd_grid` (Hz·m)

    The first root comes from a dense phase-speed scan (the one nearest the
    low-frequency asymptote for S0/A0, the second lowest for S1/A1); later
    ones are bisected inside a +-`window` bracket around an extrapolated
    guess. Order-1 branches begin at the first grid point that resolves them.

    Args:
        mat (PlateMaterial): plate
        mode (LambMode): S0, A0, S1 or A1
        fd_grid (Iterable[float]): strictly increasing, positive

    Returns:
        DispersionCurve
    """
    fd_grid = np.asarray(list(fd_grid), dtype=float)
    if fd_grid.size < 2 or np.any(fd_grid <= 0) or np.any(np.diff(fd_grid) <= 0):
        raise InvalidParameter("fd_grid", "...", "(须为正且严格递增, 至少两点)")
    cp, cs = bulk_speeds(mat)
    d = mat.half_thickness
    residual = _residual_function(mat, mode)
    cutoff = cutoff_fd(mat, mode)
    cutoff_omega = 2 * math.pi * cutoff / d

    fds, omegas, ks = [], [], []
    for fd in fd_grid:
        omega = 2 * math.pi * fd / d
        g = lambda c, omega=omega: residual(omega / c, omega)
        if not ks:
            if fd < ORDER1_SCAN_FROM * cutoff:
                continue
            asymptote = _asymptote(mat, mode, omega)
            lo = SCAN_LOWER * cs if asymptote is None else min(SCAN_LOWER * cs, 0.5 * asymptote)
            brackets = _scan(g, lo, SCAN_UPPER * cp, scan_points)
            if mode.order == 0:
                if not brackets:
                    raise BranchLost(mode, fd, "(扫描未找到根)")
                bracket = min(brackets, key=lambda b: abs(math.log(b[0] * b[1]) / 2 - math.log(asymptote)))
            else:
                if len(brackets) <= mode.order:
                    continue
                bracket = brackets[mode.order]
                logger.debug("%s 起始于 fd = %.6g Hz·m" % (mode.name, fd))
        else:
            guess = _predict(mode, mat, omegas, ks, omega, cutoff_omega)
            brackets = _scan(g, guess * (1 - window), guess * (1 + window), CONTINUATION_STEPS + 1, geometric=False)
            if not brackets:
                raise BranchLost(mode, fd, "(延拓窗口内无变号，请加密 fd 网格)")
            bracket = min(brackets, key=lambda b: abs(b[0] + b[1] - 2 * guess))
        c = _refine(g, bracket, rtol)
        fds.append(fd)
        omegas.append(omega)
        ks.append(omega / c)

    if len(ks) < 2:
        raise EmptyRange("%s 在给定 fd 网格内不存在（截止 fd = %.6g Hz·m）" % (mode.name, cutoff))
    k = np.array(ks)
    omega = np.array(omegas)
    if np.any(np.diff(k) <= 0):
        bad = int(np.flatnonzero(np.diff(k) <= 0)[0]) + 1
        raise BranchLost(mode, fds[bad], "(波数未单调递增，疑似跳支)")
    c_group = np.empty_like(k)
    c_group[1:-1] = (omega[2:] - omega[:-2]) / (k[2:] - k[:-2])
    c_group[0] = (omega[1] - omega[0]) / (k[1] - k[0])
    c_group[-1] = (omega[-1] - omega[-2]) / (k[-1] - k[-2])
    curve = DispersionCurve(mode, fds, k, omega / k, c_group, d)
    logger.debug("%s 追踪完毕：%s" % (mode.name, curve))
    return curve


def trace_modes(
    mat: PlateMaterial, names: Iterable[str], fd_grid: Optional[Iterable[float]] = None
) -> Dict[str, DispersionCurve]:
    """Traces every named mode ("S0", "A0", "S1", "A1") on a shared grid"""
    modes = [LambMode.parse(name) for name in names]
    grid = default_fd_grid() if fd_grid is None else np.asarray(list(fd_grid), dtype=float)
    return {mode.name: trace_mode(mat, mode, grid) for mode in modes}


# endregion


def fastest_group_speed(
    curve: DispersionCurve, fd_range: Optional[Tuple[float, float]] = None
) -> Tuple[float, float]:
    """(c_max, fd_at_max) over `fd_range`, earliest fd on ties"""
    lo, hi = fd_range if fd_range is not None else curve.fd_range
    mask = (curve.fd >= lo) & (curve.fd <= hi)
    if not np.any(mask):
        raise EmptyRange("%s 在 fd ∈ [%s, %s] 内无样本" % (curve.name, lo, hi))
    idx = np.flatnonzero(mask)
    best = idx[int(np.argmax(curve.c_group[idx]))]
    return float(curve.c_group[best]), float(curve.fd[best])


def curves_to_frame(curves: Iterable[DispersionCurve]) -> pd.DataFrame:
    frames = [
        pd.DataFrame(
            {
                "fd_Hz_m": curve.fd,
                "k_rad_per_m": curve.k,
                "c_phase_m_s": curve.c_phase,
                "c_group_m_s": curve.c_group,
                "mode": curve.name,
            }
        )
        for curve in curves
    ]
    if not frames:
        return pd.DataFrame(columns=CSV_COLUMNS)
    return pd.concat(frames, ignore_index=True)[CSV_COLUMNS]


def write_curves_csv(curves: Iterable[DispersionCurve], path: str) -> str:
    curves_to_frame(curves).to_csv(path, index=False)
    return path
