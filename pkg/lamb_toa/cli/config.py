# -*- coding: utf-8 -*-
"""Run configuration: one JSON document, `"schema": 1`

Every block is merged over `DEFAULT`, validated, and exposed as an
`AttribuitedDict`. Validation failures name the offending field by its
JSON path (e.g. `dispersion.modes[2]`).
"""
import copy
import json
import logging
import os
from contextlib import contextmanager
from typing import Optional

import numpy as np

from lamb_toa.cli import AttribuitedDict
from lamb_toa.common import LambToaException, round_half_up
from lamb_toa.dispersion import LambMode, PlateMaterial
from lamb_toa.estimators import enumerate_estimators
from lamb_toa.signal import REFERENCE_LAYOUT, SensorLayout
from lamb_toa.signal.profiles import get_profile

logger = logging.getLogger("toa-cli")

SCHEMA = 1
FORMATS = ("csv", "json", "svg")
SWEEP_KINDS = ("tc", "sla", "mer", "aic", "cutoff", "cwt")

DEFAULT = {
    "schema": SCHEMA,
    "material": {
        "youngs_modulus": 69e9,
        "poisson_ratio": 0.33,
        "density": 2660.0,
        "half_thickness": 1e-3,
    },
    "layout": {
        **REFERENCE_LAYOUT.to_dict(),
        "sensor_names": None,
        "impact_names": None,
    },
    "sampling": {"dt": 0.2e-6, "duration": 3e-3},
    "dispersion": {
        "modes": ["S0", "A0"],
        "fd_min": 1.0,
        "fd_max": 5000.0,
        "fd_step": 1.0,
        "c_s0_max": 5392.0,
        "c_a0_max": 3156.0,
    },
    "generation": {
        "impact": "I1",
        "profile": "idealized",
        "profile_params": {},
        "mode_weights": {"S0": 0.1, "A0": 1.0},
        "geometric_spreading": True,
        "fd_max": 1000.0,
    },
    "noise": {"snr_db": None, "seed": 0, "floor_sigma": 0.0},
    "input": {"waveforms": None},
    "methods": {"tc": {}, "sla": {}, "mer": {}, "aic": {}, "cwt": {}},
    "sweep": {
        "kind": "tc",
        "channel": None,
        "p_values": [1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1],
        "alphas": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        "betas": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        "mer_alphas": [5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60],
        "aic_axis": "ub",
        "aic_variant": "both",
        "aic_values": [100e-6, 150e-6, 200e-6, 250e-6, 300e-6, 350e-6, 400e-6, 450e-6, 500e-6],
        "cutoffs": [5e3, 10e3, 20e3, 50e3, 100e3],
        "picker": "AIC_GM",
        "reference": None,
    },
    "outputs": {"directory": "out", "formats": ["csv", "json", "svg"], "scalogram_csv": False},
}


class ConfigError(LambToaException, ValueError):
    def __init__(self, path, message) -> None:
        self.path = path
        self.message = message
        super().__init__("配置错误 %s : %s" % (path, message))


@contextmanager
def field(path: str):
    """Re-raises anything a validator throws as `ConfigError` at `path`"""
    try:
        yield
    except ConfigError:
        raise
    except (LambToaException, ValueError, TypeError, KeyError, IndexError) as e:
        raise ConfigError(path, str(e))


def _merge(default: dict, override: dict, path: str = "") -> dict:
    result = copy.deepcopy(default)
    for key, value in override.items():
        where = "%s.%s" % (path, key) if path else key
        if key not in default:
            raise ConfigError(where, "未知字段")
        # free-form blocks: keys are mode / method / profile parameter names
        if isinstance(default[key], dict) and default[key] and key not in ("methods", "mode_weights"):
            if not isinstance(value, dict):
                raise ConfigError(where, "须为 JSON 对象")
            result[key] = _merge(default[key], value, where)
        else:
            result[key] = copy.deepcopy(value)
    return result


def _increasing(path: str, values, positive=True):
    with field(path):
        values = [float(v) for v in values]
    if not values:
        raise ConfigError(path, "不可为空")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(path, "须严格递增")
    if positive and values[0] <= 0:
        raise ConfigError(path, "须为正数")
    return values


class RunConfig:
    """Validated run configuration

    `material` and `layout` are built objects; the other blocks stay
    dictionaries with attribute access.
    """

    def __init__(self, doc: dict, base_dir: str = ".") -> None:
        if doc.get("schema") != SCHEMA:
            raise ConfigError("schema", "不支持的版本 %r (当前为 %d)" % (doc.get("schema"), SCHEMA))
        doc = _merge(DEFAULT, doc)
        self.doc = doc
        self.base_dir = base_dir
        with field("material"):
            self.material = PlateMaterial(**doc["material"])
        with field("layout"):
            self.layout = SensorLayout(**doc["layout"])
        self.sampling = AttribuitedDict(doc["sampling"])
        self.dispersion = AttribuitedDict(doc["dispersion"])
        self.generation = AttribuitedDict(doc["generation"])
        self.noise = AttribuitedDict(doc["noise"])
        self.input = AttribuitedDict(doc["input"])
        self.sweep = AttribuitedDict(doc["sweep"])
        self.outputs = AttribuitedDict(doc["outputs"])
        self._check_sampling()
        self._check_dispersion()
        self._check_generation()
        self._check_noise()
        self.methods = self._check_methods(doc["methods"])
        self._check_sweep()
        self._check_io()

    # region Validators
    def _check_sampling(self):
        dt, duration = self.sampling.dt, self.sampling.duration
        if not (isinstance(dt, (int, float)) and dt > 0):
            raise ConfigError("sampling.dt", "须为正数")
        if not (isinstance(duration, (int, float)) and duration >= 2 * dt):
            raise ConfigError("sampling.duration", "须至少为两个采样间隔")

    def _check_dispersion(self):
        d = self.dispersion
        if not isinstance(d.modes, list):
            raise ConfigError("dispersion.modes", "须为列表")
        for i, name in enumerate(d.modes):
            with field("dispersion.modes[%d]" % i):
                LambMode.parse(name)
        for key in ("fd_min", "fd_max", "fd_step", "c_s0_max", "c_a0_max"):
            if not (isinstance(d[key], (int, float)) and d[key] > 0):
                raise ConfigError("dispersion.%s" % key, "须为正数")
        if not d.fd_max > d.fd_min:
            raise ConfigError("dispersion.fd_max", "须大于 fd_min")

    def _check_generation(self):
        g = self.generation
        with field("generation.impact"):
            self.layout.impact_index(g.impact)
        with field("generation.profile"):
            profile = get_profile(g.profile)
        for key in g.profile_params:
            if key not in profile.options:
                raise ConfigError("generation.profile_params.%s" % key, "未知参数 (可选：%s)" % ", ".join(profile.options))
        if not isinstance(g.mode_weights, dict):
            raise ConfigError("generation.mode_weights", "须为 JSON 对象")
        for name, weight in g.mode_weights.items():
            with field("generation.mode_weights.%s" % name):
                LambMode.parse(name)
                float(weight)
        if not (isinstance(g.fd_max, (int, float)) and g.fd_max > 1):
            raise ConfigError("generation.fd_max", "须大于 1 Hz·m")

    def _check_noise(self):
        n = self.noise
        if n.snr_db is not None and not isinstance(n.snr_db, (int, float)):
            raise ConfigError("noise.snr_db", "须为数值或 null")
        if not isinstance(n.seed, int) or n.seed < 0:
            raise ConfigError("noise.seed", "须为非负整数")
        if not (isinstance(n.floor_sigma, (int, float)) and n.floor_sigma >= 0):
            raise ConfigError("noise.floor_sigma", "不可为负")

    def _check_methods(self, methods: dict) -> AttribuitedDict:
        if not isinstance(methods, dict):
            raise ConfigError("methods", "须为 JSON 对象")
        available = enumerate_estimators()
        fs = 1.0 / self.sampling.dt
        result = AttribuitedDict()
        for name, opt in methods.items():
            if name not in available:
                raise ConfigError("methods.%s" % name, "未知方法 (可选：%s)" % ", ".join(available))
            module = available[name]
            opt = opt or {}
            for key in opt:
                if key not in module.options:
                    raise ConfigError("methods.%s.%s" % (name, key), "未知参数 (可选：%s)" % ", ".join(module.options))
            merged = {**module.options, **opt}
            with field("methods.%s" % name):
                module.check_options(merged, fs)
            result[name] = merged
        return result

    def _check_sweep(self):
        s = self.sweep
        if s.kind not in SWEEP_KINDS:
            raise ConfigError("sweep.kind", "未知扫描 %r (可选：%s)" % (s.kind, ", ".join(SWEEP_KINDS)))
        _increasing("sweep.p_values", s.p_values)
        for key in ("alphas", "betas", "mer_alphas"):
            _increasing("sweep.%s" % key, s[key])
        _increasing("sweep.aic_values", s.aic_values)
        _increasing("sweep.cutoffs", s.cutoffs)
        if s.aic_axis not in ("ub", "t_fb", "t_fa"):
            raise ConfigError("sweep.aic_axis", "可选：ub, t_fb, t_fa")
        if str(s.aic_variant).upper() not in ("GM", "LM", "BOTH"):
            raise ConfigError("sweep.aic_variant", "可选：GM, LM, both")
        if str(s.picker).upper() not in ("AIC_GM", "MER"):
            raise ConfigError("sweep.picker", "可选：AIC_GM, MER")

    def _check_io(self):
        formats = self.outputs.formats
        if not isinstance(formats, list) or any(f not in FORMATS for f in formats):
            raise ConfigError("outputs.formats", "可选：%s" % ", ".join(FORMATS))
        self.outputs["directory"] = self.resolve(self.outputs.directory)
        if self.input.waveforms is not None:
            self.input["waveforms"] = self.resolve(self.input.waveforms)

    # endregion

    def resolve(self, path: str) -> str:
        """`path` relative to the config file's directory"""
        return os.path.normpath(os.path.join(self.base_dir, str(path)))

    @property
    def samples(self) -> int:
        return round_half_up(self.sampling.duration / self.sampling.dt)

    @property
    def fd_grid(self) -> np.ndarray:
        d = self.dispersion
        count = int(np.floor((d.fd_max - d.fd_min) / d.fd_step + 1e-9)) + 1
        return d.fd_min + d.fd_step * np.arange(count)

    def table_formats(self):
        return [f for f in self.outputs.formats if f in ("csv", "json")]

    def to_dict(self) -> dict:
        return copy.deepcopy(self.doc)


def load_config(
    path: Optional[str] = None,
    out: Optional[str] = None,
    seed: Optional[int] = None,
    fmt: Optional[str] = None,
) -> RunConfig:
    """Reads `path` (or the defaults) and applies the command-line overrides"""
    if path is None:
        doc, base_dir = {"schema": SCHEMA}, os.getcwd()
    else:
        if not os.path.isfile(path):
            raise ConfigError("--config", "文件不存在：%s" % path)
        with open(path, "r", encoding="utf-8") as f:
            try:
                doc = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError("--config", "JSON 解析失败：%s" % e)
        if not isinstance(doc, dict):
            raise ConfigError("--config", "顶层须为 JSON 对象")
        base_dir = os.path.dirname(os.path.abspath(path))
    doc = copy.deepcopy(doc)
    if out is not None:
        doc.setdefault("outputs", {})["directory"] = os.path.abspath(out)
    if seed is not None:
        doc.setdefault("noise", {})["seed"] = int(seed)
    config = RunConfig(doc, base_dir)
    if fmt is not None:
        config.outputs["formats"] = [fmt] + [f for f in config.outputs.formats if f == "svg"]
    logger.debug("配置 : %s (seed = %s , 格式 = %s)" % (path or "默认", config.noise.seed, config.outputs.formats))
    return config
