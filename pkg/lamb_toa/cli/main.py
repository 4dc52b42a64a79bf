# -*- coding: utf-8 -*-
from lamb_toa.cli import global_args as gargs, parse_args, report_progress, setup_logging
from lamb_toa.cli.config import SWEEP_KINDS, ConfigError, RunConfig, load_config
from lamb_toa.common import LambToaException
from lamb_toa.dispersion import LambMode, curves_to_frame, fastest_group_speed, generation_fd_grid, trace_modes
from lamb_toa.estimators import enumerate_estimators
from lamb_toa.estimators.aic import AicParams
from lamb_toa.harness import (
    SweepResult,
    aic_window_sweep,
    cutoff_sweep,
    default_reference_channel,
    mer_sweep,
    relative_times,
    sla_grid,
    sla_histogram,
    tc_sweep,
)
from lamb_toa.signal import (
    BandNotCovered,
    Waveform,
    ZeroSignal,
    add_noise,
    channel_seed,
    distances,
    effective_distances,
    noise_floor,
    read_waveforms_csv,
    reference_markers,
    stats,
    synthesize_channels,
    write_waveforms_csv,
)
from lamb_toa.signal.profiles import get_profile

import json, logging, math, os, sys
import numpy as np
import pandas as pd

logger = logging.getLogger("toa-cli")

EXIT_OK, EXIT_NOT_FOUND, EXIT_ERROR = 0, 1, 2
PICK_COLUMNS = ["channel", "method", "time_s", "index", "frequency_hz", "in_coi", "found"]


# region Output
def _builtin(obj):
    """JSON-ready copy: numpy values become Python ones, NaN and inf become null"""
    if isinstance(obj, dict):
        return {str(k): _builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_builtin(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _builtin(obj.tolist())
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def write_json(obj, path: str) -> str:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(_builtin(obj), f, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
        f.write("\n")
    logger.debug("JSON -> %s" % path)
    return path


def write_table(frame: pd.DataFrame, cfg: RunConfig, name: str):
    for fmt in cfg.table_formats():
        path = os.path.join(cfg.outputs.directory, "%s.%s" % (name, fmt))
        if fmt == "csv":
            frame.to_csv(path, index=False)
        else:
            write_json(frame.to_dict(orient="records"), path)
        logger.info("  - %s" % path)


def _output(cfg: RunConfig, name: str) -> str:
    return os.path.join(cfg.outputs.directory, name)


def _svg(cfg: RunConfig) -> bool:
    return "svg" in cfg.outputs.formats


# endregion


def _markers(cfg: RunConfig, impact=None):
    return reference_markers(
        cfg.layout,
        cfg.generation.impact if impact is None else impact,
        cfg.dispersion.c_s0_max,
        cfg.dispersion.c_a0_max,
    )


def _read_channels(cfg: RunConfig):
    path = cfg.input.waveforms
    if path is None:
        raise ConfigError("input.waveforms", "未指定波形文件")
    channels = read_waveforms_csv(path, expected_dt=cfg.sampling.dt)
    logger.info("读取 %d 个通道 : %s" % (len(channels), ", ".join(w.name for w in channels)))
    return channels


def _method_options(cfg: RunConfig, name: str) -> dict:
    return {**enumerate_estimators()[name].options, **cfg.methods.get(name, {})}


def cmd_dispersion(cfg: RunConfig, method=None) -> int:
    modes = cfg.dispersion.modes
    if not modes:
        logger.warning("dispersion.modes 为空，无需计算")
        return EXIT_OK
    logger.info("追踪频散曲线 : %s" % ", ".join(modes))
    curves = list(trace_modes(cfg.material, modes, cfg.fd_grid).values())
    summary = {"material": cfg.material.to_dict(), "modes": {}}
    for curve in curves:
        c_max, fd_at = fastest_group_speed(curve)
        summary["modes"][curve.name] = {
            "fd_range": list(curve.fd_range),
            "c_phase_first": curve.c_phase[0],
            "c_group_first": curve.c_group[0],
            "c_group_max": c_max,
            "fd_at_c_group_max": fd_at,
        }
        logger.info(
            "  - %s : fd %.6g ~ %.6g Hz·m , c_g,max = %.1f m/s @ %.6g Hz·m"
            % (curve.name, curve.fd_range[0], curve.fd_range[1], c_max, fd_at)
        )
    write_table(curves_to_frame(curves), cfg, "dispersion")
    write_json(summary, _output(cfg, "dispersion_summary.json"))
    if _svg(cfg):
        from lamb_toa.cli.plots import plot_dispersion

        plot_dispersion(curves, _output(cfg, "dispersion.svg"))
    return EXIT_OK


def _apply_noise(cfg: RunConfig, index: int, w: Waveform) -> Waveform:
    noise = cfg.noise
    if noise.snr_db is not None:
        try:
            w = add_noise(w, noise.snr_db, channel_seed(noise.seed, index))
        except ZeroSignal:
            logger.warning("%s 为全零信号，跳过 SNR 加噪" % w.name)
    if noise.floor_sigma > 0:
        w = noise_floor(w, noise.floor_sigma, [*channel_seed(noise.seed, index), 1])
    return w


def cmd_generate(cfg: RunConfig, method=None) -> int:
    g = cfg.generation
    dt, n = cfg.sampling.dt, cfg.samples
    impact = cfg.layout.impact_index(g.impact)
    profile = get_profile(g.profile)
    profile.update_config(g.profile_params)
    source = profile.build(dt, n)
    logger.info("冲击力模型 : %s - %s" % (g.profile, profile.__desc__))
    weights = {LambMode.parse(k).name: float(v) for k, v in g.mode_weights.items()}
    active = [name for name, weight in weights.items() if weight != 0]
    if active:
        curves = trace_modes(cfg.material, active, generation_fd_grid(g.fd_max))
        try:
            channels = synthesize_channels(cfg.layout, impact, source, curves, weights, bool(g.geometric_spreading))
        except BandNotCovered as e:
            logger.error(str(e))
            return EXIT_ERROR
    else:
        logger.warning("所有模态权重为 0，生成全零信号")
        channels = [Waveform(np.zeros(n), dt, 0.0, name) for name in cfg.layout.sensor_names]
    channels = [_apply_noise(cfg, i, w) for i, w in enumerate(channels)]

    markers = _markers(cfg, impact)
    r, r_eff = distances(cfg.layout, impact), effective_distances(cfg.layout, impact)
    summary = {
        "impact": cfg.layout.impact_names[impact],
        "profile": g.profile,
        "mode_weights": weights,
        "noise": dict(cfg.noise),
        "samples": n,
        "dt": dt,
        "channels": {},
    }
    for w, m, distance, effective in zip(channels, markers, r, r_eff):
        s = stats(w)
        summary["channels"][w.name] = {
            "distance_m": distance,
            "effective_distance_m": effective,
            "rms": s.rms,
            "energy": s.energy,
            "t_s0_s": m.t_s0,
            "t_a0_s": m.t_a0,
        }
        logger.info("  - %s : r = %.1f mm , rms = %.4g" % (w.name, distance * 1e3, s.rms))
    path = write_waveforms_csv(channels, _output(cfg, "waveforms.csv"))
    logger.info("  - %s" % path)
    write_json(summary, _output(cfg, "generate_summary.json"))
    if _svg(cfg):
        from lamb_toa.cli.plots import plot_signals

        plot_signals(channels, markers, path=_output(cfg, "signals.svg"))
    return EXIT_OK


def _selected_methods(cfg: RunConfig, method):
    if method is None:
        return dict(cfg.methods)
    available = enumerate_estimators()
    if method not in available:
        raise ConfigError("--method", "未知方法 %r (可选：%s)" % (method, ", ".join(available)))
    opts = _method_options(cfg, method)
    available[method].check_options(opts, 1.0 / cfg.sampling.dt)
    return {method: opts}


def _scalogram_outputs(cfg: RunConfig, scs, picks):
    if cfg.outputs.scalogram_csv:
        for sc in scs:
            sc.to_frame().to_csv(_output(cfg, "scalogram_%s.csv" % sc.name), index=False)
    if _svg(cfg):
        from lamb_toa.cli.plots import plot_scalogram

        for sc, per_channel in zip(scs, picks):
            plot_scalogram(sc, _output(cfg, "scalogram_%s.svg" % sc.name), per_channel)


def cmd_pick(cfg: RunConfig, method=None) -> int:
    channels = _read_channels(cfg)
    available = enumerate_estimators()
    estimates = []
    summary = {"input": os.path.basename(cfg.input.waveforms), "methods": {}}
    for name, opt in _selected_methods(cfg, method).items():
        module = available[name]
        module.update_config(opt)
        logger.info("方法 %s - %s" % (name, module.__desc__))
        for k, v in sorted(opt.items()):
            logger.debug("  - %s : %s" % (k, v))
        try:
            if name == "cwt":
                scs = module.scalograms(channels)
                picks = module.pick_scalograms(scs)
                found = [e for per_channel in picks for e in per_channel.values()]
                for sc, per_channel in zip(scs, picks):
                    hits = [e for e in per_channel.values() if e.found]
                    logger.info(
                        "  - %s : %d / %d 个频率找到 , %d 个位于 COI 内"
                        % (sc.name, len(hits), len(per_channel), sum(e.in_coi for e in hits))
                    )
                _scalogram_outputs(cfg, scs, picks)
            else:
                found = module.pick_channels(channels)
                for e in found:
                    logger.info("  - %s" % e)
        except LambToaException as e:
            logger.error("%s : %s" % (name, e))
            continue
        estimates += found
        summary["methods"][name] = {
            "options": opt,
            "estimates": len(found),
            "found": sum(e.found for e in found),
        }
    records = [e.to_dict() for e in estimates]
    params = sorted({k for r in records for k in r if k not in PICK_COLUMNS})
    write_table(pd.DataFrame(records, columns=PICK_COLUMNS + params), cfg, "picks")
    write_json(summary, _output(cfg, "picks_summary.json"))
    if _svg(cfg):
        from lamb_toa.cli.plots import plot_signals

        plot_signals(channels, _markers(cfg), estimates, _output(cfg, "picks.svg"))
    if not any(e.found for e in estimates):
        logger.warning("所有估计均未找到到达时间")
        return EXIT_NOT_FOUND
    return EXIT_OK


def _channel(channels, name):
    for w in channels:
        if w.name == name:
            return w
    raise ConfigError("sweep.channel", "通道 %r 不在输入文件中 (%s)" % (name, ", ".join(w.name for w in channels)))


def _cwt_sweep(cfg: RunConfig, channels, extra: dict) -> SweepResult:
    module = enumerate_estimators()["cwt"]
    module.update_config(_method_options(cfg, "cwt"))
    scs = module.scalograms(channels)
    picks = module.pick_scalograms(scs)
    per_channel = {sc.name: p for sc, p in zip(scs, picks)}
    reference = cfg.sweep.reference or default_reference_channel(channels)
    table = relative_times(per_channel, reference)
    write_table(table.reset_index(), cfg, "sweep_relative")
    spreads = {}
    for name in table.columns:
        column = table[name].to_numpy(dtype=float)
        column = column[np.isfinite(column)]
        spreads[name] = float(column.max() - column.min()) if column.size else None
        if spreads[name] is not None:
            logger.info("  - %s : 相对时间极差 %.3f us (%.2f dt)" % (name, spreads[name] * 1e6, spreads[name] / cfg.sampling.dt))
    extra.update({"reference": reference, "relative_spread_s": spreads})
    _scalogram_outputs(cfg, scs, picks)
    names = [sc.name for sc in scs]
    freqs = sorted(per_channel[reference])
    return SweepResult(
        ["frequency_hz"],
        [(f,) for f in freqs],
        names,
        [[per_channel[n][f] for n in names] for f in freqs],
    )


def cmd_sweep(cfg: RunConfig, method=None) -> int:
    s = cfg.sweep
    kind = method or s.kind
    if kind not in SWEEP_KINDS:
        raise ConfigError("--method", "未知扫描 %r (可选：%s)" % (kind, ", ".join(SWEEP_KINDS)))
    channels = _read_channels(cfg)
    targets = channels if s.channel is None else [_channel(channels, s.channel)]
    logger.info("参数扫描 : %s" % kind)
    extra = {}
    if kind == "tc":
        results = [tc_sweep(channels, s.p_values, report_progress)]
    elif kind == "sla":
        t_dom = float(_method_options(cfg, "sla")["t_dom"])
        results = [sla_grid(w, s.alphas, s.betas, t_dom, progress=report_progress) for w in targets]
        write_table(
            pd.concat([r.aggregates.assign(channel=r.channels[0]) for r in results], ignore_index=True),
            cfg,
            "sweep_aggregates",
        )
        write_table(
            pd.concat(
                [sla_histogram(r).melt(id_vars="time_s", var_name="channel", value_name="count") for r in results],
                ignore_index=True,
            ),
            cfg,
            "sweep_histogram",
        )
    elif kind == "mer":
        t_dom = float(_method_options(cfg, "mer")["t_dom"])
        results = [mer_sweep(w, s.mer_alphas, t_dom, progress=report_progress) for w in targets]
    elif kind == "aic":
        opt = _method_options(cfg, "aic")
        params = AicParams(*(float(opt[k]) for k in AicParams._fields))
        results = [
            aic_window_sweep(w, params, s.aic_values, s.aic_variant, s.aic_axis, report_progress) for w in targets
        ]
    elif kind == "cutoff":
        picker = str(s.picker).upper()
        picker_params = _method_options(cfg, "aic" if picker == "AIC_GM" else "mer")
        results = [cutoff_sweep(targets, s.cutoffs, picker, picker_params, report_progress)]
    else:
        results = [_cwt_sweep(cfg, channels, extra)]

    markers = _markers(cfg)
    write_table(pd.concat([r.to_frame() for r in results], ignore_index=True), cfg, "sweep")
    write_json(
        {
            "kind": kind,
            "results": [r.summary() for r in results],
            "markers": [m._asdict() for m in markers],
            **extra,
        },
        _output(cfg, "sweep_summary.json"),
    )
    if _svg(cfg):
        from lamb_toa.cli.plots import plot_sweep

        plot_sweep(results, markers, _output(cfg, "sweep.svg"), logx=kind in ("tc", "cutoff"))
    found = sum(e.found for r in results for row in r.estimates for e in row)
    logger.info("估计总数 %d , 找到 %d" % (sum(r.count for r in results), found))
    if not found:
        logger.warning("所有估计均未找到到达时间")
        return EXIT_NOT_FOUND
    return EXIT_OK


def cmd_markers(cfg: RunConfig, method=None) -> int:
    rows = []
    for impact in cfg.layout.impact_names:
        r, r_eff = distances(cfg.layout, impact), effective_distances(cfg.layout, impact)
        for m, distance, effective in zip(_markers(cfg, impact), r, r_eff):
            rows.append(
                {
                    "impact": impact,
                    "sensor": m.sensor,
                    "distance_m": distance,
                    "effective_distance_m": effective,
                    "t_s0_s": m.t_s0,
                    "t_a0_s": m.t_a0,
                }
            )
            logger.info(
                "  - %s/%s : r = %.1f mm , t_S0 = %.1f us , t_A0 = %.1f us"
                % (impact, m.sensor, distance * 1e3, m.t_s0 * 1e6, m.t_a0 * 1e6)
            )
    write_table(pd.DataFrame(rows), cfg, "markers")
    return EXIT_OK


COMMANDS = {
    "dispersion": cmd_dispersion,
    "generate": cmd_generate,
    "pick": cmd_pick,
    "sweep": cmd_sweep,
    "markers": cmd_markers,
}


def __main__():
    args = parse_args(sys.argv)
    if not args:
        return EXIT_ERROR
    setup_logging(logging.DEBUG if args.verbose else logging.INFO)
    try:
        cfg = load_config(args.config, args.out, args.seed, args.format)
    except ConfigError as e:
        logger.error("%s" % e)
        return EXIT_ERROR
    logger.info("配置信息：")
    for k, v in gargs.items():
        logger.info("  - %s : %s" % (k, args[k]))
    logger.info("  - 输出目录 : %s" % cfg.outputs.directory)
    try:
        os.makedirs(cfg.outputs.directory, exist_ok=True)
        code = COMMANDS[args.command](cfg, args.method)
    except (LambToaException, OSError) as e:
        logger.error("%s" % e)
        return EXIT_ERROR
    finally:
        from lamb_toa.cli import precentage_progress

        precentage_progress.close()
    if code == EXIT_OK:
        logger.info("任务完毕")
    return code
