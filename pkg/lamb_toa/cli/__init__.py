# -*- coding: utf-8 -*-
import argparse
import logging
import sys

from lamb_toa import __desc__, __version__, estimators
from lamb_toa.signal import profiles


class AttribuitedDict(dict):
    def __getattr__(self, name):
        try:
            return self[name]
        except KeyError:
            raise AttributeError(name)


COMMANDS = ["dispersion", "generate", "pick", "sweep", "markers"]
global_args = {
    "config": {"help": "JSON 配置文件 (schema 1)，缺省时使用内置默认配置 (2 mm 铝板，四传感器布局)"},
    "out": {"help": "输出目录，覆盖 outputs.directory"},
    "seed": {"help": "随机种子，覆盖 noise.seed", "type": int},
    "format": {"help": "表格输出格式，缺省按 outputs.formats", "choices": ["csv", "json"]},
    "method": {"help": "pick：仅运行该方法；sweep：覆盖 sweep.kind (tc, sla, mer, aic, cutoff, cwt)"},
    "verbose": {"help": "输出调试信息", "default": False, "action": "store_true"},
}
arg_epilog = """
命令：
    dispersion  -   追踪 dispersion.modes 的频散曲线，输出 CSV 与 SVG
    generate    -   以 generation 配置合成各传感器的频散信号 (可加噪)，输出 waveforms.csv
    pick        -   对 input.waveforms 运行 methods 中的估计方法
    sweep       -   参数扫描 (sweep.kind)，输出扫描表、JSON 摘要与带状图
    markers     -   各冲击点的最早 S0/A0 到达时刻表

环境变量：
    LAMB_TOA_THREADS    -   并行线程数上限 (缺省为 CPU 数)

退出码：0 成功，1 所有估计均未找到到达时间，2 配置或读写错误
配置格式详见 README
"""


def setup_logging(level=logging.INFO):
    from tqdm.std import tqdm as tqdm_c

    class SemaphoreStdout:
        @staticmethod
        def write(__s):
            # Blocks tqdm's output until write on this stream is done
            with tqdm_c.external_write_mode(file=sys.stdout, nolock=False):
                return sys.stdout.write(__s)

    import coloredlogs

    coloredlogs.DEFAULT_LOG_FORMAT = "[ %(asctime)s %(name)8s %(levelname)6s ] %(message)s"
    coloredlogs.install(level=level, stream=SemaphoreStdout, isatty=True)
    logging.getLogger("matplotlib").setLevel(logging.CRITICAL)
    logging.getLogger("PIL").setLevel(logging.CRITICAL)


def report_progress(current, max_val):
    from lamb_toa.cli import precentage_progress

    precentage_progress.report(current, max_val)


def _enumerate_estimators():
    return estimators.enumerate_estimators()


def _enumerate_profiles():
    return profiles.enumerate_profiles()


estimator_args = _enumerate_estimators()
profile_args = _enumerate_profiles()


def _plugin_help(plugins) -> str:
    return "\n".join(
        "  %s - %s\n   参数:%s" % (name, module.__desc__, module.__cfg_help__) for name, module in plugins.items()
    )


def _create_argparser():
    p = argparse.ArgumentParser(
        prog="lamb-toa",
        description="%s %s 使用帮助" % (__desc__, __version__),
        formatter_class=argparse.RawTextHelpFormatter,
        epilog=arg_epilog,
    )
    p.add_argument("command", choices=COMMANDS, help="子命令")
    g = p.add_argument_group("通用设置")
    for arg_key, arg in global_args.items():
        g.add_argument("--%s" % arg_key, **arg)
    p.add_argument_group('估计方法 (配置 "methods" 块)', _plugin_help(estimator_args))
    p.add_argument_group('冲击力模型 (配置 "generation.profile")', _plugin_help(profile_args))
    return p


def parse_args(args: list):
    """argv (program name first) -> AttribuitedDict, or None after printing help"""
    parser = _create_argparser()
    if len(args) < 2:
        parser.print_help()
        return None
    return AttribuitedDict(parser.parse_args(args[1:]).__dict__)
