# -*- coding: utf-8 -*-
"""Shared exceptions and helpers"""
import math
import os

THREADS_ENV = "LAMB_TOA_THREADS"


# region Exceptions
class LambToaException(Exception):
    """Root of every error raised by lamb_toa"""


class InvalidParameter(LambToaException, ValueError):
    def __init__(self, name, value, desc="") -> None:
        self.name = name
        self.value = value
        super().__init__("参数无效：%s = %r %s" % (name, value, desc))


class EmptyRange(LambToaException, ValueError):
    def __init__(self, desc) -> None:
        super().__init__("区间为空：%s" % desc)


class IndexOutOfRange(LambToaException, IndexError):
    def __init__(self, what, index, count) -> None:
        self.index = index
        self.count = count
        super().__init__("%s 索引越界：%s（共 %s 个）" % (what, index, count))


# endregion


def round_half_up(x: float) -> int:
    """Rounds .5 away from zero, unlike the builtin banker's `round`"""
    return int(math.floor(x + 0.5))


def check_file(path):
    if not os.path.isfile(path):
        raise FileNotFoundError("文件不存在：%s" % path)
    return path


def worker_count() -> int:
    """Parallelism cap, from $LAMB_TOA_THREADS or the CPU count"""
    value = os.environ.get(THREADS_ENV, "")
    try:
        count = int(value)
    except ValueError:
        count = 0
    return count if count > 0 else (os.cpu_count() or 1)
