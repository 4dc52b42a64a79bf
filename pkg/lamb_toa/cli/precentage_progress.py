# -*- coding: utf-8 -*-
try:
    from tqdm import tqdm
except ImportError:
    tqdm = None

tqdm_ = None


def report(current, max):
    global tqdm_
    if tqdm is None:
        return
    if tqdm_ is None:
        # maxinterval=0 disables tqdm's monitor thread
        tqdm_ = tqdm(unit="pt", maxinterval=0, leave=False)
    tqdm_.total = max
    tqdm_.n = current
    tqdm_.refresh()


def close():
    global tqdm_
    if tqdm_ is not None:
        tqdm_.close()
        tqdm_ = None
