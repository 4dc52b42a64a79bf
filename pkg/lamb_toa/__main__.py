# -*- coding: utf-8 -*-
import sys
from lamb_toa.cli.main import __main__

if __name__ == "__main__":
    sys.exit(__main__())
