# -*- coding: utf-8 -*-
__desc__ = """lamb-toa 板中 Lamb 波频散与到达时间估计工具"""
__version__ = "0.3.1"
