# -*- coding: utf-8 -*-
"""Lamb wave dispersion of an isotropic plate"""
from lamb_toa.dispersion.material import (
    ALUMINIUM,
    InvalidMaterial,
    PlateMaterial,
    bulk_speeds,
    flexural_speed,
    plate_axial_speed,
)
from lamb_toa.dispersion.solver import (
    A0,
    A1,
    MODES,
    S0,
    S1,
    BranchLost,
    DispersionCurve,
    EmptyRange,
    LambMode,
    ModeFamily,
    curves_to_frame,
    cutoff_fd,
    default_fd_grid,
    fastest_group_speed,
    generation_fd_grid,
    rayleigh_lamb_residual,
    trace_mode,
    trace_modes,
    write_curves_csv,
)
