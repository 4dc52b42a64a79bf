# -*- coding: utf-8 -*-
"""Isotropic plate material and its characteristic speeds"""
import math
from typing import Tuple

from lamb_toa.common import LambToaException


class InvalidMaterial(LambToaException, ValueError):
    def __init__(self, field, value, desc="") -> None:
        self.field = field
        self.value = value
        super().__init__("材料参数无效：%s = %r %s" % (field, value, desc))


class PlateMaterial:
    """Elastic constants of an isotropic plate

    `half_thickness` is d = h/2; every fd product in this package uses it.
    """

    youngs_modulus: float = 0.0
    poisson_ratio: float = 0.0
    density: float = 0.0
    half_thickness: float = 0.0

    def __init__(
        self, youngs_modulus: float, poisson_ratio: float, density: float, half_thickness: float
    ) -> None:
        for field, value in (
            ("youngs_modulus", youngs_modulus),
            ("density", density),
            ("half_thickness", half_thickness),
        ):
            if not value > 0:
                raise InvalidMaterial(field, value, "(须为正数)")
        if not 0 < poisson_ratio < 0.5:
            raise InvalidMaterial("poisson_ratio", poisson_ratio, "(须在 (0, 0.5) 内)")
        self.youngs_modulus = float(youngs_modulus)
        self.poisson_ratio = float(poisson_ratio)
        self.density = float(density)
        self.half_thickness = float(half_thickness)

    @property
    def lame_lambda(self) -> float:
        nu = self.poisson_ratio
        return self.youngs_modulus * nu / ((1 + nu) * (1 - 2 * nu))

    @property
    def shear_modulus(self) -> float:
        """Lamé's second parameter μ"""
        return self.youngs_modulus / (2 * (1 + self.poisson_ratio))

    @property
    def thickness(self) -> float:
        return 2 * self.half_thickness

    def to_dict(self) -> dict:
        return {
            "youngs_modulus": self.youngs_modulus,
            "poisson_ratio": self.poisson_ratio,
            "density": self.density,
            "half_thickness": self.half_thickness,
        }

    def __repr__(self) -> str:
        return "< E : %.4g Pa , nu : %s , rho : %s kg/m3 , d : %s m >" % (
            self.youngs_modulus,
            self.poisson_ratio,
            self.density,
            self.half_thickness,
        )


ALUMINIUM = PlateMaterial(69e9, 0.33, 2660.0, 1e-3)
"""2 mm aluminium sheet"""


def bulk_speeds(mat: PlateMaterial) -> Tuple[float, float]:
    """Pressure and shear wave speeds (m/s)"""
    lam, mu = mat.lame_lambda, mat.shear_modulus
    return math.sqrt((lam + 2 * mu) / mat.density), math.sqrt(mu / mat.density)


def plate_axial_speed(mat: PlateMaterial) -> float:
    """Low-frequency limit of S0: sqrt(E / (rho (1 - nu^2)))"""
    return math.sqrt(mat.youngs_modulus / (mat.density * (1 - mat.poisson_ratio ** 2)))


def flexural_speed(mat: PlateMaterial, omega: float) -> float:
    """Kirchhoff-Love bending wave phase speed, the low-frequency limit of A0"""
    h = mat.thickness
    bending_stiffness = mat.youngs_modulus * h ** 3 / (12 * (1 - mat.poisson_ratio ** 2))
    return (bending_stiffness / (mat.density * h)) ** 0.25 * math.sqrt(omega)
