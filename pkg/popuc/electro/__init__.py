from popuc.electro.equilibrium import (
    interlacing_check,
    normal_equilibrium_residual,
    p_double_prime_identity,
    rotate,
    total_equilibrium_residual,
)
from popuc.electro.generators import generators_from_measure, generators_from_points
from popuc.electro.lame import lame_from_fraction, lame_from_h, lame_normal_form
from popuc.electro.models import Charge, ChargeConfiguration, EquilibriumReport, LameForm

__all__ = [
    "Charge",
    "ChargeConfiguration",
    "EquilibriumReport",
    "LameForm",
    "generators_from_measure",
    "generators_from_points",
    "interlacing_check",
    "lame_from_fraction",
    "lame_from_h",
    "lame_normal_form",
    "normal_equilibrium_residual",
    "p_double_prime_identity",
    "rotate",
    "total_equilibrium_residual",
]
