"""Precision substrate: ExtReal scalars, jets, Bernoulli numbers, constants."""

from fractions import Fraction as ExactRational

from .bernoulli import bernoulli
from .constants import const_euler_gamma, const_pi
from .extreal import DEFAULT_PREC, MIN_PREC, ExtReal, decimal_digits, ext, rel_error
from .jets import (
    Jet,
    jet_add,
    jet_compose_affine,
    jet_differentiate,
    jet_exp_ode,
    jet_mul,
    jet_reciprocal,
    jet_scale,
)

__all__ = [
    "DEFAULT_PREC",
    "MIN_PREC",
    "ExactRational",
    "ExtReal",
    "Jet",
    "bernoulli",
    "const_euler_gamma",
    "const_pi",
    "decimal_digits",
    "ext",
    "jet_add",
    "jet_compose_affine",
    "jet_differentiate",
    "jet_exp_ode",
    "jet_mul",
    "jet_reciprocal",
    "jet_scale",
    "rel_error",
]
