"""Monodromy orbits of polarizations on lattices of generalized Kummer type."""

from .divisors import coverage, divisor_invariant, uniruled_divisor
from .eichler import Isometry, construct_isometry, eichler_equivalent, transvection
from .kummer import (
    PolarizationType,
    equivalent,
    kummer_lattice,
    normal_form,
    orbit_enumerate,
    realize,
    saturation_invariant,
)
from .lattice_core import GramLattice, LatticeError, discriminant_group, smith_normal_form

__all__ = [
    "GramLattice", "Isometry", "LatticeError", "PolarizationType", "construct_isometry", "coverage",
    "discriminant_group", "divisor_invariant", "eichler_equivalent", "equivalent", "kummer_lattice",
    "normal_form", "orbit_enumerate", "realize", "saturation_invariant", "smith_normal_form",
    "transvection", "uniruled_divisor",
]
