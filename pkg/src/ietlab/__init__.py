"""Exact-arithmetic toolkit for the reversal interval exchanges ``T_N``."""

from .core import FiniteIET, HalfOpenInterval, Rat, format_rat, parse_rat, rmn_build, validate
from .decomposition import PeriodSpectrum, decompose, lattice_oracle, locate
from .orbits import first_return_map, least_period_direct, orbit
from .reversal import ReversalFamilyMap, compose_restricted, tn_eval, tn_inverse

__all__ = [
    "FiniteIET", "HalfOpenInterval", "PeriodSpectrum", "Rat", "ReversalFamilyMap",
    "compose_restricted", "decompose", "first_return_map", "format_rat", "lattice_oracle",
    "least_period_direct", "locate", "orbit", "parse_rat", "rmn_build", "tn_eval", "tn_inverse", "validate",
]
