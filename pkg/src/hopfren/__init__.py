"""Hopf-algebraic renormalisation of scalar Feynman graphs with exact
arithmetic: graphs and woods, the graph Hopf algebra, subtraction schemes on
Laurent series and momentum polynomials, Bogoliubov's recursion and the
exponential methods."""

from .degrees import DegreeFunction, critical_degree, validate_degree_function
from .graphs import FeynmanGraph, TheoryConfig, contract, power_counting, wood
from .hopf import GraphHopfAlgebra, LinearForm, char_inverse, convolve, exp_star, log_star
from .laurent import LaurentSeries
from .polynomial import MomentumPolynomial, taylor_jet
from .renorm import (
    BwhPair, RenormResult, bogoliubov, bwh_verify, exponential_left, exponential_right,
    forest_expansion_oracle, regularity_check,
)
from .schemes import SubtractionScheme, classify_scheme, lift_projector

__all__ = [
    "BwhPair", "DegreeFunction", "FeynmanGraph", "GraphHopfAlgebra", "LaurentSeries", "LinearForm",
    "MomentumPolynomial", "RenormResult", "SubtractionScheme", "TheoryConfig", "bogoliubov",
    "bwh_verify", "char_inverse", "classify_scheme", "contract", "convolve", "critical_degree",
    "exp_star", "exponential_left", "exponential_right", "forest_expansion_oracle",
    "lift_projector", "log_star", "power_counting", "regularity_check", "taylor_jet",
    "validate_degree_function", "wood",
]
