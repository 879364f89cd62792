"""Exact singularity analysis of the discrete KdV equation on a lattice."""

from .errors import (
    DegenerateTaishi,
    DivisionBySeriesZero,
    DkdvError,
    InconsistentStrip,
    PrecisionExhausted,
    ScenarioError,
    SeedConflict,
    UndefinedValuation,
)
from .exactnum import GF_DEFAULT, QQ, LaurentSeries, PrimeField, RationalField
from .lattice import EvolutionParams, Grid, SeedSpec, evolve, simulate
from .rules import WeightVector, closed_form_taishi, interact_diagonal, scenario_predict

__all__ = [
    "DegenerateTaishi",
    "DivisionBySeriesZero",
    "DkdvError",
    "InconsistentStrip",
    "PrecisionExhausted",
    "ScenarioError",
    "SeedConflict",
    "UndefinedValuation",
    "GF_DEFAULT",
    "QQ",
    "LaurentSeries",
    "PrimeField",
    "RationalField",
    "EvolutionParams",
    "Grid",
    "SeedSpec",
    "evolve",
    "simulate",
    "WeightVector",
    "closed_form_taishi",
    "interact_diagonal",
    "scenario_predict",
]
