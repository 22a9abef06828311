"""Generators for every matrix family and special construction."""

from .constructions import gen_almost_counterexample, gen_fat_ap
from .ensembles import gen_planted, gen_random, haar_orthogonal
from .exponential import gen_ac, gen_dirichlet, gen_freqset, gen_periodic_schrodinger

__all__ = [
    "gen_ac",
    "gen_almost_counterexample",
    "gen_dirichlet",
    "gen_fat_ap",
    "gen_freqset",
    "gen_periodic_schrodinger",
    "gen_planted",
    "gen_random",
    "haar_orthogonal",
]
