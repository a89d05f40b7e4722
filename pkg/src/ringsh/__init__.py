"""Ring-network spectra and Turing bifurcations for the graph Swift-Hohenberg equation.

Kernel models with exact spectra live in :mod:`ringsh.graphon`, graph
construction in :mod:`ringsh.sampler`, eigen-machinery and concentration
checks in :mod:`ringsh.spectral`, the Swift-Hohenberg right-hand side and
solvers in :mod:`ringsh.dynamics`, pseudo-arclength continuation in
:mod:`ringsh.continuation`, and closed-form normal-form predictions in
:mod:`ringsh.theory`.  The :mod:`ringsh.cli` module binds everything into
reproducible experiments.
"""

__version__ = "0.1.0"

from ringsh.graphon import (
    Bipartite,
    BipartiteSpectrum,
    ErdosRenyi,
    FourierRing,
    GraphonSpectrum,
    SmallWorld,
    bipartite_spectrum,
    degree,
    evaluate,
    fourier_coefficients,
    graphon_spectrum,
)
from ringsh.sampler import GraphRealization, deterministic_graph, laplacian, random_graph, step_graphon
from ringsh.spectral import MatchBudget, SpectralData, eig_sym, opnorm, quad_self_interaction, weyl_gap

__all__ = [
    "Bipartite",
    "BipartiteSpectrum",
    "ErdosRenyi",
    "FourierRing",
    "GraphRealization",
    "GraphonSpectrum",
    "MatchBudget",
    "SmallWorld",
    "SpectralData",
    "bipartite_spectrum",
    "degree",
    "deterministic_graph",
    "eig_sym",
    "evaluate",
    "fourier_coefficients",
    "graphon_spectrum",
    "laplacian",
    "opnorm",
    "quad_self_interaction",
    "random_graph",
    "step_graphon",
    "weyl_gap",
]
