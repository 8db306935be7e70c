"""Stigmergic foraging swarms on graphs: finite agents and their mean-field limit."""

from .config import ScenarioConfig, parse_scenario
from .doubled import ColumnStochasticMatrix, DoubledGraph, assemble_pf, build_doubled
from .graph import Graph, build_triangular_lattice, optimal_path_vertices, shortest_paths, validate
from .kernels import Dynamics, epsilon_greedy, gradient_matrix, reward_diagonal, weight_step
from .meanfield import MeanFieldState, init_mean_field, mf_step, run
from .swarm import SwarmState, init_swarm, run_swarm, swarm_step

__all__ = [
    "ColumnStochasticMatrix",
    "DoubledGraph",
    "Dynamics",
    "Graph",
    "MeanFieldState",
    "ScenarioConfig",
    "SwarmState",
    "assemble_pf",
    "build_doubled",
    "build_triangular_lattice",
    "epsilon_greedy",
    "gradient_matrix",
    "init_mean_field",
    "init_swarm",
    "mf_step",
    "optimal_path_vertices",
    "parse_scenario",
    "reward_diagonal",
    "run",
    "run_swarm",
    "shortest_paths",
    "swarm_step",
    "validate",
    "weight_step",
]
