"""Entanglement dynamics of two giant atoms with phase-engineered couplings."""
from .dde_model import DelayTerm, EquationSet, PathReport, build_equations, canonicalize, path_report
from .geometry import CouplingPoint, Layout, PairMetrics, nested_layout, pair_metrics, standard_layout
from .integrator import InitialState, Trajectory, integrate, simulate, solve_markovian, steady_state
from .observables import chi_concurrence, concurrence, concurrence_series, density_matrix, to_chi

__version__ = "0.1.0"
