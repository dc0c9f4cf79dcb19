"""Small target sets for the Linear Threshold model."""

from .activation import ActivationTrace, activate, is_target_set
from .analysis import (
    clustering_coefficient,
    detect_communities,
    modularity,
    pearson,
    upper_bound,
    upper_bound_exact,
)
from .exact import ExactResult, brute_force, dag_optimal, polytree_reduce
from .graph import Digraph, GraphClassReport, GraphError, ParseError, classify, load_edge_list
from .solvers import InvariantError, SolverError, TargetSetResult, greedy, mts, tip_decomp, tss
from .thresholds import (
    ThresholdAssignment,
    constant_thresholds,
    explicit_thresholds,
    parse_scheme,
    proportional_thresholds,
    random_thresholds,
)

__version__ = "0.1.0"
