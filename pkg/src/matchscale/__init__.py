"""
Scaling algorithms for maximum weight matching.

approx_mwm / run       (1 - eps)-approximate MWM on general graphs
run_exact_mwm          exact MWM on bipartite graphs
run_exact_mwpm         exact maximum weight perfect matching on bipartite graphs
"""

from __future__ import annotations

from .approx import (ApproxResult, ApproxSolver, ApproxStats, approx_mwm, run,
                     scale_of_edge, scale_of_weight)
from .blossom import BlossomForest
from .checks import (check_approx_duals, check_exact_duals, check_perfect_duals,
                     edge_yz, matched_slack_ratio)
from .errors import *  # noqa: F401,F403
from .exact import (ExactResult, ExactSolver, ExactStats, dial_shortest_paths,
                    hopcroft_karp, run_exact, run_exact_mwm, run_exact_mwpm)
from .generate import generate
from .graph import (FixedDual, Matching, ScaleParams, WeightedGraph,
                    make_scale_params, normalize_real_weights,
                    truncated_weight, validate_graph)
from .instance import emit_result, format_instance, parse_instance
from .oracle import (OracleResult, brute_force_mwm, brute_force_mwpm,
                     cubic_hungarian, greedy_half, hungarian_mwpm)

__version__ = "0.1.0"
