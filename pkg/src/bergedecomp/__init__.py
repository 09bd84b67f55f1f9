"""Berge cycle and path decompositions of complete uniform multi-hypergraphs."""

from .admissibility import (PackingInstance, admissibility_conditions, f, is_admissible, nu2,
                            packing_conditions, packing_feasible, path_packing_feasible, sigma)
from .assembly import StagedHost, assemble_H, build_HC, build_HP, split_levels
from .berge_lift import (BergeWalk, HyperDecomposition, HyperEdge, RunTrace, case2_decompose,
                         case2_layout, case3_decompose, decompose, guaranteed, hall_matching,
                         lift, round_robin_coloring)
from .errors import (BelowThresholdFailure, DecompositionError, InfeasibleInput,
                     InstanceTooLarge, InvalidRemoval, MissingAssignment, NoPerfectMatching,
                     SDRNotFound, SearchExhausted, SizeMismatch, SpreadTooLarge)
from .graph_decomp import (GraphDecomposition, SolverConfig, brute_force_packing_exists,
                           cycle_decomposition, cycle_packing, decompose_multigraph,
                           path_packing, verify_graph_decomposition)
from .multigraph import GraphWalk, Multigraph, complete_multigraph, near_factor_I
from .verify import Code, Violation, lower_shadow, mutate, upper_shadow, verify_berge_decomposition

__version__ = "0.1.0"
