"""Simulation, closed-form analysis and verification for the DMVR gossip protocol."""
from .analysis import (expected_tau1, expected_tau2_bound, order_stat_bound, pairwise_moments,
                       tau_prime_bound, tau_x_bound, total_bound_binary, var_tau1)
from .engine import (VARIANTS, Scenario, Trajectory, is_in_convergence_set, lyapunov,
                     phase_observers, run)
from .errors import DMVRError
from .experiments import Manifest, builtin_manifest, run_manifest
from .graph import (Graph, build_complete, build_ring, build_topology, build_torus,
                    from_edge_list, read_edge_list, sample_neighbor, write_edge_list)
from .protocol import (RankingState, VoteProfile, VotingState, consolidate, disseminate,
                       enhanced_step, init_profile, ranking_step, readout_majority,
                       readout_ranking, readout_ranking_compact, voting_step)
from .rng import RandomStream
from .verify import audit_trace, enumerate_states, equivalence_check, model_check

__version__ = "0.1.0"
