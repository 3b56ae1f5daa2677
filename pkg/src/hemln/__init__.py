"""Structure-preserving community detection for heterogeneous multilayer networks."""
from .composer import (KCommunityResult, KCommunityTuple, apply_composition, classify_tuples,
                       evaluate_k_community, initialize_result)
from .detector import KCommunityDetector
from .evaluation import baseline_modularity, hemln_modularity, project_tuples
from .expression import classify_steps, parse_expression
from .louvain import (CommunityAssignment, LouvainCommunities, community_stats,
                      detect_layer_communities, newman_modularity)
from .meta_graph import (CommunityBipartiteGraph, build_cbg, detect_hubs, weight_density_fraction,
                         weight_edge_count, weight_hub_participation)
from .mln import (InterLayerEdges, LayerGraph, MLNConfig, MultilayerNetwork,
                  collapse_type_independent, load_mln, validate_mln)
from .pairing import Pairing, brute_force_pairing_oracle, mwm, mwmt, mwpm, mwrm
from .synth import gen_planted_mln

__version__ = "0.1.0"

__all__ = [
    "CommunityAssignment", "CommunityBipartiteGraph", "InterLayerEdges", "KCommunityDetector",
    "KCommunityResult", "KCommunityTuple", "LayerGraph", "LouvainCommunities", "MLNConfig",
    "MultilayerNetwork", "Pairing", "apply_composition", "baseline_modularity",
    "brute_force_pairing_oracle", "build_cbg", "classify_steps", "classify_tuples",
    "collapse_type_independent", "community_stats", "detect_hubs", "detect_layer_communities",
    "evaluate_k_community", "gen_planted_mln", "hemln_modularity", "initialize_result", "load_mln",
    "mwm", "mwmt", "mwpm", "mwrm", "newman_modularity", "parse_expression", "project_tuples",
    "validate_mln", "weight_density_fraction", "weight_edge_count", "weight_hub_participation",
]
