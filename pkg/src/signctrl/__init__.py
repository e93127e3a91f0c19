"""Certifying topological controllability of signed undirected networks."""

__version__ = "0.1.0"

from .certify import (  # noqa: E402
    AssumptionReport,
    DedicatedWitness,
    Status,
    Verdict,
    certify_bruteforce,
    find_dedicated_node,
    find_dedicated_node_fast,
    first_blocking_subset,
)
from .decompose import Path, path_search  # noqa: E402
from .errors import CapExceededError, NetworkError, SamplingError  # noqa: E402
from .graph import (  # noqa: E402
    Graph,
    Sign,
    SignedNetwork,
    build_graph,
    check_accessibility,
    neighborhood_of_set,
    neighbors,
)
from .merge import analyze, connecting_edges, graph_merging, largest_edge_set, merge_condition, merge_graphs  # noqa: E402
from .netfile import NetworkFile, load, loads  # noqa: E402
from .numeric import (  # noqa: E402
    Mode,
    Realization,
    RankReport,
    controllability_matrix,
    l_matrix_refutation,
    monte_carlo,
    numeric_rank,
    refute_certification,
    sample_realization,
)
