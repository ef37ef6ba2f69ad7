"""Exact and Monte Carlo analysis of probabilistic zero forcing.

Each round, every blue vertex u forces each white neighbor w independently
with probability |N[u] cap B| / deg(u).  The package builds the absorbing
Markov chain over reachable blue sets, solves the expected propagation time
exactly in rational arithmetic, provides closed-form chains for complete,
complete bipartite, and sun graphs, and cross-checks everything against
seeded Monte Carlo simulation.
"""

from pzf.backend import BACKEND
from pzf.dynamics import (
    blue_mask,
    blue_set,
    ept_estimate,
    force_probability,
    round_distribution,
    simulate_propagation,
    simulate_round,
    trial_stream,
)
from pzf.engine import (
    DEFAULT_STATE_CAP,
    EptReport,
    StateChain,
    build_chain,
    diagonal_spectrum,
    enumerate_states,
    ept_exact,
    ept_graph,
    ept_report,
    ept_series_partial,
    ept_series_partials,
    render_decimal,
)
from pzf.errors import StateCapExceeded
from pzf.families import (
    AggregateChain,
    chain_ept,
    kmn_chain,
    kmn_ept,
    kn_chain,
    kn_ept,
    kn_spectrum,
    sun_chain,
    sun_ept,
    tadpole4_ept,
    tadpole4_prime_ept,
)
from pzf.goldens import GoldenRow, load_goldens, matches
from pzf.graphs import (
    Graph,
    comb,
    complete,
    complete_bipartite,
    cycle,
    diamond,
    format_edge_list,
    graph6_decode,
    graph6_encode,
    is_connected,
    parse_edge_list,
    path,
    paw,
    star,
    sun,
    tadpole4,
    tadpole4_prime,
    with_universal_vertex,
)

__version__ = "1.0.0"

__all__ = [
    "BACKEND",
    "DEFAULT_STATE_CAP",
    "AggregateChain",
    "EptReport",
    "GoldenRow",
    "Graph",
    "StateCapExceeded",
    "StateChain",
    "blue_mask",
    "blue_set",
    "build_chain",
    "chain_ept",
    "comb",
    "complete",
    "complete_bipartite",
    "cycle",
    "diagonal_spectrum",
    "diamond",
    "enumerate_states",
    "ept_estimate",
    "ept_exact",
    "ept_graph",
    "ept_report",
    "ept_series_partial",
    "ept_series_partials",
    "force_probability",
    "format_edge_list",
    "graph6_decode",
    "graph6_encode",
    "is_connected",
    "kmn_chain",
    "kmn_ept",
    "kn_chain",
    "kn_ept",
    "kn_spectrum",
    "load_goldens",
    "matches",
    "parse_edge_list",
    "path",
    "paw",
    "render_decimal",
    "round_distribution",
    "simulate_propagation",
    "simulate_round",
    "star",
    "sun",
    "sun_chain",
    "sun_ept",
    "tadpole4",
    "tadpole4_ept",
    "tadpole4_prime",
    "tadpole4_prime_ept",
    "trial_stream",
    "with_universal_vertex",
]
