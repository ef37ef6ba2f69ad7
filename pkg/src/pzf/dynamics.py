"""The probabilistic color-change rule.

Each round, every blue vertex u attempts to force each white neighbor w
independently with probability |N[u] cap B| / deg(u), where N[u] is the
closed neighborhood and B the blue set at the start of the round (all
forces in a round are synchronous).  This module gives the exact one-round
transition law in rational arithmetic and a seeded Monte Carlo simulator.

Blue sets are passed as iterables of vertex ids and returned as frozensets.
"""

from __future__ import annotations

import math

import numpy as np
from gmpy2 import mpq
from numpy.random import Generator, Philox

from pzf import backend
from pzf.graphs import Graph, _bits, is_connected


def blue_mask(g: Graph, b) -> int:
    """Validate a blue set given as an iterable of vertex ids; return its bitmask."""
    mask = 0
    for v in b:
        v = int(v)
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} outside 0..{g.n - 1}")
        mask |= 1 << v
    return mask


def blue_set(mask: int) -> frozenset:
    return frozenset(_bits(mask))


def force_probability(g: Graph, b, u: int, w: int):
    """Probability that blue u forces white neighbor w in one round.

    Returns |N[u] cap B| / deg(u) as an exact rational in (0, 1].  Raises
    ValueError if u is not blue, w is blue, or uw is not an edge.
    """
    mask = blue_mask(g, b)
    if not mask >> u & 1:
        raise ValueError(f"vertex {u} is not blue")
    if mask >> w & 1:
        raise ValueError(f"vertex {w} is already blue")
    if not g.has_edge(u, w):
        raise ValueError(f"({u}, {w}) is not an edge")
    count = (g.adjacency_mask(u) & mask).bit_count() + 1
    return mpq(count, g.degree(u))


def _stay_probabilities(adj, blue: int):
    """Per-white survival probabilities for one round from the blue set ``blue``.

    Considers only whites with at least one blue neighbor.  Returns
    (det_mask, free) where det_mask collects whites forced with probability 1
    and free lists (white_bit, q_w) with q_w in (0, 1) exactly, q_w being the
    probability that the white survives the round.
    """
    full = (1 << len(adj)) - 1
    whites = full & ~blue
    det = 0
    free = []
    wm = whites
    while wm:
        wbit = wm & -wm
        wm &= wm - 1
        w = wbit.bit_length() - 1
        um = adj[w] & blue
        if not um:
            continue
        q = mpq(1)
        while um:
            u = (um & -um).bit_length() - 1
            um &= um - 1
            count = (adj[u] & blue).bit_count() + 1
            q *= 1 - mpq(count, adj[u].bit_count())
            if q == 0:
                break
        if q == 0:
            det |= wbit
        else:
            free.append((wbit, q))
    return det, free


def round_distribution(g: Graph, b):
    """Exact distribution of the blue set after one round.

    Enumerates all 2^k outcomes over the k whites that have a blue neighbor
    (outcomes of probability zero included), as a list of (frozenset, prob)
    pairs sorted by (size, bitmask).  Probabilities are exact rationals
    summing to 1.  Raises ValueError when b is empty or all of V.
    """
    mask = blue_mask(g, b)
    full = (1 << g.n) - 1
    if mask == 0:
        raise ValueError("blue set is empty")
    if mask == full:
        raise ValueError("blue set is already all of V")
    adj = g.adjacency_masks()
    whites = full & ~mask
    targets = []
    for wbit_w in _bits(whites):
        wbit = 1 << wbit_w
        um = adj[wbit_w] & mask
        if not um:
            continue
        q = mpq(1)
        while um:
            u = (um & -um).bit_length() - 1
            um &= um - 1
            count = (adj[u] & mask).bit_count() + 1
            q *= 1 - mpq(count, adj[u].bit_count())
        targets.append((wbit, q))
    entries = [(mask, mpq(1))]
    for wbit, q in targets:
        entries = [
            (succ | (wbit if forced else 0), p * (1 - q if forced else q))
            for succ, p in entries
            for forced in (False, True)
        ]
    entries.sort(key=lambda e: (e[0].bit_count(), e[0]))
    return [(blue_set(succ), p) for succ, p in entries]


def simulate_round(g: Graph, b, rng: Generator) -> frozenset:
    """Sample one round; returns the new blue set.

    Consumes one uniform draw per (white, blue neighbor) attempt in a fixed
    order (whites ascending, blue neighbors ascending), stopping early once
    a white is forced; the outcome law equals round_distribution.
    """
    mask = blue_mask(g, b)
    if mask == 0:
        raise ValueError("blue set is empty")
    adj = g.adjacency_masks()
    full = (1 << g.n) - 1
    new = mask
    wm = full & ~mask
    while wm:
        w = (wm & -wm).bit_length() - 1
        wm &= wm - 1
        um = adj[w] & mask
        while um:
            u = (um & -um).bit_length() - 1
            um &= um - 1
            count = (adj[u] & mask).bit_count() + 1
            if rng.random() < count / adj[u].bit_count():
                new |= 1 << w
                break
    return blue_set(new)


def simulate_propagation(g: Graph, b, rng: Generator) -> int:
    """Rounds until all of V is blue, sampling with the active backend kernel.

    The graph must be connected.  Returns 0 when b is already all of V.
    Draw order matches simulate_round, so iterating simulate_round by hand on
    the same stream reproduces the trajectory exactly.
    """
    if not is_connected(g):
        raise ValueError("propagation requires a connected graph")
    mask = blue_mask(g, b)
    if mask == 0:
        raise ValueError("blue set is empty")
    kg = backend.make_kernel_graph(g.adjacency_masks())
    return backend.propagate(kg, mask, rng.bit_generator)


def trial_stream(seed: int, trial: int) -> Philox:
    """Counter-based per-trial stream; (seed, trial) is the Philox key."""
    return Philox(key=np.array([seed, trial], dtype=np.uint64))


def ept_estimate(g: Graph, b, trials: int, seed: int):
    """Monte Carlo estimate of the expected propagation time.

    Runs ``trials`` independent propagations, one per counter-based stream
    keyed by (seed, trial index), so results do not depend on execution
    order.  Returns (mean, stderr); stderr is None for a single trial.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    if not is_connected(g):
        raise ValueError("ept estimation requires a connected graph")
    mask = blue_mask(g, b)
    if mask == 0:
        raise ValueError("blue set is empty")
    kg = backend.make_kernel_graph(g.adjacency_masks())
    propagate = backend.propagate
    total = 0
    total_sq = 0
    for trial in range(trials):
        rounds = propagate(kg, mask, trial_stream(seed, trial))
        total += rounds
        total_sq += rounds * rounds
    mean = total / trials
    if trials == 1:
        return mean, None
    var = (total_sq - total * total / trials) / (trials - 1)
    return mean, math.sqrt(max(var, 0.0) / trials)
