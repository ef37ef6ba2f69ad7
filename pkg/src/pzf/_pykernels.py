"""Pure-Python kernels: reachable-state closure and Monte Carlo propagation.

This is the fallback implementation of the interface in pzf._kernels; the
compiled module is selected by pzf.backend when the extension is available.
Both implementations must produce identical results: the closure visits the
same state set, and propagate consumes random draws in exactly the same
order (whites ascending, blue neighbors ascending, stop after a success).
"""

from __future__ import annotations

from numpy.random import Generator

from pzf.errors import StateCapExceeded


def make_kernel_graph(adj_masks):
    """Package adjacency bitmasks for the kernel calls below."""
    n = len(adj_masks)
    if n > 63:
        raise ValueError("kernels support at most 63 vertices (word-sized states)")
    adj = [int(m) for m in adj_masks]
    deg = [float(m.bit_count()) for m in adj]
    return adj, deg, (1 << n) - 1


def reachable_closure(kernel_graph, start: int, cap: int):
    """All blue sets reachable from ``start`` with positive probability.

    Deterministically forced whites (some blue neighbor has no other white
    neighbor) are folded into every successor, so zero-probability outcomes
    never enter the state space.  Returns an unsorted list of bitmasks.
    """
    adj, _deg, full = kernel_graph
    seen = {start}
    stack = [start]
    out = []
    while stack:
        blue = stack.pop()
        out.append(blue)
        if blue == full:
            continue
        whites = full & ~blue
        det = 0
        free = 0
        wm = whites
        while wm:
            wbit = wm & -wm
            wm &= wm - 1
            w = wbit.bit_length() - 1
            um = adj[w] & blue
            if not um:
                continue
            forced = False
            while um:
                u = (um & -um).bit_length() - 1
                um &= um - 1
                if adj[u] & whites == wbit:
                    forced = True
                    break
            if forced:
                det |= wbit
            else:
                free |= wbit
        base = blue | det
        t = free
        while True:
            succ = base | t
            if succ != blue and succ not in seen:
                seen.add(succ)
                if len(seen) > cap:
                    raise StateCapExceeded(cap)
                stack.append(succ)
            if t == 0:
                break
            t = (t - 1) & free
    return out


def propagate(kernel_graph, blue: int, bit_generator) -> int:
    """Run the probabilistic color-change rule from ``blue`` until all blue.

    Returns the number of rounds.  One uniform draw is consumed per
    (white, blue neighbor) attempt, stopping at the first success for that
    white; the round outcome distribution is unchanged by the early stop.
    """
    adj, deg, full = kernel_graph
    gen = Generator(bit_generator)
    random = gen.random
    rounds = 0
    while blue != full:
        new = blue
        wm = full & ~blue
        while wm:
            w = (wm & -wm).bit_length() - 1
            wm &= wm - 1
            um = adj[w] & blue
            while um:
                u = (um & -um).bit_length() - 1
                um &= um - 1
                count = (adj[u] & blue).bit_count() + 1
                if random() < count / deg[u]:
                    new |= 1 << w
                    break
        blue = new
        rounds += 1
    return rounds
