"""Reachable-state chains and exact expected propagation time.

States are blue-set bitmasks ordered by (popcount, bitmask).  Every
successor of a state is a strict superset, so this proper ordering makes
the transition matrix upper triangular and the expected absorption time
solvable by back-substitution in exact rational arithmetic:

    solve (M - 1 e_s^T - I) x = e_s,  ept = x_1 + 1

where M is the s x s transition matrix and e_s selects the absorbing
all-blue state.  The equivalent series sum_{r>=1} r ((M^r - M^{r-1})_{1s})
is available as exact partial sums for cross-checking.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext

from gmpy2 import lcm, mpq, mpz

from pzf import backend
from pzf.dynamics import _stay_probabilities, blue_mask, blue_set
from pzf.errors import StateCapExceeded
from pzf.graphs import Graph, is_connected

__all__ = [
    "DEFAULT_STATE_CAP",
    "EptReport",
    "StateChain",
    "StateCapExceeded",
    "build_chain",
    "diagonal_spectrum",
    "enumerate_states",
    "ept_exact",
    "ept_graph",
    "ept_report",
    "ept_series_partial",
    "ept_series_partials",
    "render_decimal",
    "solve_ept_rows",
]

DEFAULT_STATE_CAP = 1 << 20


def _validate_rows(rows) -> None:
    """Check row-stochasticity, upper triangularity, and the absorbing final row."""
    s = len(rows)
    if s == 0:
        raise ValueError("chain has no states")
    for i, row in enumerate(rows):
        total = mpq(0)
        diag = mpq(0)
        last = -1
        for j, p in row:
            if j <= last:
                raise ValueError(f"row {i} columns are not strictly ascending")
            last = j
            if j < i:
                raise ValueError(f"entry ({i}, {j}) lies below the diagonal")
            if p < 0 or p > 1:
                raise ValueError(f"entry ({i}, {j}) = {p} outside [0, 1]")
            if j == i:
                diag = p
            total += p
        if total != 1:
            raise ValueError(f"row {i} sums to {total}, not 1")
        if i < s - 1 and diag == 1:
            raise ValueError(f"non-final state {i} is absorbing")
    if tuple(rows[s - 1]) != ((s - 1, mpq(1)),):
        raise ValueError("final state is not absorbing")


class StateChain:
    """Ordered reachable blue sets plus the transition matrix between them.

    ``masks`` holds the states as bitmasks sorted by (popcount, bitmask),
    starting at the initial set and ending at all-blue.  ``rows[i]`` is the
    sparse matrix row for state i as (column, probability) pairs in column
    order; omitted entries are zero.
    """

    __slots__ = ("n", "masks", "rows", "_states")

    def __init__(self, n: int, masks, rows):
        self.n = n
        self.masks = tuple(masks)
        self.rows = tuple(tuple(row) for row in rows)
        self._states = None

    @property
    def s(self) -> int:
        return len(self.masks)

    @property
    def states(self) -> tuple:
        """States as frozensets of vertex ids, in chain order."""
        if self._states is None:
            self._states = tuple(blue_set(m) for m in self.masks)
        return self._states

    def matrix_entry(self, i: int, j: int):
        for col, p in self.rows[i]:
            if col == j:
                return p
        return mpq(0)

    def validate(self) -> None:
        """Raise ValueError if any chain invariant fails."""
        _validate_rows(self.rows)
        full = (1 << self.n) - 1
        if self.masks[-1] != full:
            raise ValueError("last state is not all-blue")
        start = self.masks[0]
        keys = [(m.bit_count(), m) for m in self.masks]
        if keys != sorted(set(keys)):
            raise ValueError("states are not properly ordered")
        for m in self.masks:
            if m & start != start:
                raise ValueError("a state does not contain the initial set")


def _check_inputs(g: Graph, mask: int) -> None:
    if not is_connected(g):
        raise ValueError("chain construction requires a connected graph")
    if mask == 0:
        raise ValueError("initial blue set is empty")


def _enumerate_masks(g: Graph, mask: int, cap: int):
    kg = backend.make_kernel_graph(g.adjacency_masks())
    raw = backend.reachable_closure(kg, mask, cap)
    return sorted((int(m) for m in raw), key=lambda m: (m.bit_count(), m))


def enumerate_states(g: Graph, b, cap: int | None = None):
    """All blue sets reachable from ``b``, sorted by (popcount, bitmask).

    Only positive-probability successors are explored, so the result starts
    at ``b`` and ends at all-blue.  Raises StateCapExceeded when more than
    ``cap`` states (default 2**20) would be generated.
    """
    mask = blue_mask(g, b)
    _check_inputs(g, mask)
    masks = _enumerate_masks(g, mask, DEFAULT_STATE_CAP if cap is None else cap)
    return [blue_set(m) for m in masks]


def build_chain(g: Graph, b, cap: int | None = None) -> StateChain:
    """Markov chain of the propagation process started at ``b``.

    Row i lists the positive-probability successors of state i per the
    color-change rule; deterministically forced whites are folded in, so
    zero-probability transitions never appear.
    """
    mask = blue_mask(g, b)
    _check_inputs(g, mask)
    masks = _enumerate_masks(g, mask, DEFAULT_STATE_CAP if cap is None else cap)
    index = {m: i for i, m in enumerate(masks)}
    adj = g.adjacency_masks()
    full = (1 << g.n) - 1
    rows = []
    for i, blue in enumerate(masks):
        if blue == full:
            rows.append(((i, mpq(1)),))
            continue
        det, free = _stay_probabilities(adj, blue)
        base = blue | det
        entries = [(base, mpq(1))]
        for wbit, q in free:
            entries = [
                (succ | (wbit if forced else 0), p * (1 - q if forced else q))
                for succ, p in entries
                for forced in (False, True)
            ]
        rows.append(tuple(sorted((index[succ], p) for succ, p in entries)))
    return StateChain(g.n, masks, rows)


def solve_ept_rows(rows):
    """Expected rounds to absorption from the first state, by back-substitution.

    Rows must be upper triangular with the absorbing state last (the
    StateChain/AggregateChain layout).  Exact over rationals.
    """
    s = len(rows)
    x = [None] * s
    x[s - 1] = mpq(-1)
    for i in range(s - 2, -1, -1):
        acc = mpq(1)
        diag = mpq(0)
        for j, p in rows[i]:
            if j < i:
                raise ValueError("matrix is not upper triangular")
            if j == i:
                diag = p
            else:
                acc += p * x[j]
        x[i] = -acc / (diag - 1)
    return x[0] + 1


def ept_exact(g: Graph, b, cap: int | None = None):
    """Exact expected propagation time from blue set ``b`` as a rational.

    Returns 0 when ``b`` is already all of V.  Raises ValueError for a
    disconnected graph or empty ``b`` and StateCapExceeded past the cap.
    """
    mask = blue_mask(g, b)
    _check_inputs(g, mask)
    if mask == (1 << g.n) - 1:
        return mpq(0)
    return solve_ept_rows(build_chain(g, b, cap).rows)


def ept_graph(g: Graph, cap: int | None = None):
    """Minimum ept over single-vertex initial sets, with every argmin vertex.

    Returns (value, [vertices]).  Evaluation order does not affect the
    result; vertices are reported ascending.
    """
    if g.n < 1:
        raise ValueError("graph has no vertices")
    best = None
    argmin = []
    for v in range(g.n):
        val = ept_exact(g, (v,), cap)
        if best is None or val < best:
            best, argmin = val, [v]
        elif val == best:
            argmin.append(v)
    return best, argmin


def _integer_rows(chain):
    """Rescale chain rows to integers over a common denominator D."""
    denom = mpz(1)
    for row in chain.rows:
        for _, p in row:
            denom = lcm(denom, p.denominator)
    scaled = [tuple((j, mpz(p * denom)) for j, p in row) for row in chain.rows]
    return scaled, denom


def _series_sweep(chain, R: int, collect: bool):
    """Partial sums of sum_r r (M^r - M^{r-1})_{1s} up to R.

    Iterates the first-row vector of M^r as integer numerators over D^r,
    with no intermediate gcd work; p_r = (M^r)_{1s} and Abel summation give
    partial_R = R p_R - sum_{t<R} p_t.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    rows, denom = _integer_rows(chain)
    s = len(rows)
    vec = [mpz(0)] * s
    vec[0] = mpz(1)
    absorbed = vec[s - 1]  # p_0 numerator: nonzero only for the one-state chain
    horner = mpz(0)        # sum of p_t numerators for t < r, scaled to D^(r-1)
    dpow = mpz(1)
    out = [] if collect else None
    for r in range(1, R + 1):
        horner = horner * denom + absorbed
        new = [mpz(0)] * s
        for i in range(s):
            v = vec[i]
            if v:
                for j, a in rows[i]:
                    new[j] += v * a
        vec = new
        dpow *= denom
        absorbed = vec[s - 1]
        if collect:
            out.append(mpq(r * absorbed - horner * denom, dpow))
    if collect:
        return out
    return mpq(R * absorbed - horner * denom, dpow)


def ept_series_partial(chain, R: int):
    """The exact partial sum of the series formula at truncation R."""
    return _series_sweep(chain, R, collect=False)


def ept_series_partials(chain, R: int):
    """All partial sums for r = 1..R (monotone nondecreasing, converging to ept)."""
    return _series_sweep(chain, R, collect=True)


def diagonal_spectrum(chain):
    """Diagonal entries of the chain matrix, sorted ascending.

    By upper triangularity this is the spectrum.  Works for StateChain and
    AggregateChain alike; absent diagonal entries read as zero.
    """
    diag = []
    for i, row in enumerate(chain.rows):
        entry = mpq(0)
        for j, p in row:
            if j == i:
                entry = p
                break
        diag.append(entry)
    return sorted(diag)


def render_decimal(value, digits: int = 6) -> str:
    """Round-half-even decimal rendering at ``digits`` significant digits."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        d = Decimal(int(value.numerator)) / Decimal(int(value.denominator))
    return format(d, "f")


@dataclass(frozen=True)
class EptReport:
    """One exact-ept result: identity, value, rendering, and cost."""

    graph_id: str
    initial: frozenset
    exact: object
    decimal: str
    state_count: int
    elapsed: float


def ept_report(g: Graph, b, graph_id: str = "", digits: int = 6,
               cap: int | None = None) -> EptReport:
    """Compute ept_exact with timing and state count packaging."""
    mask = blue_mask(g, b)
    _check_inputs(g, mask)
    start = time.perf_counter()
    if mask == (1 << g.n) - 1:
        exact = mpq(0)
        count = 1
    else:
        chain = build_chain(g, b, cap)
        exact = solve_ept_rows(chain.rows)
        count = chain.s
    elapsed = time.perf_counter() - start
    return EptReport(graph_id, blue_set(mask), exact, render_decimal(exact, digits),
                     count, elapsed)
