"""Closed-form aggregate chains for complete, complete bipartite, and sun graphs.

These constructors build the transition matrix directly over aggregated
states (counts, not vertex subsets), so the state space grows linearly in
the graph order and large instances stay feasible.  Each chain's expected
absorption time must agree exactly with the generic simple-state engine on
the corresponding graph; the test suite enforces that lumping cross-check.

Also here: the exact closed-form ept values for the 4-cycle tadpoles, used
by the add-edge experiment.
"""

from __future__ import annotations

from math import comb

from gmpy2 import mpq

from pzf.engine import _validate_rows, solve_ept_rows


class AggregateChain:
    """Aggregated state labels plus a row-stochastic triangular matrix.

    ``rows`` uses the same sparse layout as StateChain.  ``post_rounds`` is
    added to the solved absorption time (deterministic rounds the aggregate
    states do not model; nonzero only for sun chains).
    """

    __slots__ = ("labels", "rows", "post_rounds")

    def __init__(self, labels, rows, post_rounds: int = 0):
        self.labels = tuple(labels)
        self.rows = tuple(tuple(row) for row in rows)
        self.post_rounds = post_rounds

    @property
    def s(self) -> int:
        return len(self.labels)

    def matrix_entry(self, i: int, j: int):
        for col, p in self.rows[i]:
            if col == j:
                return p
        return mpq(0)

    def validate(self) -> None:
        _validate_rows(self.rows)
        if len(self.labels) != len(self.rows):
            raise ValueError("label and row counts differ")


def chain_ept(chain: AggregateChain):
    """Expected propagation time of an aggregate chain, post-rounds included."""
    return solve_ept_rows(chain.rows) + chain.post_rounds


# ---------------------------------------------------------------------------
# K_n
# ---------------------------------------------------------------------------

def kn_chain(n: int) -> AggregateChain:
    """Chain of K_n over states "k" = k vertices blue, k = 1..n.

    With alpha_i = ((n-1-i)/(n-1))^i, the survival probability of one white
    when i are blue, row i is the binomial law of the number forced:

        m_ij = C(n-i, j-i) (1 - alpha_i)^(j-i) alpha_i^(n-j),  0^0 = 1.
    """
    if n < 1:
        raise ValueError("kn_chain requires n >= 1")
    rows = []
    for i in range(1, n + 1):
        if i == n:
            rows.append(((n - 1, mpq(1)),))
            continue
        alpha = mpq(n - 1 - i, n - 1) ** i
        row = []
        for j in range(i, n + 1):
            p = comb(n - i, j - i) * (1 - alpha) ** (j - i) * alpha ** (n - j)
            if p != 0:
                row.append((j - 1, p))
        rows.append(tuple(row))
    return AggregateChain([str(k) for k in range(1, n + 1)], rows)


def kn_spectrum(n: int):
    """Eigenvalues of the K_n chain, sorted: {0, 1} plus ((n-1-i)/(n-1))^(i(n-i))."""
    if n < 1:
        raise ValueError("kn_spectrum requires n >= 1")
    if n == 1:
        return [mpq(1)]
    spec = [mpq(0), mpq(1)]
    spec.extend(mpq(n - 1 - i, n - 1) ** (i * (n - i)) for i in range(1, n - 1))
    return sorted(spec)


def kn_ept(n: int):
    """Exact expected propagation time of K_n from one blue vertex."""
    return chain_ept(kn_chain(n))


# ---------------------------------------------------------------------------
# K_{m,n}
# ---------------------------------------------------------------------------

def _forced_counts(whites: int, survive):
    """Binomial law over how many of ``whites`` iid whites are forced."""
    return [comb(whites, k) * (1 - survive) ** k * survive ** (whites - k)
            for k in range(whites + 1)]


def kmn_chain(m: int, n: int, start: str) -> AggregateChain:
    """Chain of K_{m,n} over states (a, b) = blue counts per part.

    ``start`` names the side of the initial vertex: "m" or "n".  With the
    start side of size A and the other of size B, states run over
    1 <= a <= A, 0 <= b <= B, sorted by total count (a+b, then a) so the
    matrix is upper triangular; the unreachable corner states are retained
    harmlessly.  One round from (a, b) forces k whites on the start side and
    l on the other side with probability

        C(B-b, l) (1-q')^l q'^(B-b-l) * C(A-a, k) (1-q)^k q^(A-a-k)

    where q' = (1-(1+b)/B)^a and q = (1-(1+a)/A)^b, 0^0 = 1.
    """
    if m < 1 or n < 1:
        raise ValueError("kmn_chain requires m, n >= 1")
    if start == "m":
        side_a, side_b = m, n
    elif start == "n":
        side_a, side_b = n, m
    else:
        raise ValueError('start side must be "m" or "n"')
    states = sorted(
        ((a, b) for a in range(1, side_a + 1) for b in range(side_b + 1)),
        key=lambda ab: (ab[0] + ab[1], ab[0]),
    )
    index = {ab: i for i, ab in enumerate(states)}
    rows = []
    for a, b in states:
        if (a, b) == (side_a, side_b):
            rows.append(((index[(a, b)], mpq(1)),))
            continue
        other = _forced_counts(side_b - b, (1 - mpq(1 + b, side_b)) ** a)
        own = _forced_counts(side_a - a, (1 - mpq(1 + a, side_a)) ** b)
        row = {}
        for ell, p_other in enumerate(other):
            if p_other == 0:
                continue
            for k, p_own in enumerate(own):
                p = p_other * p_own
                if p != 0:
                    row[index[(a + k, b + ell)]] = row.get(index[(a + k, b + ell)], mpq(0)) + p
        rows.append(tuple(sorted(row.items())))
    return AggregateChain([f"({a},{b})" for a, b in states], rows)


def kmn_ept(m: int, n: int, start: str):
    """Exact ept of K_{m,n} from one blue vertex on the given side."""
    return chain_ept(kmn_chain(m, n, start))


# ---------------------------------------------------------------------------
# n-Sun
# ---------------------------------------------------------------------------

# Transition rules for the sun band states.  State "1" is one cycle vertex
# blue, "1L" one leaf blue, (c, l) a blue arc of c cycle vertices whose end
# growth is l in {0, 1, 2} half-forced sites, and the final state collapses
# everything with c >= n (all cycle vertices blue).
_SUN_RULES = {
    "1": (("1", mpq(8, 27)), ("1L", mpq(4, 27)), ((2, 0), mpq(8, 27)),
          ((2, 1), mpq(4, 27)), ((3, 0), mpq(1, 9))),
    "1L": (("1L", mpq(1, 9)), ((2, 1), mpq(4, 9)), ((3, 0), mpq(4, 9))),
    0: (((0, 0), mpq(1, 81)), ((0, 1), mpq(4, 81)), ((0, 2), mpq(4, 81)),
        ((1, 0), mpq(4, 27)), ((1, 1), mpq(8, 27)), ((2, 0), mpq(4, 9))),
    1: (((1, 0), mpq(1, 9)), ((1, 1), mpq(2, 9)), ((2, 0), mpq(2, 3))),
    2: (((2, 0), mpq(1),),),
}


def sun_chain(n: int, start: str) -> AggregateChain:
    """Aggregate chain of the n-Sun for n >= 5.

    State order: "1", "1L", then (c, l) for c = 2..n-1 and l = 0..2, then
    the collapsed final state "(n)"; a leaf start drops "1" and begins at
    "1L".  Transitions reaching c >= n merge into the final state.  The
    solved absorption time omits the deterministic closing round(s), hence
    post_rounds = 1 for a cycle start and 2 for a leaf start.
    """
    if n < 5:
        raise ValueError("sun_chain requires n >= 5")
    if start not in ("cycle", "leaf"):
        raise ValueError('start must be "cycle" or "leaf"')
    labels = (["1"] if start == "cycle" else []) + ["1L"]
    labels += [f"({c},{l})" for c in range(2, n) for l in range(3)]
    final = f"({n})"
    labels.append(final)
    index = {lab: i for i, lab in enumerate(labels)}

    def target(c: int, l: int) -> str:
        return final if c >= n else f"({c},{l})"

    rows = []
    for lab in labels:
        if lab == final:
            rows.append(((index[final], mpq(1)),))
            continue
        if lab in ("1", "1L"):
            rules = _SUN_RULES[lab]
            merged = {}
            for tgt, p in rules:
                key = tgt if isinstance(tgt, str) else target(*tgt)
                merged[key] = merged.get(key, mpq(0)) + p
        else:
            c, l = lab[1:-1].split(",")
            c, l = int(c), int(l)
            merged = {}
            for (dc, tl), p in _SUN_RULES[l]:
                key = target(c + dc, tl)
                merged[key] = merged.get(key, mpq(0)) + p
        rows.append(tuple(sorted((index[k], p) for k, p in merged.items())))
    return AggregateChain(labels, rows, post_rounds=1 if start == "cycle" else 2)


def sun_ept(n: int):
    """Exact ept of the n-Sun, minimized over cycle and leaf starts.

    For n in {3, 4} the band states degenerate, so the value comes from the
    generic engine on the 2n-vertex graph instead.
    """
    if n < 3:
        raise ValueError("sun_ept requires n >= 3")
    if n < 5:
        from pzf.engine import ept_graph
        from pzf.graphs import sun

        return ept_graph(sun(n))[0]
    return min(chain_ept(sun_chain(n, "cycle")), chain_ept(sun_chain(n, "leaf")))


# ---------------------------------------------------------------------------
# tadpoles
# ---------------------------------------------------------------------------

def tadpole4_ept(m: int):
    """Closed-form ept of the tadpole T_{4,m}, valid for m >= 5."""
    if m < 5:
        raise ValueError("closed form requires m >= 5")
    if m % 2:
        return mpq(m - 1, 2) + mpq(1353, 648)
    return mpq(m, 2) + mpq(9993, 5832)


def tadpole4_prime_ept(m: int):
    """Closed-form ept of T'_{4,m} (tadpole plus the c_2 c_4 chord), m >= 5."""
    if m < 5:
        raise ValueError("closed form requires m >= 5")
    if m % 2:
        return mpq(m - 1, 2) + mpq(1429, 648)
    return mpq(m, 2) + mpq(10357, 5832)
