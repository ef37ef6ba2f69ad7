"""Simple undirected graphs and the families used by the toolkit.

Vertices are dense integers 0..n-1.  Adjacency is stored as one bitmask per
vertex, which is what the state-space engine and the simulator consume
directly.  Graphs are immutable after construction and safe to share.

Besides the constructors, this module provides the graph6 codec and a plain
edge-list text format ("n m" header line, then one "u v" pair per line).
"""

from __future__ import annotations

GRAPH6_HEADER = ">>graph6<<"


def _bits(mask: int):
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask &= mask - 1


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    Parameters
    ----------
    n : int
        Number of vertices, n >= 0.
    edges : iterable of (int, int)
        Edge endpoints.  Duplicates collapse silently; self-loops and
        out-of-range endpoints are rejected.
    """

    __slots__ = ("n", "_adj")

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self._adj = tuple(adj)

    @classmethod
    def from_edge_list(cls, n: int, edges) -> "Graph":
        """Build a graph from an explicit edge list (synonym of the constructor)."""
        return cls(n, edges)

    def adjacency_mask(self, v: int) -> int:
        """Neighbors of ``v`` as a bitmask."""
        return self._adj[v]

    def adjacency_masks(self) -> tuple:
        return self._adj

    def neighbors(self, v: int) -> tuple:
        return tuple(_bits(self._adj[v]))

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def degrees(self) -> tuple:
        return tuple(m.bit_count() for m in self._adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def edges(self) -> list:
        """All edges as (u, v) pairs with u < v, sorted."""
        out = []
        for u in range(self.n):
            for v in _bits(self._adj[u] >> (u + 1) << (u + 1)):
                out.append((u, v))
        return out

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self._adj) // 2

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self._adj == other._adj

    def __hash__(self):
        return hash((self.n, self._adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count()})"


def is_connected(g: Graph) -> bool:
    """True iff every vertex is reachable from vertex 0 (vacuously true for n <= 1)."""
    if g.n <= 1:
        return True
    seen = 1
    stack = [0]
    while stack:
        v = stack.pop()
        new = g.adjacency_mask(v) & ~seen
        seen |= new
        stack.extend(_bits(new))
    return seen == (1 << g.n) - 1


# ---------------------------------------------------------------------------
# family generators
# ---------------------------------------------------------------------------

def path(n: int) -> Graph:
    """Path P_n with vertices 0-1-...-(n-1)."""
    if n < 1:
        raise ValueError("path requires n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    """Cycle C_n in path order, closing edge (n-1, 0)."""
    if n < 3:
        raise ValueError("cycle requires n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    """Complete graph K_n."""
    if n < 1:
        raise ValueError("complete requires n >= 1")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(m: int, n: int) -> Graph:
    """K_{m,n} with parts 0..m-1 and m..m+n-1."""
    if m < 1 or n < 1:
        raise ValueError("complete_bipartite requires m, n >= 1")
    return Graph(m + n, [(i, m + j) for i in range(m) for j in range(n)])


def star(n: int) -> Graph:
    """Star K_{1,n}: center 0 with leaves 1..n.  Equals complete_bipartite(1, n)."""
    if n < 1:
        raise ValueError("star requires n >= 1")
    return complete_bipartite(1, n)


def sun(n: int) -> Graph:
    """n-Sun: cycle 0..n-1 with one pendant leaf per cycle vertex; leaf of i is n+i."""
    if n < 3:
        raise ValueError("sun requires n >= 3")
    edges = [(i, (i + 1) % n) for i in range(n)] + [(i, n + i) for i in range(n)]
    return Graph(2 * n, edges)


def comb(n: int) -> Graph:
    """n-Comb: path 0..n-1 with one pendant leaf per path vertex; leaf of i is n+i."""
    if n < 1:
        raise ValueError("comb requires n >= 1")
    edges = [(i, i + 1) for i in range(n - 1)] + [(i, n + i) for i in range(n)]
    return Graph(2 * n, edges)


def tadpole4(m: int) -> Graph:
    """Tadpole T_{4,m}: a 4-cycle sharing one vertex with an m-vertex path.

    Labeling: the cycle is p_1, c_2, c_3, c_4 at vertices 0..3; the path
    p_1..p_m occupies 0, 4, 5, ..., m+2 (p_1 is the shared vertex).  Order
    is m+3 and size is m+3 for every m >= 1.
    """
    if m < 1:
        raise ValueError("tadpole4 requires m >= 1")
    edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
    prev = 0
    for j in range(2, m + 1):
        edges.append((prev, j + 2))
        prev = j + 2
    return Graph(m + 3, edges)


def tadpole4_prime(m: int) -> Graph:
    """T'_{4,m}: tadpole4(m) plus the chord {c_2, c_4} = {1, 3}."""
    g = tadpole4(m)
    return Graph(g.n, g.edges() + [(1, 3)])


def paw() -> Graph:
    """Paw: triangle 0, 1, 2 with a pendant vertex 3 attached to 2."""
    return Graph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])


def diamond() -> Graph:
    """Diamond: K_4 minus one edge; degree-3 vertices are 0 and 2."""
    return Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def with_universal_vertex(g: Graph) -> Graph:
    """Copy of ``g`` plus a new vertex g.n adjacent to every original vertex."""
    edges = g.edges() + [(v, g.n) for v in range(g.n)]
    return Graph(g.n + 1, edges)


# ---------------------------------------------------------------------------
# graph6 codec
# ---------------------------------------------------------------------------

def graph6_encode(g: Graph) -> str:
    """Encode a graph in graph6 ASCII format (no header).

    Upper-triangle adjacency bits x(i, j) for i < j are emitted in column
    order (j = 1..n-1, i = 0..j-1), packed big-endian six bits per character
    with +63 offset, zero padded.
    """
    n = g.n
    if n <= 62:
        prefix = chr(n + 63)
    elif n <= 258047:
        prefix = chr(126) + "".join(chr((n >> s & 63) + 63) for s in (12, 6, 0))
    else:
        raise ValueError("graph6 encoding supported up to n = 258047")
    bits = []
    for j in range(1, n):
        col = g.adjacency_mask(j)
        for i in range(j):
            bits.append(col >> i & 1)
    while len(bits) % 6:
        bits.append(0)
    chars = []
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = val << 1 | b
        chars.append(chr(val + 63))
    return prefix + "".join(chars)


def graph6_decode(text: str) -> Graph:
    """Decode one graph6 string; a leading '>>graph6<<' header is accepted."""
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    if not s:
        raise ValueError("empty graph6 string")
    codes = [ord(c) - 63 for c in s]
    if any(c < 0 or c > 63 for c in codes):
        raise ValueError("invalid graph6 character")
    if codes[0] < 63:
        n, body = codes[0], codes[1:]
    elif len(codes) >= 4 and codes[1] < 63:
        n = codes[1] << 12 | codes[2] << 6 | codes[3]
        body = codes[4:]
    else:
        raise ValueError("graph6 strings beyond n = 258047 are not supported")
    need = n * (n - 1) // 2
    if len(body) != (need + 5) // 6:
        raise ValueError(f"graph6 body length {len(body)} does not match n = {n}")
    bits = []
    for c in body:
        bits.extend(c >> s & 1 for s in (5, 4, 3, 2, 1, 0))
    if any(bits[need:]):
        raise ValueError("nonzero padding bits in graph6 string")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# edge-list text format
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse the plain edge-list format: first line "n m", then m lines "u v"."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty edge-list input")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError('edge-list header must be "n m"')
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ValueError(f"header announces {m} edges but {len(lines) - 1} lines follow")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f'bad edge line "{ln}"')
        edges.append((int(parts[0]), int(parts[1])))
    return Graph(n, edges)


def format_edge_list(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"
