"""Command line front end for exact and Monte Carlo propagation analysis.

Subcommands: ept, matrix, simulate, table, family, bounds, conjectures,
add-edge, census.  Rationals serialize as "p/q" in lowest terms; decimal
columns carry the digit count used.  Exit codes: 0 success, 2 input
error, 3 state cap exceeded, 4 table assertion mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

from gmpy2 import mpq

from pzf import __version__
from pzf.dynamics import ept_estimate
from pzf.engine import (
    DEFAULT_STATE_CAP,
    build_chain,
    ept_exact,
    ept_graph,
    ept_report,
    render_decimal,
)
from pzf.errors import StateCapExceeded
from pzf.families import (
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
from pzf.goldens import load_goldens, matches
from pzf.graphs import (
    Graph,
    comb,
    complete,
    complete_bipartite,
    cycle,
    diamond,
    graph6_decode,
    parse_edge_list,
    path,
    paw,
    star,
    sun,
    tadpole4,
    tadpole4_prime,
)

# Rational window around e/(e-1) = 1.58197670686932642...; verdicts stay
# exact because every ept compared against it is a rational.
BOUND_LO = mpq(15819767068, 10**10)
BOUND_HI = mpq(15819767069, 10**10)

# Documented feasibility caps for table regeneration; golden data stops here.
TABLE_MAX = {"kn": 50, "kmn": 10, "sun": 45}

SMALL_GRAPHS = (
    ("K1", complete(1)),
    ("K2", complete(2)),
    ("P3", path(3)),
    ("K3", complete(3)),
    ("P4", path(4)),
    ("K1_3", star(3)),
    ("paw", paw()),
    ("C4", cycle(4)),
    ("diamond", diamond()),
    ("K4", complete(4)),
)

FAMILY_BUILDERS = {
    "k": (1, lambda n: complete(n)),
    "kmn": (2, lambda m, n: complete_bipartite(m, n)),
    "path": (1, lambda n: path(n)),
    "cycle": (1, lambda n: cycle(n)),
    "star": (1, lambda n: star(n)),
    "sun": (1, lambda n: sun(n)),
    "comb": (1, lambda n: comb(n)),
    "tadpole4": (1, lambda m: tadpole4(m)),
    "tadpole4p": (1, lambda m: tadpole4_prime(m)),
    "paw": (0, lambda: paw()),
    "diamond": (0, lambda: diamond()),
}


class CliError(Exception):
    """Invalid input; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Everything a command run depends on; output is a function of this."""

    command: str
    family: str | None = None
    graph6: str | None = None
    graph6_file: str | None = None
    edge_file: str | None = None
    initial: tuple | None = None
    trials: int = 10000
    seed: int = 0
    digits: int | None = None
    state_cap: int = DEFAULT_STATE_CAP
    fmt: str = "text"
    out: str | None = None
    extras: dict = field(default_factory=dict)


@dataclass
class Block:
    """One titled table of output rows."""

    title: str
    columns: list
    rows: list
    text_skip: frozenset = frozenset()  # bulky exact columns hidden in text


# ---------------------------------------------------------------------------
# graph sources
# ---------------------------------------------------------------------------

def parse_family(spec: str):
    """Build a graph from a family spec like "k 5", "kmn 3 4", or "paw"."""
    tokens = spec.split()
    if not tokens:
        raise CliError("empty family spec")
    name, args = tokens[0], tokens[1:]
    if name not in FAMILY_BUILDERS:
        known = " ".join(sorted(FAMILY_BUILDERS))
        raise CliError(f"unknown family {name!r} (known: {known})")
    arity, builder = FAMILY_BUILDERS[name]
    if len(args) != arity:
        raise CliError(f"family {name!r} takes {arity} integer argument(s)")
    try:
        values = [int(a) for a in args]
    except ValueError:
        raise CliError(f"family arguments must be integers: {spec!r}") from None
    return builder(*values)


def resolve_graphs(config: RunConfig):
    """The (graph_id, Graph) list named by the config's single source."""
    sources = [s for s in (config.family, config.graph6, config.graph6_file,
                           config.edge_file) if s is not None]
    if len(sources) != 1:
        raise CliError("exactly one of --family, --graph6, --graph6-file, "
                       "--edge-file is required")
    if config.family is not None:
        return [(config.family.strip(), parse_family(config.family))]
    if config.graph6 is not None:
        return [(config.graph6, graph6_decode(config.graph6))]
    if config.graph6_file is not None:
        out = []
        with open(config.graph6_file) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append((line, graph6_decode(line)))
        if not out:
            raise CliError(f"no graphs in {config.graph6_file}")
        return out
    with open(config.edge_file) as fh:
        return [(config.edge_file, parse_edge_list(fh.read()))]


def single_graph(config: RunConfig):
    graphs = resolve_graphs(config)
    if len(graphs) != 1:
        raise CliError(f"{config.command} needs exactly one graph, "
                       f"got {len(graphs)}")
    return graphs[0]


def _set_text(vertices) -> str:
    return "{" + ",".join(str(v) for v in sorted(vertices)) + "}"


def _digits(config: RunConfig, default: int = 6) -> int:
    d = config.digits if config.digits is not None else default
    if d < 1:
        raise CliError("digits must be >= 1")
    return d


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_ept(config: RunConfig):
    """Exact ept per vertex (or for a given set) with the graph minimum."""
    digits = _digits(config)
    cols = ["graph", "initial", "states", "ept", "decimal", "digits", "argmin"]
    rows = []
    for gid, g in resolve_graphs(config):
        if config.initial is not None:
            rep = ept_report(g, config.initial, graph_id=gid, digits=digits,
                             cap=config.state_cap)
            rows.append([gid, _set_text(rep.initial), rep.state_count,
                         rep.exact, rep.decimal, digits, None])
            continue
        for v in range(g.n):
            rep = ept_report(g, (v,), graph_id=gid, digits=digits,
                             cap=config.state_cap)
            rows.append([gid, _set_text((v,)), rep.state_count, rep.exact,
                         rep.decimal, digits, None])
        best, argmin = ept_graph(g, cap=config.state_cap)
        rows.append([gid, "min", None, best, render_decimal(best, digits),
                     digits, _set_text(argmin)])
    return [Block("expected propagation time", cols, rows)], []


def cmd_matrix(config: RunConfig):
    """States and sparse transition rows of the chain for one start set."""
    gid, g = single_graph(config)
    if config.initial is None:
        raise CliError("matrix requires --initial")
    chain = build_chain(g, config.initial, cap=config.state_cap)
    chain.validate()
    states = chain.states
    state_rows = [[i, _set_text(states[i])] for i in range(chain.s)]
    trans_rows = []
    for i, row in enumerate(chain.rows):
        for j, p in row:
            trans_rows.append([i, _set_text(states[i]), j,
                               _set_text(states[j]), p])
    return [
        Block(f"states of {gid}", ["index", "state"], state_rows),
        Block("transition probabilities",
              ["row", "row_state", "col", "col_state", "prob"], trans_rows),
    ], []


def _closed_form_ept(config: RunConfig, g: Graph, initial):
    """Family closed form for a single-vertex start, when one applies."""
    if config.family is None or len(initial) != 1:
        return None
    tokens = config.family.split()
    v = initial[0]
    if tokens[0] == "k":
        return kn_ept(int(tokens[1]))
    if tokens[0] == "kmn":
        m, n = int(tokens[1]), int(tokens[2])
        return kmn_ept(m, n, start="m" if v < m else "n")
    if tokens[0] == "sun":
        n = int(tokens[1])
        if n >= 5:
            side = "cycle" if v < n else "leaf"
            return chain_ept(sun_chain(n, side))
    return None


def cmd_simulate(config: RunConfig):
    """Monte Carlo ept estimate, plus a z-score when exact is feasible."""
    gid, g = single_graph(config)
    initial = config.initial if config.initial is not None else (0,)
    if config.trials < 1:
        raise CliError("trials must be >= 1")
    mean, stderr = ept_estimate(g, initial, config.trials, config.seed)
    try:
        exact = ept_exact(g, initial, cap=config.state_cap)
    except StateCapExceeded:
        exact = _closed_form_ept(config, g, initial)
    if exact is None:
        exact_dec = z = None
    else:
        exact_dec = render_decimal(exact, _digits(config))
        if stderr is None:
            z = None
        elif stderr == 0.0:
            z = "0" if mpq(mean) == exact else "inf"
        else:
            z = format(abs(mean - float(exact)) / stderr, ".4g")
    rows = [[gid, _set_text(initial), config.trials, config.seed,
             format(mean, ".10g"),
             None if stderr is None else format(stderr, ".6g"),
             exact, exact_dec, z]]
    cols = ["graph", "initial", "trials", "seed", "mean", "stderr",
            "exact", "exact_decimal", "z"]
    return [Block("Monte Carlo estimate", cols, rows,
                  text_skip=frozenset(["exact"]))], []


def _table_small(digits):
    rows = []
    for name, g in SMALL_GRAPHS:
        val = ept_graph(g)[0]
        rows.append([name, val, render_decimal(val, digits), digits])
    return Block("small graphs, minimum ept",
                 ["graph", "ept", "decimal", "digits"], rows)


def _table_kn(max_n, digits):
    rows = []
    for n in range(1, max_n + 1):
        val = kn_ept(n)
        rows.append([n, val, render_decimal(val, digits), digits])
    return Block("complete graphs", ["n", "ept", "decimal", "digits"], rows,
                 text_skip=frozenset(["ept"]))


def _table_kmn(max_n, digits):
    rows = []
    for m in range(1, max_n + 1):
        for n in range(m, max_n + 1):
            u = kmn_ept(m, n, start="m")
            v = kmn_ept(m, n, start="n")
            rows.append([m, n, u, render_decimal(u, digits),
                         v, render_decimal(v, digits), digits])
    cols = ["m", "n", "ept_u_exact", "ept_u", "ept_v_exact", "ept_v", "digits"]
    return Block("complete bipartite graphs, u on the size-m side", cols, rows,
                 text_skip=frozenset(["ept_u_exact", "ept_v_exact"]))


def _table_sun(max_n, digits):
    values = {n: sun_ept(n) for n in range(4, max_n + 1)}
    rows = []
    for n in range(5, max_n + 1):
        delta = values[n] - values[n - 1]
        rows.append([n, values[n], render_decimal(values[n], digits),
                     delta, render_decimal(delta, digits), digits])
    cols = ["n", "ept_exact", "ept", "delta_exact", "delta", "digits"]
    return Block("sun graphs, with consecutive differences", cols, rows,
                 text_skip=frozenset(["ept_exact", "delta_exact"]))


def _assert_small(block, problems):
    gold = load_goldens()
    expected = {r.key1: r for r in gold["small"]}
    for name, val, _, _ in block.rows:
        row = expected[name]
        if not matches(val, row):
            problems.append(f"{name}: got {val}, expected {row.value}")


def _assert_keyed(block, table, quantities, key_of, problems):
    gold = load_goldens()
    expected = {(r.key1, r.key2, r.quantity): r for r in gold[table]}
    for row_vals in block.rows:
        for quantity, value in quantities(row_vals):
            key = key_of(row_vals) + (quantity,)
            row = expected.get(key)
            if row is None:
                continue
            if not matches(value, row):
                problems.append(f"{table} {key}: got {float(value):.12g}, "
                                f"expected {float(row.value):.12g} "
                                f"(tolerance {float(row.tolerance):g})")


def cmd_table(config: RunConfig):
    """Regenerate a reference table; --assert compares to golden data."""
    table_id = config.extras["table_id"]
    if table_id in TABLE_MAX:
        max_n = config.extras.get("max") or TABLE_MAX[table_id]
        if not 1 <= max_n <= TABLE_MAX[table_id]:
            raise CliError(f"table {table_id} supports --max up to "
                           f"{TABLE_MAX[table_id]}")
    digits = _digits(config, default=15 if table_id == "sun" else 6)
    if table_id == "small":
        block = _table_small(digits)
    elif table_id == "kn":
        block = _table_kn(max_n, digits)
    elif table_id == "kmn":
        block = _table_kmn(max_n, digits)
    else:
        block = _table_sun(max_n, digits)
    problems = []
    if config.extras.get("assert_mode"):
        if table_id == "small":
            _assert_small(block, problems)
        elif table_id == "kn":
            _assert_keyed(block, "kn",
                          lambda r: [("ept", r[1])],
                          lambda r: (str(r[0]), ""), problems)
        elif table_id == "kmn":
            _assert_keyed(block, "kmn",
                          lambda r: [("u", r[2]), ("v", r[4])],
                          lambda r: (str(r[0]), str(r[1])), problems)
        else:
            _assert_keyed(block, "sun",
                          lambda r: [("ept", r[1]), ("delta", r[3])],
                          lambda r: (str(r[0]), ""), problems)
    return [block], problems


def cmd_family(config: RunConfig):
    """Closed-form chain evaluation for one family instance."""
    spec = config.extras["family_spec"]
    tokens = spec.split()
    digits = _digits(config)
    cols = ["family", "params", "start", "states", "ept", "decimal", "digits"]
    rows = []
    blocks = []

    def add(start, states, val):
        rows.append([tokens[0], " ".join(tokens[1:]), start, states, val,
                     render_decimal(val, digits), digits])

    try:
        name = tokens[0]
        if name == "k" and len(tokens) == 2:
            n = int(tokens[1])
            add("any vertex", kn_chain(n).s, kn_ept(n))
            if config.extras.get("spectrum"):
                spec_rows = [[v, render_decimal(v, digits), digits]
                             for v in kn_spectrum(n)]
                blocks.append(Block("diagonal spectrum",
                                    ["value", "decimal", "digits"], spec_rows))
        elif name == "kmn" and len(tokens) == 3:
            m, n = int(tokens[1]), int(tokens[2])
            u, v = kmn_ept(m, n, start="m"), kmn_ept(m, n, start="n")
            add("m side", kmn_chain(m, n, start="m").s, u)
            add("n side", kmn_chain(m, n, start="n").s, v)
            add("min", None, min(u, v))
        elif name == "sun" and len(tokens) == 2:
            n = int(tokens[1])
            if n >= 5:
                cyc = chain_ept(sun_chain(n, "cycle"))
                leaf = chain_ept(sun_chain(n, "leaf"))
                add("cycle vertex", sun_chain(n, "cycle").s, cyc)
                add("leaf vertex", sun_chain(n, "leaf").s, leaf)
                add("min", None, min(cyc, leaf))
            else:
                add("min", None, sun_ept(n))
        elif name == "tadpole4" and len(tokens) == 2:
            add("optimal vertex", None, tadpole4_ept(int(tokens[1])))
        elif name == "tadpole4p" and len(tokens) == 2:
            add("optimal vertex", None, tadpole4_prime_ept(int(tokens[1])))
        else:
            raise CliError("family command supports: k N, kmn M N, sun N, "
                           "tadpole4 M, tadpole4p M")
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if config.extras.get("spectrum") and tokens[0] != "k":
        raise CliError("--spectrum applies only to family k N")
    return [Block(f"closed-form family {spec}", cols, rows)] + blocks, []


def _bound_verdict(ept_val, slack: int) -> str:
    """Exact comparison of a rational ept against e/(e-1) * slack."""
    if ept_val <= BOUND_LO * slack:
        return "pass"
    if ept_val > BOUND_HI * slack:
        return "FAIL"
    return "borderline"


def _bounds_corpus():
    graphs = []
    for n in range(1, 9):
        graphs.append((f"k {n}", complete(n)))
    for n in range(2, 9):
        graphs.append((f"path {n}", path(n)))
    for n in range(3, 9):
        graphs.append((f"cycle {n}", cycle(n)))
    for n in range(1, 7):
        graphs.append((f"star {n}", star(n)))
    for m in range(2, 5):
        for n in range(m, 5):
            graphs.append((f"kmn {m} {n}", complete_bipartite(m, n)))
    graphs.append(("paw", paw()))
    graphs.append(("diamond", diamond()))
    for n in range(3, 7):
        graphs.append((f"sun {n}", sun(n)))
    for n in range(2, 6):
        graphs.append((f"comb {n}", comb(n)))
    for m in (5, 6):
        graphs.append((f"tadpole4 {m}", tadpole4(m)))
        graphs.append((f"tadpole4p {m}", tadpole4_prime(m)))
    return graphs


def cmd_bounds(config: RunConfig):
    """Check ept(G, S) <= e/(e-1) (n - |S|) and emit the K_n fit triples."""
    digits = _digits(config)
    corpus = _bounds_corpus()
    if config.graph6_file is not None:
        with open(config.graph6_file) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    corpus.append((line, graph6_decode(line)))
    rows = []
    for gid, g in corpus:
        starts = [(v,) for v in range(g.n)]
        if g.n > 1:
            starts.append(tuple(range(g.n)))
        for s in starts:
            slack = g.n - len(s)
            label = "V" if len(s) == g.n else _set_text(s)
            try:
                val = ept_exact(g, s, cap=config.state_cap)
                basis, exact_cell = "exact", val
                decimal = render_decimal(val, digits)
                verdict = _bound_verdict(val, slack)
            except StateCapExceeded:
                mean, _ = ept_estimate(g, s, config.trials, config.seed)
                basis, exact_cell = "mc", None
                decimal = format(mean, ".6f")
                verdict = "pass" if mean <= 1.5819767068 * slack else "FAIL"
            bound = math.e / (math.e - 1) * slack
            rows.append([gid, label, g.n, exact_cell, decimal, basis,
                         format(bound, ".6f"), verdict])
    blocks = [Block("linear bound ept(G,S) <= e/(e-1) (n-|S|)",
                    ["graph", "S", "n", "ept_exact", "ept", "basis", "bound",
                     "verdict"], rows, text_skip=frozenset(["ept_exact"]))]
    fit_max = config.extras.get("fit_max", 50)
    if fit_max >= 2:
        fit_rows = []
        for n in range(2, fit_max + 1):
            fit = 1.4 * math.log(math.log(n)) + 2.5
            fit_rows.append([n, render_decimal(kn_ept(n), digits),
                             format(fit, ".6f")])
        blocks.append(Block("K_n ept against the fit 1.4 log log n + 2.5 "
                            "(natural log, report only)",
                            ["n", "ept", "fit"], fit_rows))
    return blocks, []


def cmd_conjectures(config: RunConfig):
    """Scan the start-side inequality for K_{m,n} and the sun delta trend."""
    which = config.extras.get("scan", "all")
    digits = _digits(config)
    blocks = []
    if which in ("kmn", "all"):
        max_n = config.extras.get("kmn_max", 10)
        if not 2 <= max_n <= TABLE_MAX["kmn"]:
            raise CliError(f"--kmn-max must be in 2..{TABLE_MAX['kmn']}")
        rows = []
        for n in range(2, max_n + 1):
            for m in range(1, n):
                u, v = kmn_ept(m, n, start="m"), kmn_ept(m, n, start="n")
                rel = ">" if u > v else ("=" if u == v else "<")
                if n <= 3:
                    verdict = "outside hypothesis"
                else:
                    verdict = "consistent" if u > v else "VIOLATION"
                rows.append([m, n, render_decimal(u, digits),
                             render_decimal(v, digits), rel, verdict])
        blocks.append(Block("conjecture ept(K_{m,n},{u}) > ept(K_{m,n},{v}) "
                            "for m < n, n > 3",
                            ["m", "n", "u", "v", "relation", "verdict"], rows))
    if which in ("sun", "all"):
        max_n = config.extras.get("sun_max", 45)
        if not 5 <= max_n <= TABLE_MAX["sun"]:
            raise CliError(f"--sun-max must be in 5..{TABLE_MAX['sun']}")
        target = mpq(11, 16)
        values = {n: sun_ept(n) for n in range(4, max_n + 1)}
        rows = []
        for n in range(5, max_n + 1):
            delta = values[n] - values[n - 1]
            rows.append([n, render_decimal(delta, 15),
                         format(abs(float(delta - target)), ".3e")])
        blocks.append(Block("sun delta against the conjectured limit 11/16",
                            ["n", "delta", "deviation"], rows))
    if not blocks:
        raise CliError("scan must be kmn, sun, or all")
    return blocks, []


def cmd_add_edge_experiment(config: RunConfig):
    """Compare T_{4,m} with the chord graph T'_{4,m}: adding the edge
    strictly increases the expected propagation time."""
    m = config.extras["m"]
    if m < 1:
        raise CliError("m must be >= 1")
    if m < 5 and not config.extras.get("allow_small"):
        raise CliError("closed forms hold for m >= 5; pass --allow-small to "
                       "run the generic engine below that")
    digits = _digits(config)
    rows = []
    results = {}
    for label, g, closed in (
        ("T", tadpole4(m), tadpole4_ept if m >= 5 else None),
        ("T'", tadpole4_prime(m), tadpole4_prime_ept if m >= 5 else None),
    ):
        val, argmin = ept_graph(g, cap=config.state_cap)
        results[label] = val
        closed_val = closed(m) if closed else None
        agree = None if closed_val is None else ("yes" if closed_val == val
                                                 else "NO")
        rows.append([label, g.n, val, render_decimal(val, digits), closed_val,
                     agree, _set_text(argmin)])
    diff = results["T'"] - results["T"]
    verdict_rows = [["ept(T') - ept(T)", diff,
                     "strict increase holds" if diff > 0 else "VIOLATED"]]
    return [
        Block(f"tadpole comparison at m = {m}",
              ["graph", "vertices", "generic", "decimal", "closed_form",
               "agree", "argmin"], rows),
        Block("verdict", ["quantity", "value", "verdict"], verdict_rows),
    ], []


def cmd_census(config: RunConfig):
    """Exact minimum ept for every graph in a user-supplied graph6 file."""
    if config.graph6_file is None:
        raise CliError("census requires --graph6-file")
    digits = _digits(config)
    rows = []
    for idx, (gid, g) in enumerate(resolve_graphs(config)):
        try:
            val, argmin = ept_graph(g, cap=config.state_cap)
        except ValueError as exc:
            rows.append([idx, gid, g.n, g.edge_count(), None, None, None,
                         str(exc)])
            continue
        rows.append([idx, gid, g.n, g.edge_count(), val,
                     render_decimal(val, digits), _set_text(argmin), None])
    cols = ["index", "graph6", "n", "edges", "ept", "decimal", "argmin",
            "note"]
    return [Block("census", cols, rows)], []


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _cell(value, json_mode: bool = False):
    if value is None:
        return None if json_mode else ""
    if isinstance(value, mpq):
        return str(value)
    if json_mode and isinstance(value, bool):
        return value
    if isinstance(value, (int, str)):
        return value
    return str(value)


def _render_text(blocks) -> str:
    out = []
    for block in blocks:
        keep = [i for i, c in enumerate(block.columns)
                if c not in block.text_skip]
        header = [block.columns[i] for i in keep]
        table = [[str(_cell(row[i])) for i in keep] for row in block.rows]
        widths = [max(len(header[k]), *(len(r[k]) for r in table), 1)
                  if table else len(header[k]) for k in range(len(keep))]
        out.append(f"# {block.title}")
        out.append("  ".join(h.ljust(w) for h, w in zip(header, widths)))
        for r in table:
            out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
        out.append("")
    return "\n".join(out).rstrip() + "\n"


def _render_csv(blocks) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if len(blocks) == 1:
        block = blocks[0]
        writer.writerow(block.columns)
        for row in block.rows:
            writer.writerow([_cell(v) for v in row])
    else:
        columns = []
        for block in blocks:
            for c in block.columns:
                if c not in columns:
                    columns.append(c)
        writer.writerow(["section"] + columns)
        for block in blocks:
            index = {c: i for i, c in enumerate(block.columns)}
            for row in block.rows:
                writer.writerow([block.title] + [
                    _cell(row[index[c]]) if c in index else ""
                    for c in columns])
    return buf.getvalue()


def _render_json(command: str, blocks) -> str:
    sections = []
    for block in blocks:
        rows = [{c: _cell(v, json_mode=True)
                 for c, v in zip(block.columns, row)} for row in block.rows]
        sections.append({"title": block.title, "columns": block.columns,
                         "rows": rows})
    return json.dumps({"command": command, "sections": sections},
                      indent=2) + "\n"


def emit(config: RunConfig, blocks) -> None:
    if config.fmt == "text":
        rendered = _render_text(blocks)
    elif config.fmt == "csv":
        rendered = _render_csv(blocks)
    else:
        rendered = _render_json(config.command, blocks)
    if config.out is None:
        sys.stdout.write(rendered)
        if not rendered.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(config.out, "w") as fh:
            fh.write(rendered)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(sub, graph_source: bool = True):
    if graph_source:
        sub.add_argument("--family", help="family spec, e.g. 'k 5', 'kmn 3 4',"
                         " 'sun 6', 'paw'")
        sub.add_argument("--graph6", help="graph6 code")
        sub.add_argument("--graph6-file", help="file of graph6 codes, one per"
                         " line")
        sub.add_argument("--edge-file", help="edge list file: 'n m' header "
                         "line then m 'u v' lines")
    sub.add_argument("--digits", type=int, default=None,
                     help="significant digits for decimal columns")
    sub.add_argument("--state-cap", type=int, default=None,
                     help="max reachable states (default from PZF_STATE_CAP "
                          f"or {DEFAULT_STATE_CAP})")
    sub.add_argument("--format", dest="fmt", choices=("text", "csv", "json"),
                     default="text")
    sub.add_argument("--out", help="write output to this path instead of "
                     "stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pzf",
        description="Exact and Monte Carlo analysis of probabilistic zero "
                    "forcing on finite graphs.")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("ept", help="exact expected propagation time")
    _add_common(p)
    p.add_argument("--initial", type=int, nargs="+",
                   help="blue start vertices (default: every single vertex "
                        "plus the minimum)")

    p = subs.add_parser("matrix", help="transition matrix of the chain")
    _add_common(p)
    p.add_argument("--initial", type=int, nargs="+", required=True)

    p = subs.add_parser("simulate", help="Monte Carlo ept estimate")
    _add_common(p)
    p.add_argument("--initial", type=int, nargs="+",
                   help="blue start vertices (default: vertex 0)")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)

    p = subs.add_parser("table", help="regenerate a reference table")
    p.add_argument("table_id", choices=("small", "kn", "kmn", "sun"))
    p.add_argument("--max", type=int, default=None,
                   help="largest n (kn <= 50, kmn <= 10, sun <= 45)")
    p.add_argument("--assert", dest="assert_mode", action="store_true",
                   help="compare against golden data; exit 4 on mismatch")
    _add_common(p, graph_source=False)

    p = subs.add_parser("family", help="closed-form family evaluation")
    p.add_argument("family_spec", help="'k N', 'kmn M N', 'sun N', "
                   "'tadpole4 M', or 'tadpole4p M'")
    p.add_argument("--spectrum", action="store_true",
                   help="also list the chain's diagonal spectrum (k N only)")
    _add_common(p, graph_source=False)

    p = subs.add_parser("bounds", help="linear bound checks and the K_n fit "
                        "triples")
    _add_common(p, graph_source=False)
    p.add_argument("--graph6-file", help="extra graphs to check, one graph6 "
                   "code per line")
    p.add_argument("--trials", type=int, default=4000,
                   help="Monte Carlo fallback size past the state cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fit-max", type=int, default=50,
                   help="largest n for the fit triples (0 disables)")

    p = subs.add_parser("conjectures", help="scan the open conjectures")
    p.add_argument("scan", nargs="?", choices=("kmn", "sun", "all"),
                   default="all")
    p.add_argument("--kmn-max", type=int, default=10)
    p.add_argument("--sun-max", type=int, default=45)
    _add_common(p, graph_source=False)

    p = subs.add_parser("add-edge", help="tadpole chord comparison")
    p.add_argument("m", type=int, help="path length of T_{4,m}")
    p.add_argument("--allow-small", action="store_true",
                   help="permit m < 5 (generic engine only, no closed form)")
    _add_common(p, graph_source=False)

    p = subs.add_parser("census", help="minimum ept over a graph6 corpus")
    _add_common(p, graph_source=False)
    p.add_argument("--graph6-file", required=True)

    return parser


def _config_from_args(args) -> RunConfig:
    cap = args.state_cap
    if cap is None:
        env = os.environ.get("PZF_STATE_CAP")
        try:
            cap = int(env) if env else DEFAULT_STATE_CAP
        except ValueError:
            raise CliError(f"PZF_STATE_CAP must be an integer, got {env!r}")
    if cap < 1:
        raise CliError("state cap must be >= 1")
    extras = {}
    for name in ("table_id", "max", "assert_mode", "family_spec", "spectrum",
                 "fit_max", "scan", "kmn_max", "sun_max", "m", "allow_small"):
        if hasattr(args, name):
            extras[name] = getattr(args, name)
    return RunConfig(
        command=args.command,
        family=getattr(args, "family", None),
        graph6=getattr(args, "graph6", None),
        graph6_file=getattr(args, "graph6_file", None),
        edge_file=getattr(args, "edge_file", None),
        initial=tuple(args.initial) if getattr(args, "initial", None)
        else None,
        trials=getattr(args, "trials", 10000),
        seed=getattr(args, "seed", 0),
        digits=args.digits,
        state_cap=cap,
        fmt=args.fmt,
        out=args.out,
        extras=extras,
    )


HANDLERS = {
    "ept": cmd_ept,
    "matrix": cmd_matrix,
    "simulate": cmd_simulate,
    "table": cmd_table,
    "family": cmd_family,
    "bounds": cmd_bounds,
    "conjectures": cmd_conjectures,
    "add-edge": cmd_add_edge_experiment,
    "census": cmd_census,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        blocks, problems = HANDLERS[config.command](config)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StateCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    emit(config, blocks)
    if problems:
        for line in problems:
            print(f"mismatch: {line}", file=sys.stderr)
        print(f"{len(problems)} golden mismatch(es)", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
