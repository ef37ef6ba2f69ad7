import random

import pytest
from gmpy2 import mpq

from conftest import random_connected_graph
from pzf.engine import (
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
    solve_ept_rows,
)
from pzf.errors import StateCapExceeded
from pzf.graphs import Graph, complete, cycle, diamond, path, star


def test_enumerate_states_path():
    # the classic P_4 walk from an inner vertex: five reachable sets
    states = enumerate_states(path(4), (1,))
    assert states == [
        frozenset({1}),
        frozenset({0, 1}),
        frozenset({1, 2}),
        frozenset({0, 1, 2}),
        frozenset({0, 1, 2, 3}),
    ]


def test_enumerate_states_complete():
    # K_4 from one vertex reaches every superset of {0}
    assert len(enumerate_states(complete(4), (0,))) == 8


def test_build_chain_shape_and_validation():
    chain = build_chain(cycle(4), (0,))
    chain.validate()
    assert chain.s == 5
    assert chain.n == 4
    # first row: stay 1/4, one neighbor 1/4 each, both 1/4
    assert chain.matrix_entry(0, 0) == mpq(1, 4)
    assert chain.matrix_entry(0, 4) == 0
    # grouped by blue count this is the aggregated row (1/4, 1/2, 1/4, 0)
    by_count = {}
    for j, p in chain.rows[0]:
        c = chain.masks[j].bit_count()
        by_count[c] = by_count.get(c, mpq(0)) + p
    assert by_count == {1: mpq(1, 4), 2: mpq(1, 2), 3: mpq(1, 4)}


def test_chain_rejects_corruption():
    good = build_chain(path(3), (0,))
    bad = StateChain(good.n, good.masks,
                     [((0, mpq(1, 2)), (1, mpq(1, 4))), *good.rows[1:]])
    with pytest.raises(ValueError):
        bad.validate()
    bad = StateChain(good.n, good.masks[::-1], good.rows)
    with pytest.raises(ValueError):
        bad.validate()
    # a non-final absorbing state can never reach all-blue
    rows = [((0, mpq(1)),), *good.rows[1:]]
    with pytest.raises(ValueError):
        StateChain(good.n, good.masks, rows).validate()


def test_solve_rejects_subdiagonal():
    rows = (
        ((0, mpq(1, 2)), (2, mpq(1, 2))),
        ((0, mpq(1, 2)), (2, mpq(1, 2))),
        ((2, mpq(1)),),
    )
    with pytest.raises(ValueError):
        solve_ept_rows(rows)


def test_ept_exact_small_values():
    assert ept_exact(path(2), (0,)) == 1
    # P_3 is 2 from every start: once a leaf is blue, the rest is forced
    assert [ept_exact(path(3), (v,)) for v in range(3)] == [2, 2, 2]
    assert ept_exact(cycle(4), (0,)) == mpq(7, 3)
    assert ept_exact(path(3), (0, 1, 2)) == 0


def test_ept_exact_validation():
    with pytest.raises(ValueError):
        ept_exact(Graph(3, [(0, 1)]), (0,))  # disconnected
    with pytest.raises(ValueError):
        ept_exact(path(3), ())
    with pytest.raises(StateCapExceeded):
        ept_exact(complete(12), (0,), cap=100)


def test_ept_graph_minimum_and_argmin():
    val, argmin = ept_graph(star(3))
    assert val == mpq(21, 8)
    assert argmin == [1, 2, 3]  # the leaves, not the center
    val, argmin = ept_graph(diamond())
    assert val == mpq(2911, 1140)
    assert argmin == [0, 2]  # the degree-3 pair


def test_series_partials_converge_and_are_monotone():
    for g, b in [(path(4), (0,)), (cycle(5), (0,)), (star(3), (0,))]:
        chain = build_chain(g, b)
        exact = solve_ept_rows(chain.rows)
        partials = ept_series_partials(chain, 400)
        assert len(partials) == 400
        assert all(b >= a for a, b in zip(partials, partials[1:]))
        assert abs(partials[-1] - exact) <= mpq(1, 10 ** 12)
        assert ept_series_partial(chain, 400) == partials[-1]


def test_series_single_state_chain():
    # already absorbed: every partial sum is exactly zero
    chain = build_chain(complete(1), (0,))
    assert ept_series_partial(chain, 50) == 0


def test_series_rejects_bad_r():
    chain = build_chain(path(3), (0,))
    with pytest.raises(ValueError):
        ept_series_partial(chain, 0)


def test_diagonal_spectrum():
    chain = build_chain(path(2), (0,))
    assert diagonal_spectrum(chain) == [mpq(0), mpq(1)]
    rand = random.Random(3)
    for _ in range(10):
        g = random_connected_graph(rand, max_n=7)
        spec = diagonal_spectrum(build_chain(g, (0,)))
        assert spec == sorted(spec)
        assert all(0 <= v <= 1 for v in spec)
        assert spec[-1] == 1


def test_render_decimal():
    assert render_decimal(mpq(21, 8), 6) == "2.625"
    assert render_decimal(mpq(951, 380), 6) == "2.50263"
    assert render_decimal(mpq(1, 3), 6) == "0.333333"
    assert render_decimal(mpq(0), 6) == "0"
    # half-even at the boundary digit
    assert render_decimal(mpq(25, 1000), 1) == "0.02"
    with pytest.raises(ValueError):
        render_decimal(mpq(1), 0)


def test_ept_report():
    rep = ept_report(star(3), (3,), graph_id="K1_3", digits=6)
    assert isinstance(rep, EptReport)
    assert rep.graph_id == "K1_3"
    assert rep.initial == frozenset({3})
    assert rep.exact == mpq(21, 8)
    assert rep.decimal == "2.625"
    assert rep.state_count >= 2
    assert rep.elapsed >= 0.0
    assert ept_report(path(2), (0, 1)).exact == 0
