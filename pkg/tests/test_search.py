import math

import pytest

from twsolve import BlockSearch, all_pmcs, bt_dp, greedy_td, tw_pi, validate
from twsolve.errors import GraphInputError, StateError
from twsolve.graph import mask_of
from twsolve.oracle import treewidth_exact

from conftest import (
    complete_graph,
    connected_only,
    cycle_graph,
    path_graph,
    random_connected,
)

INF = math.inf


def test_new_state_examples():
    assert BlockSearch(cycle_graph(4), 2).width() == INF
    assert BlockSearch(complete_graph(4), 3).width() == INF
    from twsolve import Graph

    s = BlockSearch(Graph(1), 0)
    s.import_pmcs({frozenset({1})})
    assert s.width() == 0


def test_import_examples():
    c4 = cycle_graph(4)
    s = BlockSearch(c4, 2)
    s.import_pmcs(all_pmcs(c4))
    assert s.width() == 2
    before = s.width()
    s.import_pmcs(set())
    assert s.width() == before
    # a PMC beyond the size bound is retained but feeds no feasible block
    s3 = BlockSearch(path_graph(5), 0)
    s3.import_pmcs({frozenset({1, 2})})
    assert mask_of({1, 2}) in s3.pi
    assert not s3.feasible


def test_import_rejects_non_pmc():
    c4 = cycle_graph(4)
    s = BlockSearch(c4, 2)
    with pytest.raises(GraphInputError) as err:
        s.import_pmcs({frozenset({1, 2, 3, 4})})
    assert "[1, 2, 3, 4]" in str(err.value)


def test_width_and_useful_examples():
    c4 = cycle_graph(4)
    s = BlockSearch(c4, 2)
    s.import_pmcs(all_pmcs(c4))
    assert s.width() == 2
    useful = s.useful_pmcs()
    assert useful == all_pmcs(c4)  # both chordings optimal
    assert tw_pi(c4, useful) <= s.width()
    fresh = BlockSearch(c4, 2)
    assert fresh.width() == INF
    with pytest.raises(StateError):
        fresh.useful_pmcs()


def test_useful_excludes_unused_pmcs():
    c5 = cycle_graph(5)
    s = BlockSearch(c5, 2)
    s.import_pmcs(all_pmcs(c5))
    useful = s.useful_pmcs()
    assert s.width() == 2
    assert all(len(x) <= 3 for x in useful)
    assert tw_pi(c5, useful) == 2


def test_search_new_feasible_examples():
    c4 = cycle_graph(4)
    s = BlockSearch(c4, 2)
    s.import_pmcs(all_pmcs(c4))
    s._seed_vertices()
    blocks = s.search_new_feasible(frozenset({2}))
    assert frozenset({1, 2, 3}) in set(blocks) or s.full_feasible
    s_low = BlockSearch(c4, 1)
    s_low._seed_vertices()
    assert not s_low.feasible  # no width-1 blocks on C4
    with pytest.raises(StateError):
        s_low.search_new_feasible(frozenset({2}))
    k4 = complete_graph(4)
    s4 = BlockSearch(k4, 3)
    s4.finish()
    assert s4.full_feasible and s4.width() == 3


def test_improve_budget_accounting():
    c5 = cycle_graph(5)
    s = BlockSearch(c5, 2)
    s.import_pmcs(all_pmcs(c5))
    steps_before = s.steps
    s.improve(0)
    assert s.steps == steps_before
    s.improve(50)
    assert s.steps <= 50
    s.improve(120)
    assert s.steps <= 120


def test_improve_reaches_width_on_c4():
    c4 = cycle_graph(4)
    s = BlockSearch(c4, 2)
    s.import_pmcs(all_pmcs(c4))
    s.improve(10_000)
    assert s.width() == 2
    s_low = BlockSearch(c4, 1)
    s_low.improve(10_000)
    assert s_low.width() == INF


def test_finish_examples():
    assert BlockSearch(cycle_graph(4), 2).finish() is True
    assert BlockSearch(cycle_graph(4), 1).finish() is False
    assert BlockSearch(complete_graph(5), 3).finish() is False


def test_finish_exact_all_small_graphs(graphs_to_6):
    for g in connected_only(graphs_to_6, 6):
        t = treewidth_exact(g)
        for k in range(0, g.n):
            assert BlockSearch(g, k).finish() == (t <= k), (g.edges(), k)


def test_width_never_increases_and_witnessed():
    g = random_connected(9, 16, 7)
    k = treewidth_exact(g)
    s = BlockSearch(g, k)
    last = s.width()
    s.import_pmcs(set(greedy_td(g).bags))
    for budget in (100, 500, 2000):
        s.improve(budget)
        w = s.width()
        assert w <= last
        last = w
    s.finish()
    assert s.width() <= k
    res = bt_dp(g, s.pmc_set(), max_solutions=1)
    assert res.decompositions and res.decompositions[0].width() == s.width()
    ok, report = validate(g, res.decompositions[0])
    assert ok, report


def test_smallness_filter(graphs_to_6):
    # every stored block satisfies the smallness predicate directly
    for g in connected_only(graphs_to_6, 5):
        if g.n < 2:
            continue
        k = max(treewidth_exact(g) - 1, 0)
        s = BlockSearch(g, k)
        s.finish()
        for bmask, smask in s.feasible.items():
            assert s._is_small(bmask, smask)
