import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twsolve import (
    Contractor,
    Graph,
    components,
    compose,
    contract,
    contract_edge,
    is_clique,
    neighborhood,
)
from twsolve.errors import ContractorError, GraphInputError
from twsolve.graph import quotient_contractor

from conftest import complete_graph, cycle_graph, path_graph, random_connected


def test_neighborhood_examples():
    c4 = cycle_graph(4)
    assert neighborhood(c4, {1}) == {2, 4}
    assert neighborhood(complete_graph(4), {1, 2}) == {3, 4}
    assert neighborhood(path_graph(3), {1, 3}) == {2}


def test_neighborhood_rejects_unknown_vertex():
    with pytest.raises(GraphInputError):
        neighborhood(cycle_graph(4), {5})


def test_components_examples():
    assert components(cycle_graph(4), {2, 4}) == [{2}, {4}]
    assert components(complete_graph(4), {2, 3, 4}) == [{2, 3, 4}]
    assert components(path_graph(5), {1, 2, 4, 5}) == [{1, 2}, {4, 5}]


def test_contract_examples():
    c4 = cycle_graph(4)
    tri = contract(c4, Contractor(c4, [{1, 2}, {3}, {4}]))
    assert tri.n == 3 and tri.num_edges() == 3
    k4 = complete_graph(4)
    k3 = contract(k4, Contractor(k4, [{1, 2}, {3}, {4}]))
    assert k3 == complete_graph(3)
    g = random_connected(7, 12, 3)
    assert contract(g, Contractor.identity(g)) == g


def test_contract_rejects_disconnected_part():
    c4 = cycle_graph(4)
    with pytest.raises(ContractorError):
        Contractor(c4, [{1, 3}, {2}, {4}])


def test_contract_edge_examples():
    g, gamma = contract_edge(path_graph(3), (1, 2))
    assert g.n == 2 and g.num_edges() == 1
    assert gamma.preimage_set({1}) == {1, 2}
    g, _ = contract_edge(cycle_graph(4), (1, 2))
    assert g.num_edges() == 3 and g.n == 3
    g, _ = contract_edge(cycle_graph(5), (2, 3))
    assert (g.n, g.num_edges()) == (4, 4)
    with pytest.raises(GraphInputError):
        contract_edge(path_graph(3), (1, 3))


def test_compose_examples():
    c5 = cycle_graph(5)
    outer = Contractor(c5, [{1, 2}, {3}, {4}, {5}])
    q = contract(c5, outer)
    merged = outer.mapping[1]
    inner = Contractor(q, [{merged, outer.mapping[3]}] + [
        {outer.mapping[v]} for v in (4, 5)
    ])
    combined = compose(c5, outer, inner)
    assert frozenset({1, 2, 3}) in combined.parts
    # identity outer keeps inner's parts
    ident = Contractor.identity(c5)
    gamma = Contractor(c5, [{1, 2}, {3}, {4}, {5}])
    assert compose(c5, ident, gamma).parts == gamma.parts


def test_compose_two_single_edges_on_k4():
    k4 = complete_graph(4)
    q, first = contract_edge(k4, (1, 2))
    q2, second = contract_edge(q, (1, 2))
    combined = compose(k4, first, second)
    sizes = sorted(len(p) for p in combined.parts)
    assert sizes == [1, 3]
    assert contract(k4, combined) == q2


def test_is_clique_examples():
    assert is_clique(complete_graph(4), {1, 2, 3})
    assert not is_clique(cycle_graph(4), {1, 2, 3})
    assert is_clique(cycle_graph(4), set())
    assert is_clique(cycle_graph(4), {3})


def test_simple_and_symmetric():
    with pytest.raises(GraphInputError):
        Graph(3, [(1, 1)])
    with pytest.raises(GraphInputError):
        Graph(3, [(1, 2), (2, 1)])
    g = Graph(3, [(1, 2)])
    assert g.has_edge(2, 1)


@st.composite
def small_graph(draw):
    n = draw(st.integers(min_value=2, max_value=8))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    picks = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return Graph(n, picks)


@settings(max_examples=150, deadline=None)
@given(small_graph(), st.randoms(use_true_random=False))
def test_contract_edge_matches_explicit_contractor(g, rnd):
    edges = g.edges()
    if not edges:
        return
    e = edges[rnd.randrange(len(edges))]
    via_edge, gamma = contract_edge(g, e)
    explicit = contract(g, Contractor(g, [set(e)] + [
        {v} for v in range(1, g.n + 1) if v not in e
    ]))
    assert via_edge == explicit


@settings(max_examples=150, deadline=None)
@given(small_graph(), st.randoms(use_true_random=False))
def test_contraction_adjacency_soundness(g, rnd):
    # every quotient edge is witnessed by an original edge between the parts
    if g.n < 2:
        return
    parts = []
    for cmask in g.components_mask(g.full_mask):
        verts = sorted(v for v in range(1, g.n + 1) if (cmask >> (v - 1)) & 1)
        rnd.shuffle(verts)
        cuts = sorted(rnd.sample(range(1, len(verts)), rnd.randrange(len(verts))))
        chunks = [verts[i:j] for i, j in zip([0] + cuts, cuts + [len(verts)])]
        # chunks of a shuffled order are not connected in general: fall back
        # to singletons when a chunk is disconnected
        for chunk in chunks:
            sub = 0
            for v in chunk:
                sub |= 1 << (v - 1)
            if g.is_connected_mask(sub):
                parts.append(chunk)
            else:
                parts.extend([v] for v in chunk)
    gamma = Contractor(g, parts)
    q = contract(g, gamma)
    for w1, w2 in q.edges():
        p1 = gamma.preimage_set({w1})
        p2 = gamma.preimage_set({w2})
        assert any(g.has_edge(u, v) for u in p1 for v in p2)


def test_components_connected_iff_single():
    g = random_connected(7, 9, 5)
    assert len(components(g, set(range(1, 8)))) == 1
    h = Graph(4, [(1, 2), (3, 4)])
    assert len(components(h, {1, 2, 3, 4})) == 2


@settings(max_examples=100, deadline=None)
@given(small_graph())
def test_neighborhood_disjoint_from_input(g):
    u = {1, min(2, g.n)}
    assert not (neighborhood(g, u) & u)


def test_quotient_contractor_roundtrip():
    g = cycle_graph(6)
    fine = Contractor(g, [{1, 2}, {3}, {4}, {5}, {6}])
    coarse = Contractor(g, [{1, 2, 3}, {4, 5}, {6}])
    q = quotient_contractor(g, fine, coarse)
    assert contract(contract(g, fine), q) == contract(g, coarse)
    spanning = Contractor(g, [{1}, {2}, {3, 4}, {5}, {6}])
    with pytest.raises(ContractorError):
        quotient_contractor(g, spanning, coarse)
