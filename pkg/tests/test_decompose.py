import pytest
from hypothesis import given, settings

from signctrl.certify import certify_bruteforce
from signctrl.decompose import (
    Path,
    PathSearchState,
    children_of,
    grow_from,
    path_search,
    root_order,
    uncovered,
    update_paths,
)
from signctrl.errors import CapExceededError
from signctrl.graph import SignedNetwork, build_graph

from test_graph import networks


def fig1_state(g, claimed=()):
    return PathSearchState(frozenset(claimed), frozenset({3, 4, 5}))


def test_children_of_root(graph):
    g = graph("fig1")
    assert children_of(g, Path(6, (3,)), fig1_state(g)) == [1, 2]


def test_children_blocked_by_ancestor_and_roots(graph):
    g = graph("fig1")
    assert children_of(g, Path(6, (3, 2)), fig1_state(g)) == []


def test_children_all_on_path():
    g = build_graph(SignedNetwork(2, {(1, 2): "+"}, (1,)))
    state = PathSearchState(frozenset(), frozenset({1}))
    assert children_of(g, Path(3, (1, 2)), state) == []


def test_children_skip_claimed(graph):
    g = graph("fig1")
    assert children_of(g, Path(6, (3,)), fig1_state(g, claimed={1})) == [2]


def test_update_paths(graph):
    g = graph("fig1")
    state = fig1_state(g)
    assert update_paths(g, [Path(6, (3, 1)), Path(6, (3, 2))], state) == []
    assert update_paths(g, [Path(6, (3,))], state) == [Path(6, (3, 1)), Path(6, (3, 2))]
    assert update_paths(g, [], state) == []


def test_fig1_paths(net):
    paths = path_search(net("fig1"))
    assert [p.nodes for p in paths] == [(3, 2), (4,), (5, 1)]
    assert [p.root_input for p in paths] == [6, 7, 8]
    assert paths[0].render() == "6 -> 3 -> 2"


def test_fig8_same_shapes(net):
    assert [p.nodes for p in path_search(net("fig8"))] == [p.nodes for p in path_search(net("fig1"))]


def test_single_node():
    paths = path_search(SignedNetwork(1, {}, (1,)))
    assert paths == [Path(2, (1,))]
    assert paths[0].length == 0 and paths[0].edges == []


def test_uncovered_node_example():
    # 2 touches ancestor 1 of every path through 3, and 1 -> 2 is shorter than 1 -> 3 -> 4
    net = SignedNetwork(4, {(1, 2): "+", (1, 3): "+", (2, 3): "+", (3, 4): "+"}, (1,))
    paths = path_search(net)
    assert [p.nodes for p in paths] == [(1, 3, 4)]
    assert uncovered(net, paths) == (2,)


def test_root_orders(net):
    n = net("fig8")
    g = build_graph(n)
    assert root_order(g, n, "input") == [1, 2, 3]
    assert root_order(g, n, "degree") == [1, 3, 2]
    with pytest.raises(ValueError):
        root_order(g, n, "random")


def test_input_order_claims_node_1_for_root_4(net):
    paths = path_search(net("fig8"), order="input")
    assert paths[1].nodes == (4, 1)


def test_path_cap():
    edges = {(1, k): "+" for k in range(2, 8)}
    net = SignedNetwork(7, edges, (1,))
    g = build_graph(net)
    start = Path(8, (1,))
    state = PathSearchState(frozenset(), frozenset({1}))
    assert len(grow_from(g, start, state)) == 6
    with pytest.raises(CapExceededError):
        grow_from(g, start, state, max_paths=5)


@settings(max_examples=80, deadline=None)
@given(networks(max_n=9))
def test_path_invariants(net):
    g = build_graph(net)
    paths = path_search(net)
    assert len(paths) == net.m
    seen = set()
    roots = set(net.input_assignment)
    for k, p in enumerate(paths, start=1):
        assert p.root == net.input_assignment[k - 1]
        assert p.root_input == net.input_node(k)
        assert not seen & set(p.nodes)
        seen |= set(p.nodes)
        assert not roots & set(p.nodes[1:])
        for a in range(len(p.nodes)):
            for b in range(a + 1, len(p.nodes)):
                adjacent = p.nodes[b] in g.adjacency[p.nodes[a]]
                assert adjacent == (b == a + 1)
        assert certify_bruteforce(p.as_graph(g)).certified
    assert path_search(net) == paths
