from math import comb

import pytest
from hypothesis import given, strategies as st

from parentsets.lattice import (LatticeNode, cardinality, full_set, is_subset,
                                layer_node_count, max_bit, members, root,
                                successors, varset)


def test_root():
    assert root(4) == LatticeNode(0b1111, 0)
    assert root(1) == LatticeNode(0b1, 0)
    assert root(4).layer == 0
    with pytest.raises(ValueError):
        root(0)


def test_varset_helpers():
    s = varset([0, 3, 5])
    assert list(members(s)) == [0, 3, 5]
    assert max_bit(s) == 5 and max_bit(0) == -1
    assert cardinality(s) == 3
    assert is_subset(varset([3]), s) and not is_subset(varset([1]), s)


def test_successors_follow_max_element():
    # 0-based {1} corresponds to 1-based j=2: n - j = 2 successors
    node = LatticeNode(full_set(4) & ~0b10, 0b10)
    out = successors(node, node.targets, 4)
    assert [c.parents for c in out] == [0b110, 0b1010]
    assert all(c.targets & c.parents == 0 for c in out)
    assert successors(LatticeNode(0b0111, 0b1000), 0b0111, 4) == []


def test_successor_with_empty_targets_is_dropped():
    node = LatticeNode(0b100, 0b001)
    # adding X2 would leave no target; adding X1 keeps X2
    assert successors(node, 0b100, 3) == [LatticeNode(0b100, 0b011)]


@pytest.mark.parametrize("n,l,expected", [(5, 2, 10), (4, 0, 1), (37, 2, 666)])
def test_layer_node_count(n, l, expected):
    assert layer_node_count(n, l) == expected


def test_folding_ratio():
    n, l = 5, 2
    unfolded = n * comb(n - 1, l)
    assert unfolded == 30
    assert unfolded / layer_node_count(n, l) == n - l


def _enumerate(n):
    layers = {}
    frontier = [root(n)]
    while frontier:
        for node in frontier:
            layers.setdefault(node.layer, []).append(node.parents)
        frontier = [c for node in frontier for c in successors(node, node.targets, n)]
    return layers


@pytest.mark.parametrize("n", range(1, 11))
def test_unpruned_generation_is_exact_powerset(n):
    layers = _enumerate(n)
    for l in range(n):
        assert len(layers[l]) == comb(n, l) == len(set(layers[l]))
        assert all(p.bit_count() == l for p in layers[l])
    # the full set has no non-parent target left, so it is never generated
    assert n not in layers


@given(st.integers(2, 12).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(1, (1 << n) - 2))))
def test_unique_generation_path(args):
    n, u = args
    targets = full_set(n) & ~u
    generators = []
    for j in members(u):
        pred = u & ~(1 << j)
        node = LatticeNode(full_set(n) & ~pred, pred)
        if any(c.parents == u for c in successors(node, node.targets, n)):
            generators.append(j)
    assert targets
    assert generators == [max_bit(u)]
