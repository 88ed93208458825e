import math

import pytest

from parentsets.dataset import Dataset
from parentsets.oracle import MAX_VARIABLES, OracleSizeError, brute_force, optimal_scores
from parentsets.synth import random_network_data

from conftest import copy_dataset


def test_fair_coins(coins):
    out = brute_force(coins)
    assert out == {0: {frozenset(): pytest.approx(5.0)}, 1: {frozenset(): pytest.approx(5.0)}}


def test_copy_variable_dominates_empty_set():
    ds = copy_dataset(64)
    out = brute_force(ds)
    # copy given src: entropy 0, complexity 0.5 * log2(64) * 2 * 1 = 6
    assert out[1][frozenset({0})] == pytest.approx(6.0, abs=1e-9)
    assert out[1][frozenset()] > 60.0
    assert min(out[1].values()) == pytest.approx(6.0, abs=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_empty_set_always_maximal(seed):
    out = brute_force(random_network_data(5, 80, seed=seed))
    assert all(frozenset() in v for v in out.values())


def test_size_guard():
    ds = Dataset.from_codes([[0, 1] * 2] * (MAX_VARIABLES + 1))
    with pytest.raises(OracleSizeError):
        brute_force(ds)


def test_maximal_sets_strictly_improve_on_subsets():
    out = brute_force(random_network_data(7, 200, seed=11))
    for sets in out.values():
        for p, s in sets.items():
            for q, t in sets.items():
                if q < p:
                    assert s < t
    assert optimal_scores(random_network_data(3, 50, seed=1))[0] < math.inf
