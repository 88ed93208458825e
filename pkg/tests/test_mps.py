import math

import pytest

from parentsets import mps
from parentsets.mps import MpsEntry, entry_key
from parentsets.lattice import varset
from parentsets.oracle import _joint_entropies, brute_force, mdl_score
from parentsets.synth import random_network_data

E = MpsEntry
L = [E(varset([2]), 3.0), E(0, 5.0)]


def test_query_d():
    assert mps.query_d(L, varset([1, 2])) == 3.0
    assert mps.query_d([E(0, 5.0)], varset([0])) == 5.0
    assert mps.query_d([], 0) == math.inf


def test_maximality_test_ties_lose():
    assert mps.maximality_test(L, varset([1, 2]), 2.5)
    assert not mps.maximality_test(L, varset([1, 2]), 3.0)
    assert mps.maximality_test([], 0, 123.0)


def test_merge_deduplicates_and_sorts():
    a = (1, E(varset([3]), 4.2))
    out = mps.merge([[E(0, 9.0)], [E(0, 7.0)]], [[a], [a, (0, E(varset([1]), 1.0))]])
    assert out[1] == [E(varset([3]), 4.2), E(0, 7.0)]
    assert out[0] == [E(varset([1]), 1.0), E(0, 9.0)]


def test_merge_keeps_unflagged_duplicate():
    out = mps.merge([[]], [[(0, E(1, 2.0, True))], [(0, E(1, 2.0))]])
    assert out[0] == [E(1, 2.0)]


def test_merge_size_bound_and_order():
    a = [E(0, 5.0), E(0b1, 4.0), E(0b10, 4.0)]
    a.sort(key=entry_key)
    b = [(0, E(0b110, 3.5)), (0, E(0b101, 3.5)), (0, E(0b1, 4.0))]
    out = mps.merge([a], [b])[0]
    assert len(out) <= len(a) + len(b)
    assert out == sorted(out, key=entry_key)
    assert [e.parents for e in out] == [0b101, 0b110, 0b1, 0b10, 0]


def test_verify_flagged():
    lst = sorted([E(0, 6.0), E(0b1, 3.5), E(0b11, 4.0, True), E(0b110, 2.0, True)],
                 key=entry_key)
    out = mps.verify_flagged(lst)
    assert E(0b11, 4.0, True) not in out and E(0b11, 4.0) not in out
    assert E(0b110, 2.0) in out
    assert not any(e.flagged for e in out)


def test_verify_flagged_equal_score_subset_wins():
    lst = sorted([E(0, 5.0), E(0b1, 3.0), E(0b11, 3.0, True)], key=entry_key)
    assert mps.verify_flagged(lst) == [E(0b1, 3.0), E(0, 5.0)]


@pytest.mark.parametrize("seed", range(4))
def test_query_d_matches_recursion(seed):
    """query_d over oracle lists equals the brute-force optimum over subsets."""
    ds = random_network_data(6, 120, seed=seed)
    joint = _joint_entropies(ds.columns)
    found = brute_force(ds)
    for i in range(ds.n):
        entries = sorted((E(varset(p), s) for p, s in found[i].items()), key=entry_key)
        others = [j for j in range(ds.n) if j != i]
        for u in range(1 << len(others)):
            uset = [others[b] for b in range(len(others)) if u >> b & 1]
            best = math.inf
            for w in range(1 << len(others)):
                if w & ~u:
                    continue
                wset = [others[b] for b in range(len(others)) if w >> b & 1]
                q = math.prod(ds.arities[j] for j in wset)
                best = min(best, mdl_score(ds.m, ds.arities[i], q,
                                           joint[varset(wset) | 1 << i], joint[varset(wset)]))
            assert mps.query_d(entries, varset(uset)) == pytest.approx(best, abs=1e-9)
