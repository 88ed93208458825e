"""Folded subset lattice over canonical variable positions.

A variable set is a plain ``int`` bitmask: bit ``k`` set means canonical
variable ``k`` is a member. A lattice node batches every target that shares
the same candidate parent set.
"""

from math import comb
from typing import NamedTuple


def varset(members=()):
    mask = 0
    for k in members:
        mask |= 1 << k
    return mask


def full_set(n):
    return (1 << n) - 1


def members(mask):
    """Yield member positions in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def max_bit(mask):
    """Largest member position, or -1 for the empty set."""
    return mask.bit_length() - 1


def is_subset(a, b):
    return a & ~b == 0


def cardinality(mask):
    return mask.bit_count()


class LatticeNode(NamedTuple):
    targets: int
    parents: int

    @property
    def layer(self):
        return self.parents.bit_count()


def root(n):
    if n < 1:
        raise ValueError("need at least one variable")
    return LatticeNode(full_set(n), 0)


def successors(node, survivors, n):
    """Children of ``node`` under the max-element rule.

    Only ``parents | {k}`` for ``k`` above the current maximal element is
    generated, so every subset has exactly one generating predecessor. Targets
    are the surviving targets minus the new parent; empty-target children are
    dropped.
    """
    parents = node.parents
    out = []
    for k in range(parents.bit_length(), n):
        bit = 1 << k
        t = survivors & ~bit
        if t:
            out.append(LatticeNode(t, parents | bit))
    return out


def layer_node_count(n, l):
    """Unpruned node count of layer ``l`` in the folded lattice."""
    if not 0 <= l <= n:
        raise ValueError(f"layer {l} outside 0..{n}")
    return comb(n, l)
