"""MDL scoring of every target of a folded lattice node from one shared grouping."""

import math
from dataclasses import dataclass

import numpy as np

from ._kernel import group_rows, weighted_cond_entropies, xlogx_table
from .lattice import members

# q above this saturates; the resulting complexity always triggers Condition 1
Q_SATURATION = 1 << 62


@dataclass(frozen=True)
class GroupIndex:
    group_of_row: np.ndarray
    group_count: int

    @property
    def group_sizes(self):
        return np.bincount(self.group_of_row, minlength=self.group_count)


@dataclass(frozen=True)
class ScoreResult:
    """Scores in bits for ``targets`` (canonical positions) given one parent set."""

    parents: int
    targets: tuple
    score: np.ndarray
    nc: np.ndarray
    cond_entropy: np.ndarray

    def as_dict(self):
        return {t: (float(s), float(c), float(h))
                for t, s, c, h in zip(self.targets, self.score, self.nc, self.cond_entropy)}


def group_by(dataset, parents):
    """Group the rows of ``dataset`` by their projection onto canonical ``parents``."""
    group, count = group_rows(dataset.canon_columns, dataset.canon_arities,
                              list(members(parents)))
    return GroupIndex(group, count)


def network_complexity(m, r_i, parent_arities):
    """0.5 * log2(m) * q * (r_i - 1) with q the product of parent arities."""
    if r_i <= 1:
        return 0.0
    q = 1
    for r in parent_arities:
        q *= r
        if q > Q_SATURATION:
            return math.inf
    return 0.5 * math.log2(m) * q * (r_i - 1)


class Scorer:
    """MDL scorer bound to one dataset.

    Per-dataset constants are computed once so a scorer can be shipped to a
    worker and reused for every node it processes.
    """

    def __init__(self, dataset):
        self.columns = dataset.canon_columns
        self.arities = dataset.canon_arities
        self.m = dataset.m
        self.rmax = max(self.arities)
        self.xlogx = xlogx_table(self.m)

    def nc(self, target, q):
        r = self.arities[target]
        if r <= 1:
            return 0.0
        if q > Q_SATURATION:
            return math.inf
        return 0.5 * math.log2(self.m) * q * (r - 1)

    def parent_configs(self, parents):
        q = 1
        for j in members(parents):
            q *= self.arities[j]
            if q > Q_SATURATION:
                return Q_SATURATION + 1
        return q

    def score(self, targets, parents):
        """Score every target in ``targets`` (a bitmask) against ``parents``."""
        tvars = tuple(members(targets))
        group, count = group_rows(self.columns, self.arities, list(members(parents)))
        bits = weighted_cond_entropies(group, count, self.columns[list(tvars)], self.rmax,
                                       self.xlogx)
        q = self.parent_configs(parents)
        nc = np.array([self.nc(t, q) for t in tvars])
        return ScoreResult(parents, tvars, bits + nc, nc, bits / self.m)


def score_targets(dataset, node):
    """Score all targets of ``node``; the grouping on its parents is built once."""
    if node.targets & node.parents:
        raise ValueError("targets and parents overlap")
    return Scorer(dataset).score(node.targets, node.parents)
