"""Random categorical data drawn from sparse Bayesian networks, for tests and benchmarks."""

import numpy as np

from .dataset import Dataset


def random_network_data(n, m, arity_range=(2, 4), max_parents=2, seed=None,
                        concentration=0.5):
    """Sample ``m`` rows from a random DAG over ``n`` variables.

    Each variable gets up to ``max_parents`` parents among earlier variables and
    a conditional table drawn from a symmetric Dirichlet. Returns a Dataset
    whose arities are the drawn ones, so unobserved states still count.
    """
    rng = np.random.default_rng(seed)
    lo, hi = arity_range
    arities = rng.integers(lo, hi + 1, size=n)
    cols = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        k = int(rng.integers(0, min(max_parents, i) + 1))
        parents = sorted(rng.choice(i, size=k, replace=False).tolist()) if k else []
        q = int(np.prod([arities[p] for p in parents])) if parents else 1
        table = rng.dirichlet(np.full(arities[i], concentration), size=q)
        key = np.zeros(m, dtype=np.int64)
        for p in parents:
            key = key * arities[p] + cols[p]
        cdf = np.cumsum(table[key], axis=1)
        u = rng.random(m)[:, None]
        cols[i] = np.minimum((u > cdf).sum(axis=1), arities[i] - 1)
    return Dataset.from_codes(cols, arities.tolist())
