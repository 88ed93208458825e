"""Brute-force reference for small tables.

Scores every (variable, parent set) pair from joint-entropy tables, solves the
optimal-parent-set recursion over all subsets and reads maximal parent sets off
the definition. Nothing here is shared with the engine or the scoring kernel.
"""

import math

import numpy as np

MAX_VARIABLES = 20


class OracleSizeError(ValueError):
    pass


def _joint_entropies(columns):
    """Return m * H(S) in bits for every subset S of the variables, indexed by bitmask."""
    n, m = columns.shape
    rows = columns.T
    out = np.zeros(1 << n)
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if mask >> j & 1]
        _, counts = np.unique(rows[:, cols], axis=0, return_counts=True)
        p = counts / m
        out[mask] = -m * float(np.sum(p * np.log2(p)))
    return out


def mdl_score(m, r_i, q, joint_with, joint_without):
    return (joint_with - joint_without) + 0.5 * math.log2(m) * q * (r_i - 1)


def brute_force(dataset):
    """All maximal parent sets per original variable index.

    Returns ``{i: {frozenset(parents): score}}`` using original indices.
    """
    n, m = dataset.n, dataset.m
    if n > MAX_VARIABLES:
        raise OracleSizeError(f"oracle limited to {MAX_VARIABLES} variables, got {n}")
    cols = np.asarray(dataset.columns)
    ar = dataset.arities
    joint = _joint_entropies(cols)
    out = {}
    for i in range(n):
        others = [j for j in range(n) if j != i]
        k = len(others)
        s = np.empty(1 << k)
        for sub in range(1 << k):
            full = 0
            q = 1
            for b, j in enumerate(others):
                if sub >> b & 1:
                    full |= 1 << j
                    q *= ar[j]
            s[sub] = mdl_score(m, ar[i], q, joint[full | 1 << i], joint[full])
        d = np.empty(1 << k)
        found = {}
        # increasing integer order visits every subset before its supersets
        for sub in range(1 << k):
            best_sub = math.inf
            rest = sub
            while rest:
                low = rest & -rest
                best_sub = min(best_sub, d[sub ^ low])
                rest ^= low
            d[sub] = min(s[sub], best_sub)
            if s[sub] < best_sub:
                found[frozenset(others[b] for b in range(k) if sub >> b & 1)] = float(s[sub])
        out[i] = found
    return out


def optimal_scores(dataset):
    """d(Xi, X - {Xi}) per original variable: the best achievable score."""
    return {i: min(v.values()) for i, v in brute_force(dataset).items()}
