"""Low-level counting kernels shared by the dataset and scoring modules."""

from functools import lru_cache

import numpy as np

# mixed-radix keys above this bound are re-compacted before the next column
_KEY_LIMIT = 1 << 62


@lru_cache(maxsize=16)
def xlogx_table(m):
    """Return ``k * log2(k)`` for k in ``0..m`` with the 0 log 0 = 0 convention."""
    k = np.arange(m + 1, dtype=np.float64)
    out = np.zeros(m + 1, dtype=np.float64)
    out[1:] = k[1:] * np.log2(k[1:])
    out.flags.writeable = False
    return out


def group_rows(columns, arities, members):
    """Group rows of ``columns`` by their projection onto ``members``.

    Returns ``(group_of_row, group_count)``. Group ids are dense, ordered by the
    mixed-radix key of the configuration, so they do not depend on row order.
    """
    m = columns.shape[1]
    if not members:
        return np.zeros(m, dtype=np.int64), 1
    key = np.zeros(m, dtype=np.int64)
    bound = 1
    for j in members:
        r = int(arities[j])
        if bound * r > _KEY_LIMIT:
            uniq, key = np.unique(key, return_inverse=True)
            key = key.astype(np.int64, copy=False)
            bound = len(uniq)
        key = key * r + columns[j]
        bound *= r
    if bound <= 4 * m + 4096:
        present = np.bincount(key, minlength=bound) > 0
        ids = np.cumsum(present) - 1
        return ids[key], int(ids[-1]) + 1
    uniq, inv = np.unique(key, return_inverse=True)
    return inv.astype(np.int64, copy=False), len(uniq)


def weighted_cond_entropies(group, group_count, targets, rmax, xlogx):
    """Return ``m * H(X | U)`` in bits for each row of ``targets``.

    ``targets`` is a ``(t, m)`` array of state codes, all below ``rmax``. The
    entropy is accumulated group by group, so pure groups contribute exactly 0.
    """
    t = targets.shape[0]
    width = group_count * rmax
    flat = (np.arange(t, dtype=np.int64)[:, None] * width
            + (group * rmax)[None, :] + targets).ravel()
    counts = np.bincount(flat, minlength=t * width).reshape(t, group_count, rmax)
    sizes = counts[0].sum(axis=1)
    per_group = xlogx[sizes][None, :] - xlogx[counts].sum(axis=2)
    np.maximum(per_group, 0.0, out=per_group)
    return per_group.sum(axis=1)
