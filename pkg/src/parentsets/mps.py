"""Per-variable lists of maximal parent sets.

A list is a plain Python list of :class:`MpsEntry`, kept sorted by
:func:`entry_key`: score, then cardinality, then bitmask value. The total order
makes results reproducible regardless of how work was partitioned.
"""

import math
from typing import NamedTuple


class MpsEntry(NamedTuple):
    parents: int
    score: float
    flagged: bool = False


def entry_key(e):
    return (e.score, e.parents.bit_count(), e.parents)


def query_d(entries, parents):
    """Best score among entries whose parent set is a subset of ``parents``.

    Lists are score-sorted, so the first subset found is the answer.
    """
    for e in entries:
        if e.parents & ~parents == 0:
            return e.score
    return math.inf


def strict_subset_min(entries, parents):
    for e in entries:
        if e.parents & ~parents == 0 and e.parents != parents:
            return e.score
    return math.inf


def maximality_test(entries, parents, score):
    """True iff ``score`` beats every entry on a strict subset of ``parents``; ties lose."""
    return score < strict_subset_min(entries, parents)


def merge(lists, deltas):
    """Fold batches of ``(variable, MpsEntry)`` into ``lists``; returns new lists.

    Duplicate parent sets keep one entry (an unflagged copy wins over a flagged
    one). No cross-elimination happens here: entries produced within one BFS
    layer have equal cardinality and cannot dominate each other.
    """
    out = [list(lst) for lst in lists]
    touched = set()
    for batch in deltas:
        for var, entry in batch:
            out[var].append(entry)
            touched.add(var)
    for var in touched:
        best = {}
        for e in out[var]:
            old = best.get(e.parents)
            if old is None or (old.flagged and not e.flagged):
                best[e.parents] = e
        out[var] = sorted(best.values(), key=entry_key)
    return out


def verify_flagged(entries):
    """Drop flagged entries dominated by a strict subset with score <= theirs.

    Every entry carries the exact score of its parent set, so any entry, flagged
    or not, is a valid witness of domination. A strict subset with an equal
    score sorts earlier (smaller cardinality), so only the prefix is scanned.
    Survivors are returned unflagged.
    """
    out = []
    for idx, e in enumerate(entries):
        if e.flagged:
            dominated = any(w.parents & ~e.parents == 0 and w.parents != e.parents
                            for w in entries[:idx])
            if dominated:
                continue
            e = e._replace(flagged=False)
        out.append(e)
    return out
