"""Discrete observation tables: loading, validation, arities and variable ordering."""

import csv
import io
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._kernel import group_rows, weighted_cond_entropies, xlogx_table


class DatasetError(ValueError):
    """Raised when an input table or arity declaration is invalid."""


class ConstantVariableWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class Dataset:
    """A complete table of ``m`` categorical observations over ``n`` variables.

    ``columns`` is indexed by original variable index. ``order[c]`` gives the
    original index of the variable at canonical position ``c``; every internal
    bitmask uses canonical positions.
    """

    names: tuple
    columns: np.ndarray
    arities: tuple
    order: tuple
    full_cond_entropy: tuple
    canon_columns: np.ndarray = field(repr=False)
    canon_arities: tuple = field(repr=False)
    # m * H(Xi | rest) per canonical position, kept unrounded for the pruning bound
    canon_full_cond_bits: tuple = field(repr=False)

    @property
    def n(self):
        return self.columns.shape[0]

    @property
    def m(self):
        return self.columns.shape[1]

    @classmethod
    def from_codes(cls, columns, arities=None, names=None):
        """Build a dataset from integer state codes, one row per variable."""
        cols = np.asarray(columns, dtype=np.int64)
        if cols.ndim != 2 or cols.shape[0] < 1:
            raise DatasetError("expected a non-empty 2-d array of codes (variables x rows)")
        n, m = cols.shape
        if m < 2:
            raise DatasetError(f"need at least 2 observations, got {m}")
        if cols.min() < 0:
            raise DatasetError("state codes must be non-negative")
        observed = [int(c.max()) + 1 for c in cols]
        if arities is None:
            arities = observed
        arities = tuple(int(r) for r in arities)
        if len(arities) != n:
            raise DatasetError("one arity per variable required")
        for i, (r, o) in enumerate(zip(arities, observed)):
            if r < o:
                raise DatasetError(f"variable {i}: declared arity {r} below observed {o}")
        if names is None:
            names = tuple(f"X{i}" for i in range(n))
        names = tuple(str(s) for s in names)
        if len(names) != n:
            raise DatasetError("one name per variable required")
        if len(set(names)) != n:
            raise DatasetError("variable names must be unique")
        for i, r in enumerate(arities):
            if r == 1:
                warnings.warn(f"variable {names[i]!r} is constant", ConstantVariableWarning,
                              stacklevel=2)

        cols.flags.writeable = False
        bits = [_full_cond_bits(cols, arities, i) for i in range(n)]
        entropies = tuple(b / m for b in bits)
        order = canonical_order(arities, entropies)
        canon = np.ascontiguousarray(cols[list(order)])
        canon.flags.writeable = False
        return cls(
            names=names,
            columns=cols,
            arities=arities,
            order=order,
            full_cond_entropy=entropies,
            canon_columns=canon,
            canon_arities=tuple(arities[o] for o in order),
            canon_full_cond_bits=tuple(bits[o] for o in order),
        )

    def canonical_names(self):
        return tuple(self.names[o] for o in self.order)


def canonical_order(arities, full_cond_entropies):
    """Sort variables by arity descending, then conditional entropy ascending, then index."""
    if len(arities) != len(full_cond_entropies):
        raise ValueError("arities and entropies differ in length")
    return tuple(sorted(range(len(arities)),
                        key=lambda i: (-arities[i], full_cond_entropies[i], i)))


def _full_cond_bits(columns, arities, i):
    n, m = columns.shape
    rest = [j for j in range(n) if j != i]
    group, count = group_rows(columns, arities, rest)
    bits = weighted_cond_entropies(group, count, columns[i:i + 1], max(arities[i], 1),
                                   xlogx_table(m))
    return float(bits[0])


def full_conditional_entropy(dataset, i):
    """H(Xi | all other variables) in bits, for original variable index ``i``."""
    if not 0 <= i < dataset.n:
        raise IndexError(i)
    return _full_cond_bits(dataset.columns, dataset.arities, i) / dataset.m


def read_arities(source):
    """Parse an arity sidecar: one ``name,arity`` line per variable."""
    text = source.read() if hasattr(source, "read") else source
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    out = {}
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise DatasetError(f"arity file line {lineno}: expected 'name,arity'")
        name, value = row[0].strip(), row[1].strip()
        try:
            out[name] = int(value)
        except ValueError:
            raise DatasetError(f"arity file line {lineno}: bad arity {value!r}") from None
    return out


def load(source, arities=None, delimiter=","):
    """Read a header-bearing CSV of categorical tokens into a :class:`Dataset`.

    ``source`` is a path, a text/binary stream, or bytes. ``arities`` optionally
    maps variable names to declared arities (see :func:`read_arities`). Tokens
    are coded per column in order of first appearance.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            raw = fh.read()
    elif isinstance(source, bytes):
        raw = source
    else:
        raw = source.read()
    text = raw.decode("utf-8-sig") if isinstance(raw, bytes) else raw

    rows = [r for r in csv.reader(io.StringIO(text), delimiter=delimiter) if r]
    if not rows:
        raise DatasetError("empty table")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise DatasetError("table has a header but no observations")
    n = len(header)
    codes = np.empty((n, len(body)), dtype=np.int64)
    maps = [{} for _ in range(n)]
    for r, row in enumerate(body, 2):
        if len(row) != n:
            raise DatasetError(f"row {r}: expected {n} fields, got {len(row)}")
        for j, tok in enumerate(row):
            tok = tok.strip()
            if tok == "":
                raise DatasetError(f"row {r}: missing value for {header[j]!r}")
            codes[j, r - 2] = maps[j].setdefault(tok, len(maps[j]))

    declared = None
    if arities:
        unknown = set(arities) - set(header)
        if unknown:
            raise DatasetError(f"arity declared for unknown variable(s): {sorted(unknown)}")
        declared = [max(arities.get(h, len(mp)), 0) for h, mp in zip(header, maps)]
        for h, mp, r in zip(header, maps, declared):
            if r < len(mp):
                raise DatasetError(f"variable {h!r}: declared arity {r} below observed {len(mp)}")
    else:
        declared = [len(mp) for mp in maps]
    return Dataset.from_codes(codes, declared, header)

