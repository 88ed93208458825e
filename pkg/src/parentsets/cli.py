"""Command-line front end: ``parentsets --input data.csv``."""

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import engine
from .dataset import DatasetError, load, read_arities
from .oracle import brute_force

EXIT_OK = 0
EXIT_ORACLE_MISMATCH = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
ORACLE_MAX_N = 16


def default_budget():
    try:
        total = os.sysconf("SC_PHYS_PAGES") * os.sysconf("SC_PAGE_SIZE")
    except (ValueError, OSError, AttributeError):
        return None
    return int(total * 0.75)


def build_parser():
    p = argparse.ArgumentParser(
        prog="parentsets",
        description="Enumerate all maximal parent sets of every variable under the MDL score.")
    p.add_argument("--input", required=True, help="CSV with a header row of variable names")
    p.add_argument("--output", help="result file (default: stdout)")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--memory-budget", type=int, default=None, metavar="BYTES",
                   help="frontier budget in bytes (default: 75%% of physical memory)")
    p.add_argument("--chunks-per-worker", type=int, default=4)
    p.add_argument("--arities", help="optional sidecar of 'name,arity' lines")
    p.add_argument("--stats", help="write run statistics as key=value lines")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--force-dfs-layer", type=int, default=None, metavar="L")
    p.add_argument("--max-layer", type=int, default=None, metavar="L")
    p.add_argument("--oracle-check", action="store_true",
                   help=f"compare against brute force (n <= {ORACLE_MAX_N})")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def format_score(score):
    return f"{score:.9f}"


def render(records, fmt):
    buf = io.StringIO()
    if fmt == "jsonl":
        for var, parents, score in records:
            # score is a JSON number with a fixed 9-decimal rendering
            buf.write('{"variable": %s, "parents": %s, "score": %s}\n'
                      % (json.dumps(var), json.dumps(parents), format_score(score)))
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["variable", "parents", "score"])
        for var, parents, score in records:
            w.writerow([var, ";".join(parents), format_score(score)])
    return buf.getvalue()


def _fail(code, msg):
    print(f"parentsets: error: {msg}", file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        declared = None
        if args.arities:
            with open(args.arities, "rb") as fh:
                declared = read_arities(fh)
        dataset = load(args.input, arities=declared)
    except (OSError, DatasetError) as exc:
        return _fail(EXIT_INPUT, exc)

    if args.oracle_check and dataset.n > ORACLE_MAX_N:
        return _fail(EXIT_INPUT, f"--oracle-check needs n <= {ORACLE_MAX_N}, got {dataset.n}")

    budget = args.memory_budget if args.memory_budget is not None else default_budget()
    try:
        config = engine.EngineConfig(
            workers=args.workers,
            memory_budget_bytes=budget,
            chunks_per_worker=args.chunks_per_worker,
            max_layer=args.max_layer,
            dfs_force_layer=args.force_dfs_layer,
            pruning_enabled=not args.no_prune,
        )
    except ValueError as exc:
        return _fail(EXIT_INPUT, exc)

    try:
        result = engine.run(dataset, config)
    except engine.BudgetError as exc:
        return _fail(EXIT_BUDGET, exc)

    text = render(result.records(), args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    items = result.stats.items()
    code = EXIT_OK
    if args.oracle_check:
        matches = _matches(result.by_original(), brute_force(dataset))
        items.append(("oracle_match", str(matches).lower()))
        items.append(("extra_work", f"{engine.measure_extra_work(dataset, config):.6f}"))
        if not matches:
            print("parentsets: oracle mismatch", file=sys.stderr)
            code = EXIT_ORACLE_MISMATCH
    if args.stats:
        with open(args.stats, "w", encoding="utf-8") as fh:
            for k, v in items:
                fh.write(f"{k}={v}\n")
    return code


def _matches(found, expected, tol=1e-9):
    if found.keys() != expected.keys():
        return False
    for v, sets in expected.items():
        if found[v].keys() != sets.keys():
            return False
        if any(abs(found[v][s] - score) > tol for s, score in sets.items()):
            return False
    return True


if __name__ == "__main__":
    sys.exit(main())
