"""Layer-synchronous exploration of the folded lattice with pruning and a DFS fallback.

Each layer is processed against a frozen snapshot of the maximal-parent-set
lists; workers return private deltas that are merged single-threaded at the
barrier. When the worst-case size of the layer after next would not fit the
memory budget, the current frontier is finished with one depth-first task per
node and the flagged results are verified after a final merge.
"""

import logging
import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from . import mps
from .lattice import LatticeNode, members, root, successors
from .scoring import Scorer

log = logging.getLogger(__name__)

NODE_OVERHEAD_BYTES = 16


class BudgetError(ValueError):
    """The memory budget cannot hold even the first frontier."""


@dataclass(frozen=True)
class EngineConfig:
    workers: int = 1
    memory_budget_bytes: int | None = None
    chunks_per_worker: int = 4
    max_layer: int | None = None
    dfs_force_layer: int | None = None
    pruning_enabled: bool = True
    trace: bool = False

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.chunks_per_worker < 1:
            raise ValueError("chunks_per_worker must be >= 1")
        if self.max_layer is not None and self.max_layer < 0:
            raise ValueError("max_layer must be >= 0")
        if self.dfs_force_layer is not None and self.dfs_force_layer < 0:
            raise ValueError("dfs_force_layer must be >= 0")


@dataclass
class RunStats:
    layer_nodes: dict = field(default_factory=dict)
    layer_targets: dict = field(default_factory=dict)
    frontier_estimates: dict = field(default_factory=dict)
    l_max: int = 0
    l_z: int = 0
    z: int = 0
    z_f: int = 0
    z_f_removed: int = 0
    pruned_by_cond1: int = 0
    pruned_by_cond2: int = 0
    dfs_switch_layer: int | None = None
    peak_frontier_bytes: int = 0
    bytes_per_node: int = 0
    wall_time: float = 0.0

    @property
    def nodes_processed(self):
        return sum(self.layer_nodes.values())

    def items(self):
        """Flat ``(key, value)`` pairs for the key=value stats document."""
        out = [
            ("l_max", self.l_max),
            ("l_z", self.l_z),
            ("z", self.z),
            ("z_f", self.z_f),
            ("z_f_removed", self.z_f_removed),
            ("nodes_processed", self.nodes_processed),
            ("pruned_by_cond1", self.pruned_by_cond1),
            ("pruned_by_cond2", self.pruned_by_cond2),
            ("dfs_switch_layer", "none" if self.dfs_switch_layer is None else self.dfs_switch_layer),
            ("peak_frontier_bytes", self.peak_frontier_bytes),
            ("bytes_per_node", self.bytes_per_node),
            ("wall_time_s", f"{self.wall_time:.6f}"),
        ]
        for l in sorted(self.layer_nodes):
            out.append((f"layer_{l}_nodes", self.layer_nodes[l]))
            out.append((f"layer_{l}_targets", self.layer_targets.get(l, 0)))
        return out


@dataclass
class RunResult:
    dataset: object
    lists: list
    stats: RunStats
    trace: list | None = None

    def records(self):
        """Yield ``(variable, parent names, score)`` in output order.

        Variables follow their original index; entries follow list order;
        parent names are listed in canonical order.
        """
        ds = self.dataset
        canon = {orig: c for c, orig in enumerate(ds.order)}
        cnames = ds.canonical_names()
        for v in range(ds.n):
            for e in self.lists[canon[v]]:
                yield ds.names[v], [cnames[k] for k in members(e.parents)], e.score

    def by_original(self):
        """Map original variable index to ``{frozenset(original parents): score}``."""
        ds = self.dataset
        out = {}
        for c, orig in enumerate(ds.order):
            out[orig] = {frozenset(ds.order[k] for k in members(e.parents)): e.score
                         for e in self.lists[c]}
        return out


def bytes_per_node(n):
    words = max(1, -(-n // 64))
    return 2 * 8 * words + NODE_OVERHEAD_BYTES


def estimate_next2_layer(frontier, n, node_bytes):
    """Worst-case bytes of the layer generated from ``frontier`` under the max-element rule."""
    return sum(n - 1 - (node.parents.bit_length() - 1) for node in frontier) * node_bytes


# --------------------------------------------------------------------------- context


class RunContext:
    """Read-only per-run state shared by every worker."""

    def __init__(self, dataset, pruning=True, max_layer=None, trace=False):
        self.n = dataset.n
        self.m = dataset.m
        self.scorer = Scorer(dataset)
        self.full_bits = dataset.canon_full_cond_bits
        self.pruning = pruning
        self.max_layer = self.n if max_layer is None else min(max_layer, self.n)
        self.trace = trace
        base = self.scorer.score((1 << self.n) - 1, 0)
        self.empty_scores = tuple(float(s) for s in base.score)


@dataclass
class NodeOutcome:
    deltas: list
    survivors: int
    cond1: int = 0
    cond2: int = 0


def _evaluate(ctx, node, lists, overlay=None):
    res = ctx.scorer.score(node.targets, node.parents)
    parents = node.parents
    deltas = []
    survivors = 0
    cond1 = cond2 = 0
    for t, s, nc in zip(res.targets, res.score.tolist(), res.nc.tolist()):
        sub = mps.strict_subset_min(lists[t], parents)
        if overlay is not None:
            for e in overlay[t]:
                if e.score < sub and e.parents & ~parents == 0:
                    sub = e.score
        d = sub
        if s < sub:
            deltas.append((t, s))
            d = s
        if not ctx.pruning:
            survivors |= 1 << t
        elif nc >= ctx.empty_scores[t]:
            cond1 += 1
        elif d <= ctx.full_bits[t] + nc:
            cond2 += 1
        else:
            survivors |= 1 << t
    return NodeOutcome(deltas, survivors, cond1, cond2)


def process_node(ctx, node, lists):
    """Score ``node`` against a snapshot of the lists and apply both pruning conditions.

    Returns the new maximal parent sets found at the node (as
    ``(target, MpsEntry)`` pairs) and the targets that may still gain from
    larger parent sets.
    """
    out = _evaluate(ctx, node, lists)
    out.deltas = [(t, mps.MpsEntry(node.parents, s)) for t, s in out.deltas]
    return out


# --------------------------------------------------------------------------- chunks


@dataclass
class ChunkResult:
    deltas: list = field(default_factory=list)
    frontier: list = field(default_factory=list)
    layer_nodes: dict = field(default_factory=dict)
    layer_targets: dict = field(default_factory=dict)
    cond1: int = 0
    cond2: int = 0
    trace: list = field(default_factory=list)

    def count(self, node):
        l = node.parents.bit_count()
        self.layer_nodes[l] = self.layer_nodes.get(l, 0) + 1
        self.layer_targets[l] = self.layer_targets.get(l, 0) + node.targets.bit_count()


def bfs_chunk(ctx, nodes, lists):
    out = ChunkResult()
    for node in nodes:
        res = _evaluate(ctx, node, lists)
        out.count(node)
        out.cond1 += res.cond1
        out.cond2 += res.cond2
        for t, s in res.deltas:
            out.deltas.append((t, mps.MpsEntry(node.parents, s)))
        if ctx.trace:
            out.trace.append((node.parents, node.targets, res.survivors))
        if res.survivors and node.parents.bit_count() < ctx.max_layer:
            out.frontier.extend(successors(node, res.survivors, ctx.n))
    return out


def dfs_task(ctx, node, lists, out=None):
    """Explore the subtree of ``node`` depth first against a frozen snapshot.

    Children are pushed in increasing order of the added variable, so the
    largest one is explored first; this visits every subset inside the subtree
    before its supersets. New entries go to a task-local overlay and are all
    flagged for verification after the final merge.
    """
    if out is None:
        out = ChunkResult()
    overlay = [[] for _ in range(ctx.n)]
    stack = [node]
    while stack:
        cur = stack.pop()
        res = _evaluate(ctx, cur, lists, overlay)
        out.count(cur)
        out.cond1 += res.cond1
        out.cond2 += res.cond2
        for t, s in res.deltas:
            e = mps.MpsEntry(cur.parents, s, True)
            overlay[t].append(e)
            out.deltas.append((t, e))
        if res.survivors and cur.parents.bit_count() < ctx.max_layer:
            stack.extend(successors(cur, res.survivors, ctx.n))
    return out


def dfs_chunk(ctx, nodes, lists):
    out = ChunkResult()
    for node in nodes:
        dfs_task(ctx, node, lists, out)
    return out


_CTX = None


def _init_worker(ctx):
    global _CTX
    _CTX = ctx


def _run_chunk(kind, nodes, lists):
    fn = bfs_chunk if kind == "bfs" else dfs_chunk
    return fn(_CTX, nodes, lists)


def _split(items, parts):
    parts = max(1, min(parts, len(items)))
    size, extra = divmod(len(items), parts)
    out, start = [], 0
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        out.append(items[start:stop])
        start = stop
    return out


# --------------------------------------------------------------------------- driver


def _pool(ctx, workers):
    try:
        mpctx = mp.get_context("fork")
    except ValueError:
        mpctx = None
    return ProcessPoolExecutor(max_workers=workers, mp_context=mpctx,
                               initializer=_init_worker, initargs=(ctx,))


def run(dataset, config=EngineConfig()):
    """Enumerate all maximal parent sets of every variable of ``dataset``.

    Returns a :class:`RunResult` whose lists are indexed by canonical position.
    """
    started = time.perf_counter()
    n = dataset.n
    ctx = RunContext(dataset, config.pruning_enabled, config.max_layer, config.trace)
    node_bytes = bytes_per_node(n)
    stats = RunStats(bytes_per_node=node_bytes)
    lists = [[] for _ in range(n)]
    trace = [] if config.trace else None

    frontier = [root(n)]
    budget = config.memory_budget_bytes
    if budget is not None and estimate_next2_layer(frontier, n, node_bytes) > budget:
        raise BudgetError(f"memory budget of {budget} bytes cannot hold the first layer "
                          f"({n} nodes of {node_bytes} bytes)")

    pool = _pool(ctx, config.workers) if config.workers > 1 else None
    try:
        layer = 0
        while frontier:
            stats.peak_frontier_bytes = max(stats.peak_frontier_bytes,
                                            len(frontier) * node_bytes)
            estimate = estimate_next2_layer(frontier, n, node_bytes)
            stats.frontier_estimates[layer] = estimate
            dfs = config.dfs_force_layer == layer or (
                budget is not None and layer > 0 and estimate > budget)
            kind = "dfs" if dfs else "bfs"
            log.debug("layer %d: %d nodes, %s", layer, len(frontier), kind)

            if pool is None or layer <= 1:
                results = [(bfs_chunk if kind == "bfs" else dfs_chunk)(ctx, frontier, lists)]
            else:
                chunks = _split(frontier, config.workers * config.chunks_per_worker)
                futures = [pool.submit(_run_chunk, kind, c, lists) for c in chunks]
                results = [f.result() for f in futures]

            frontier = []
            for r in results:
                frontier.extend(r.frontier)
                stats.pruned_by_cond1 += r.cond1
                stats.pruned_by_cond2 += r.cond2
                for l, c in r.layer_nodes.items():
                    stats.layer_nodes[l] = stats.layer_nodes.get(l, 0) + c
                for l, c in r.layer_targets.items():
                    stats.layer_targets[l] = stats.layer_targets.get(l, 0) + c
                if trace is not None:
                    trace.extend(r.trace)
            lists = mps.merge(lists, [r.deltas for r in results])

            if dfs:
                stats.dfs_switch_layer = layer
                stats.z_f = sum(1 for r in results for _, e in r.deltas)
                before = sum(len(lst) for lst in lists)
                lists = [mps.verify_flagged(lst) for lst in lists]
                stats.z_f_removed = before - sum(len(lst) for lst in lists)
                break
            layer += 1
    finally:
        if pool is not None:
            pool.shutdown()

    stats.l_max = max(stats.layer_nodes)
    stats.l_z = max((e.parents.bit_count() for lst in lists for e in lst), default=0)
    stats.z = sum(len(lst) for lst in lists)
    stats.wall_time = time.perf_counter() - started
    return RunResult(dataset, lists, stats, trace)


# --------------------------------------------------------------------------- extra work


@dataclass
class ExtraWorkReport:
    engine_nodes: int
    synchronized_nodes: int
    elided_nodes: int
    elided_pairs: int
    elided_nodes_with_successors: int
    elided_pairs_surviving: int

    @property
    def fraction(self):
        if self.synchronized_nodes == 0:
            return 0.0
        return (self.engine_nodes - self.synchronized_nodes) / self.synchronized_nodes


def synchronized_reference(dataset, pruning=True, max_layer=None):
    """Targets per node of a fully synchronized traversal.

    A target is admitted at ``U`` only if it survived at every immediate
    predecessor ``U - {j}``. Returns ``{parents: targets}`` for every node with
    at least one target.
    """
    ctx = RunContext(dataset, pruning, max_layer)
    n = dataset.n
    lists = [[] for _ in range(n)]
    seen = {}
    layer = {0: (1 << n) - 1}
    l = 0
    while layer:
        seen.update(layer)
        survived = {}
        deltas = []
        for parents, targets in layer.items():
            res = process_node(ctx, LatticeNode(targets, parents), lists)
            deltas.append(res.deltas)
            survived[parents] = res.survivors
        lists = mps.merge(lists, deltas)
        if l >= ctx.max_layer:
            break
        acc = {}
        for parents, surv in survived.items():
            if not surv:
                continue
            for k in range(n):
                bit = 1 << k
                if parents & bit:
                    continue
                child = parents | bit
                mask, hits = acc.get(child, (-1, 0))
                acc[child] = (mask & surv & ~bit, hits + 1)
        layer = {c: mask for c, (mask, hits) in acc.items()
                 if hits == c.bit_count() and mask}
        l += 1
    return seen


def extra_work_report(dataset, config=EngineConfig()):
    """Compare the engine's BFS traversal with a fully synchronized one."""
    cfg = replace(config, trace=True, dfs_force_layer=None, memory_budget_bytes=None)
    result = run(dataset, cfg)
    sync = synchronized_reference(dataset, cfg.pruning_enabled, cfg.max_layer)
    elided_nodes = elided_pairs = bad_nodes = bad_pairs = 0
    for parents, targets, survivors in result.trace:
        ref = sync.get(parents, 0)
        extra = targets & ~ref
        if not ref:
            elided_nodes += 1
            if survivors:
                bad_nodes += 1
        elided_pairs += extra.bit_count()
        bad_pairs += (survivors & extra).bit_count()
    return ExtraWorkReport(len(result.trace), len(sync), elided_nodes, elided_pairs,
                           bad_nodes, bad_pairs)


def measure_extra_work(dataset, config=EngineConfig()):
    """Fraction of nodes processed beyond a fully synchronized traversal."""
    return extra_work_report(dataset, config).fraction
