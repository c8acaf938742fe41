"""Dynamic community detection over snapshot sequences.

Four strategies share one seeded Louvain core and differ only in how they
carry information between consecutive windows:

- ``no_smoothing``: independent Louvain per window, labels matched afterwards.
- ``implicit_global``: Louvain per window warm-started from the previous
  window's assignment.
- ``label_smoothing``: Louvain per window, then a second Louvain on the
  survival graph whose vertices are (window, community) pairs.
- ``smoothed_graph``: Louvain on a blend of the current adjacency and the
  previous window's co-membership matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from mosaicstream._kernels import local_move_pass
from mosaicstream.core import ParameterError
from mosaicstream.snapshot import DynamicPartition, SnapshotSequence

METHODS = ("no_smoothing", "implicit_global", "label_smoothing", "smoothed_graph")


@dataclass(frozen=True)
class DetectorConfig:
    method: str
    theta: float = 0.3
    rho: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(
                f"unknown method {self.method!r}, expected one of {METHODS}"
            )
        if not 0.0 <= self.theta <= 1.0:
            raise ParameterError(f"theta must be in [0, 1], got {self.theta}")
        if not 0.0 <= self.rho <= 1.0:
            raise ParameterError(f"rho must be in [0, 1], got {self.rho}")


class Graph:
    """Undirected weighted graph in CSR form.

    Each u != v edge is stored in both adjacency rows; a self-loop is stored
    once and contributes twice to its node's degree.  ``m`` is the total edge
    weight with self-loops counted once.
    """

    __slots__ = ("n", "indptr", "indices", "weights", "degrees", "loops", "m")

    def __init__(self, n, indptr, indices, weights, degrees, loops):
        self.n = n
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        self.degrees = degrees
        self.loops = loops
        self.m = float(degrees.sum()) / 2.0

    @classmethod
    def from_pairs(
        cls, n: int, pair_weights: Mapping[tuple[int, int], float]
    ) -> "Graph":
        if n < 0:
            raise ParameterError("node count must be >= 0")
        rows: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        degrees = np.zeros(n, dtype=np.float64)
        loops = np.zeros(n, dtype=np.float64)
        for (u, v), w in sorted(pair_weights.items()):
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) outside node range")
            w = float(w)
            if w < 0:
                raise ParameterError("edge weights must be >= 0")
            if w == 0:
                continue
            if u == v:
                rows[u].append((u, w))
                loops[u] += w
                degrees[u] += 2.0 * w
            else:
                rows[u].append((v, w))
                rows[v].append((u, w))
                degrees[u] += w
                degrees[v] += w
        indptr = np.zeros(n + 1, dtype=np.int64)
        for u in range(n):
            rows[u].sort()
            indptr[u + 1] = indptr[u] + len(rows[u])
        nnz = int(indptr[-1])
        indices = np.empty(nnz, dtype=np.int64)
        weights = np.empty(nnz, dtype=np.float64)
        pos = 0
        for u in range(n):
            for v, w in rows[u]:
                indices[pos] = v
                weights[pos] = w
                pos += 1
        return cls(n, indptr, indices, weights, degrees, loops)


def modularity(
    graph: Graph, labels: Sequence[int] | np.ndarray, resolution: float = 1.0
) -> float:
    """Newman modularity of a labeling, with an optional resolution factor."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (graph.n,):
        raise ParameterError("labels must assign every node exactly once")
    if graph.m <= 0:
        return 0.0
    _, comm = np.unique(labels, return_inverse=True)
    n_comm = int(comm.max()) + 1
    tot = np.bincount(comm, weights=graph.degrees, minlength=n_comm)
    src = np.repeat(np.arange(graph.n), np.diff(graph.indptr))
    same = comm[src] == comm[graph.indices]
    inner = np.bincount(comm[src][same], weights=graph.weights[same], minlength=n_comm)
    loop_tot = np.bincount(comm, weights=graph.loops, minlength=n_comm)
    intra = (inner + loop_tot) / 2.0
    two_m = 2.0 * graph.m
    return float(np.sum(intra / graph.m - resolution * (tot / two_m) ** 2))


def _densify(labels: np.ndarray) -> np.ndarray:
    """Relabel to 0..C-1 in order of first occurrence."""
    out = np.empty(labels.shape[0], dtype=np.int64)
    seen: dict[int, int] = {}
    for i, lab in enumerate(labels):
        lab = int(lab)
        if lab not in seen:
            seen[lab] = len(seen)
        out[i] = seen[lab]
    return out


def _aggregate_graph(graph: Graph, dense: np.ndarray, n_comm: int) -> Graph:
    """Collapse communities into super-nodes, preserving total weight."""
    src = np.repeat(np.arange(graph.n), np.diff(graph.indptr))
    cu = dense[src]
    cv = dense[graph.indices]
    a = np.minimum(cu, cv)
    b = np.maximum(cu, cv)
    flat = np.bincount(a * n_comm + b, weights=graph.weights, minlength=n_comm * n_comm)
    loop_tot = np.bincount(dense, weights=graph.loops, minlength=n_comm)
    pair_weights: dict[tuple[int, int], float] = {}
    for key in np.flatnonzero(flat):
        i, j = divmod(int(key), n_comm)
        if i == j:
            # row-stored intra edges appear twice, self-loops once
            pair_weights[(i, i)] = (flat[key] + loop_tot[i]) / 2.0
        else:
            pair_weights[(i, j)] = flat[key] / 2.0
    return Graph.from_pairs(n_comm, pair_weights)


_MAX_PASSES = 512


def louvain(
    graph: Graph,
    seed: int = 0,
    init_partition: Sequence[int] | np.ndarray | None = None,
    resolution: float = 1.0,
    trace: list[float] | None = None,
) -> np.ndarray:
    """Greedy modularity maximization; returns one label per node.

    Nodes are visited in a seeded random order, each moving to the adjacent
    community with the highest modularity gain (staying put on ties).  When a
    sweep stops producing moves, communities collapse into super-nodes and the
    procedure repeats on the aggregate, so one call runs the full multi-level
    scheme.  With ``init_partition`` the first level starts from that grouping
    instead of singletons.  If ``trace`` is given, the modularity after every
    sweep is appended to it.  Labels are densely renumbered in order of first
    occurrence, making the output independent of internal label churn.
    """
    n = graph.n
    if n == 0:
        return np.empty(0, dtype=np.int64)
    if init_partition is not None:
        init = np.asarray(init_partition, dtype=np.int64)
        if init.shape != (n,):
            raise ParameterError("init_partition must assign every node exactly once")
        level_comm = _densify(init)
    else:
        level_comm = np.arange(n, dtype=np.int64)
    if graph.m <= 0:
        return np.arange(n, dtype=np.int64)

    rng = np.random.default_rng(seed)
    inv_two_m = 1.0 / (2.0 * graph.m)  # invariant under aggregation
    assign = np.arange(n, dtype=np.int64)  # original node -> level node
    level_graph = graph

    while True:
        level_n = level_graph.n
        comm_deg = np.bincount(
            level_comm, weights=level_graph.degrees, minlength=level_n
        ).astype(np.float64)
        level_moves = 0
        for _ in range(_MAX_PASSES):
            order = rng.permutation(level_n).astype(np.int64)
            moves = local_move_pass(
                level_graph.indptr,
                level_graph.indices,
                level_graph.weights,
                level_graph.degrees,
                level_comm,
                comm_deg,
                order,
                inv_two_m,
                resolution,
            )
            if trace is not None:
                trace.append(modularity(level_graph, level_comm, resolution))
            level_moves += moves
            if moves == 0:
                break
        dense = _densify(level_comm)
        n_comm = int(dense.max()) + 1
        assign = dense[assign]
        if level_moves == 0 or n_comm == level_n:
            break
        level_graph = _aggregate_graph(level_graph, dense, n_comm)
        level_comm = np.arange(n_comm, dtype=np.int64)

    return _densify(assign)


def jaccard(a: frozenset | set, b: frozenset | set) -> float:
    """|a & b| / |a | b|; undefined when both sets are empty."""
    union = len(a | b)
    if union == 0:
        raise ParameterError("jaccard undefined for two empty sets")
    return len(a & b) / union


def _groups(labels: np.ndarray) -> dict[int, frozenset[int]]:
    out: dict[int, set[int]] = {}
    for v, lab in enumerate(labels):
        out.setdefault(int(lab), set()).add(v)
    return {lab: frozenset(members) for lab, members in sorted(out.items())}


def _match_labels(
    prev_groups: dict[int, frozenset[int]],
    cur_groups: dict[int, frozenset[int]],
    theta: float,
    next_label: int,
) -> tuple[dict[int, int], int]:
    """Greedy one-to-one Jaccard matching of current communities to previous.

    Candidate pairs with similarity >= theta are taken in decreasing
    similarity (ties broken by previous then current label); unmatched
    current communities receive fresh labels.
    """
    candidates = []
    for prev_lab, prev_members in prev_groups.items():
        for cur_lab, cur_members in cur_groups.items():
            sim = jaccard(prev_members, cur_members)
            if sim >= theta:
                candidates.append((-sim, prev_lab, cur_lab))
    candidates.sort()
    mapping: dict[int, int] = {}
    used_prev: set[int] = set()
    for neg_sim, prev_lab, cur_lab in candidates:
        if prev_lab in used_prev or cur_lab in mapping:
            continue
        mapping[cur_lab] = prev_lab
        used_prev.add(prev_lab)
    for cur_lab in cur_groups:
        if cur_lab not in mapping:
            mapping[cur_lab] = next_label
            next_label += 1
    return mapping, next_label


def _window_graph(s: SnapshotSequence, w: int, n: int) -> Graph:
    return Graph.from_pairs(n, s.graphs[w])


def _node_count(s: SnapshotSequence) -> int:
    return max(s.nodes) + 1 if s.nodes else 0


def detect(s: SnapshotSequence, cfg: DetectorConfig) -> DynamicPartition:
    """Run the strategy named by ``cfg.method`` over the snapshot sequence."""
    fn = {
        "no_smoothing": detect_no_smoothing,
        "implicit_global": detect_implicit_global,
        "label_smoothing": detect_label_smoothing,
        "smoothed_graph": detect_smoothed_graph,
    }[cfg.method]
    return fn(s, cfg)


def detect_no_smoothing(s: SnapshotSequence, cfg: DetectorConfig) -> DynamicPartition:
    n = _node_count(s)
    out = np.empty((s.n_windows, n), dtype=np.int64)
    prev_groups: dict[int, frozenset[int]] = {}
    next_label = 0
    for w in range(s.n_windows):
        local = louvain(_window_graph(s, w, n), seed=cfg.seed)
        groups = _groups(local)
        if w == 0:
            mapping = {lab: lab for lab in groups}  # dense labels already
            next_label = len(groups)
        else:
            mapping, next_label = _match_labels(
                prev_groups, groups, cfg.theta, next_label
            )
        out[w] = [mapping[int(lab)] for lab in local]
        prev_groups = _groups(out[w])
    return DynamicPartition(out)


def detect_implicit_global(
    s: SnapshotSequence, cfg: DetectorConfig
) -> DynamicPartition:
    n = _node_count(s)
    out = np.empty((s.n_windows, n), dtype=np.int64)
    next_label = 0
    for w in range(s.n_windows):
        g = _window_graph(s, w, n)
        active = g.degrees > 0
        if w == 0:
            local = louvain(g, seed=cfg.seed)
            out[w] = local
            next_label = int(local.max()) + 1 if n else 0
            continue
        # active nodes keep their previous label as a warm start; isolated
        # nodes get throwaway singleton seeds so they cannot pull old labels
        seed_labels = out[w - 1].copy()
        fresh = next_label + np.arange(n, dtype=np.int64)
        seed_labels[~active] = fresh[~active]
        local = louvain(g, seed=cfg.seed, init_partition=seed_labels)
        groups = _groups(local)
        prev_groups = {
            lab: frozenset(v for v in members if active[v])
            for lab, members in _groups(out[w - 1]).items()
        }
        candidates = []
        for prev_lab, prev_members in prev_groups.items():
            if not prev_members:
                continue
            for cur_lab, cur_members in groups.items():
                overlap = len(prev_members & cur_members)
                if overlap > 0:
                    candidates.append((-overlap, prev_lab, cur_lab))
        candidates.sort()
        mapping: dict[int, int] = {}
        used_prev: set[int] = set()
        for neg_overlap, prev_lab, cur_lab in candidates:
            if prev_lab in used_prev or cur_lab in mapping:
                continue
            mapping[cur_lab] = prev_lab
            used_prev.add(prev_lab)
        for cur_lab in groups:
            if cur_lab not in mapping:
                mapping[cur_lab] = next_label
                next_label += 1
        out[w] = [mapping[int(lab)] for lab in local]
    return DynamicPartition(out)


def detect_label_smoothing(
    s: SnapshotSequence, cfg: DetectorConfig
) -> DynamicPartition:
    n = _node_count(s)
    window_labels = []
    window_groups = []
    for w in range(s.n_windows):
        local = louvain(_window_graph(s, w, n), seed=cfg.seed)
        window_labels.append(local)
        window_groups.append(_groups(local))

    # survival graph: one vertex per (window, community), edges between
    # consecutive windows weighted by Jaccard similarity when >= theta
    vertex_id: dict[tuple[int, int], int] = {}
    for w, groups in enumerate(window_groups):
        for lab in groups:
            vertex_id[(w, lab)] = len(vertex_id)
    pair_weights: dict[tuple[int, int], float] = {}
    for w in range(s.n_windows - 1):
        for lab_a, members_a in window_groups[w].items():
            for lab_b, members_b in window_groups[w + 1].items():
                sim = jaccard(members_a, members_b)
                if sim >= cfg.theta and sim > 0:
                    pair_weights[
                        (vertex_id[(w, lab_a)], vertex_id[(w + 1, lab_b)])
                    ] = sim
    survival = Graph.from_pairs(len(vertex_id), pair_weights)
    meta = louvain(survival, seed=cfg.seed)

    out = np.empty((s.n_windows, n), dtype=np.int64)
    for w in range(s.n_windows):
        lookup = {
            lab: int(meta[vertex_id[(w, lab)]]) for lab in window_groups[w]
        }
        out[w] = [lookup[int(lab)] for lab in window_labels[w]]
    return DynamicPartition(out)


def detect_smoothed_graph(
    s: SnapshotSequence, cfg: DetectorConfig
) -> DynamicPartition:
    n = _node_count(s)
    out = np.empty((s.n_windows, n), dtype=np.int64)
    prev_groups: dict[int, frozenset[int]] = {}
    next_label = 0
    for w in range(s.n_windows):
        if w == 0:
            local = louvain(_window_graph(s, w, n), seed=cfg.seed)
            out[w] = local
            next_label = int(local.max()) + 1 if n else 0
            prev_groups = _groups(out[w])
            continue
        pair_weights: dict[tuple[int, int], float] = {}
        if cfg.rho > 0.0:
            counts = s.graphs[w]
            peak = max(counts.values()) if counts else 0
            if peak > 0:
                for (u, v), c in counts.items():
                    pair_weights[(u, v)] = cfg.rho * (c / peak)
        if cfg.rho < 1.0:
            carry = 1.0 - cfg.rho
            for members in prev_groups.values():
                ordered = sorted(members)
                for i, u in enumerate(ordered):
                    for v in ordered[i + 1 :]:
                        pair_weights[(u, v)] = pair_weights.get((u, v), 0.0) + carry
        local = louvain(Graph.from_pairs(n, pair_weights), seed=cfg.seed)
        groups = _groups(local)
        mapping, next_label = _match_labels(prev_groups, groups, cfg.theta, next_label)
        out[w] = [mapping[int(lab)] for lab in local]
        prev_groups = _groups(out[w])
    return DynamicPartition(out)
