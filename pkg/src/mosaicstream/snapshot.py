"""Window aggregation of link streams and ground-truth projection.

A link stream is flattened into a sequence of weighted static graphs, one per
time window; the planted mosaic partition is projected onto the same grid so
detector output and ground truth can be compared window by window.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from mosaicstream.core import (
    EMPTY,
    LinkStream,
    MembershipIndex,
    MosaicPartition,
    ParameterError,
)


@dataclass(frozen=True)
class SnapshotSequence:
    """Per-window weighted graphs: weight of (u, v) = temporal-edge count."""

    boundaries: tuple[float, ...]
    graphs: tuple[Mapping[tuple[int, int], int], ...]
    nodes: frozenset[int]

    def __post_init__(self):
        if len(self.boundaries) != len(self.graphs) + 1:
            raise ParameterError("boundaries must delimit exactly the windows")

    @property
    def n_windows(self) -> int:
        return len(self.graphs)

    def window_interval(self, i: int) -> tuple[float, float]:
        return self.boundaries[i], self.boundaries[i + 1]


@dataclass(frozen=True)
class DynamicPartition:
    """Node labels per window, with one label space shared across windows.

    ``labels[w, v]`` is node v's community label in window w.  Detector labels
    are >= 0; ground-truth projections may also carry the ``EMPTY`` sentinel.
    """

    labels: np.ndarray  # (n_windows, n_nodes) int64

    def __post_init__(self):
        arr = np.asarray(self.labels, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)
        if arr.ndim != 2:
            raise ParameterError("labels must be a (windows, nodes) array")

    @property
    def n_windows(self) -> int:
        return self.labels.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.labels.shape[1]

    def window(self, i: int) -> dict[int, int]:
        return {v: int(lab) for v, lab in enumerate(self.labels[i])}

    @classmethod
    def from_window_maps(cls, maps: Sequence[Mapping[int, int]]) -> "DynamicPartition":
        n = max((max(m) for m in maps if m), default=-1) + 1
        arr = np.empty((len(maps), n), dtype=np.int64)
        for w, m in enumerate(maps):
            for v in range(n):
                arr[w, v] = m[v]
        return cls(arr)


def aggregate(ls: LinkStream, window: float) -> SnapshotSequence:
    """Bucket temporal edges into consecutive windows of the given width.

    The edge at time t lands in window floor((t - start) / window); the final
    window may be shorter so that the whole domain is covered and the total
    weight equals the stream's edge count.
    """
    if not (window > 0):
        raise ParameterError(f"window must be > 0, got {window}")
    start, end = ls.domain.start, ls.domain.end
    m = max(1, math.ceil((end - start) / window))
    boundaries = [start + i * window for i in range(m)]
    boundaries.append(end)
    graphs: list[dict[tuple[int, int], int]] = [{} for _ in range(m)]
    for e in ls.edges:
        i = min(int((e.t - start) // window), m - 1)
        key = (e.u, e.v)
        g = graphs[i]
        g[key] = g.get(key, 0) + 1
    return SnapshotSequence(tuple(boundaries), tuple(graphs), ls.nodes)


def project_ground_truth(
    p: MosaicPartition, boundaries: Sequence[float]
) -> DynamicPartition:
    """Label each (node, window) with the mosaic covering the largest share.

    The empty community competes like any mosaic.  Equal shares are broken in
    favor of the candidate that covers the node earliest within the window
    (distinct for disjoint candidates), then by smallest id.
    """
    bounds = [float(b) for b in boundaries]
    if len(bounds) < 2 or any(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:])):
        raise ParameterError("boundaries must be strictly increasing")
    if bounds[0] < p.domain.start or bounds[-1] > p.domain.end:
        raise ParameterError("boundaries must lie within the partition domain")

    index = MembershipIndex(p)
    n_windows = len(bounds) - 1
    nodes = sorted(p.nodes)
    n = (nodes[-1] + 1) if nodes else 0
    out = np.full((n_windows, n), EMPTY, dtype=np.int64)

    for v in nodes:
        seg_bounds, seg_labels = index.node_segments(v)
        for w in range(n_windows):
            ws, we = bounds[w], bounds[w + 1]
            j = bisect.bisect_right(seg_bounds, ws) - 1
            shares: dict[int, float] = {}
            first_cover: dict[int, float] = {}
            while j < len(seg_labels) and seg_bounds[j] < we:
                s = max(float(seg_bounds[j]), ws)
                e = min(float(seg_bounds[j + 1]), we)
                if e > s:
                    lab = int(seg_labels[j])
                    shares[lab] = shares.get(lab, 0.0) + (e - s)
                    if lab not in first_cover:
                        first_cover[lab] = s
                j += 1
            out[w, v] = min(
                shares, key=lambda lab: (-shares[lab], first_cover[lab], lab)
            )
    return DynamicPartition(out)
