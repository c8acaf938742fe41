"""Scoring: NMI against ground truth and the three smoothness measures.

``nmi`` compares two labelings of the same node set; ``mosaic_nmi`` compares
two mosaic partitions exactly on the node x time product measure, cutting
time at the union of both partitions' breakpoints so no approximation is
involved.  ``sm_p``/``sm_n``/``sm_l`` quantify how smoothly a dynamic
partition evolves: partition similarity between consecutive windows, the
fraction of nodes keeping their label, and the inverse number of label runs
per node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from mosaicstream.core import MembershipIndex, MosaicPartition, ParameterError
from mosaicstream.snapshot import DynamicPartition


def _contingency_nmi(table: np.ndarray) -> float:
    """NMI with sum normalization 2I/(H1+H2) from a weighted contingency table."""
    total = table.sum()
    if total <= 0:
        return 1.0
    pxy = table / total
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    nz = pxy > 0
    outer = np.outer(px, py)
    mi = float((pxy[nz] * (np.log(pxy[nz]) - np.log(outer[nz]))).sum())
    hx = float(-(px[px > 0] * np.log(px[px > 0])).sum())
    hy = float(-(py[py > 0] * np.log(py[py > 0])).sum())
    if hx + hy == 0.0:
        return 1.0  # both sides a single cluster
    return float(np.clip(2.0 * mi / (hx + hy), 0.0, 1.0))


def _as_label_arrays(
    a: Mapping[int, int] | Sequence[int] | np.ndarray,
    b: Mapping[int, int] | Sequence[int] | np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(a, Mapping) or isinstance(b, Mapping):
        if not (isinstance(a, Mapping) and isinstance(b, Mapping)):
            raise ParameterError("labelings must both be maps or both be arrays")
        if set(a) != set(b):
            raise ParameterError("labelings cover different node sets")
        keys = sorted(a)
        return (
            np.asarray([a[k] for k in keys], dtype=np.int64),
            np.asarray([b[k] for k in keys], dtype=np.int64),
        )
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape or a.ndim != 1:
        raise ParameterError("labelings cover different node sets")
    return a, b


def nmi(
    a: Mapping[int, int] | Sequence[int] | np.ndarray,
    b: Mapping[int, int] | Sequence[int] | np.ndarray,
) -> float:
    """Normalized mutual information between two labelings of the same nodes."""
    arr_a, arr_b = _as_label_arrays(a, b)
    if arr_a.size == 0:
        return 1.0
    _, ia = np.unique(arr_a, return_inverse=True)
    _, ib = np.unique(arr_b, return_inverse=True)
    table = np.zeros((int(ia.max()) + 1, int(ib.max()) + 1), dtype=np.float64)
    np.add.at(table, (ia, ib), 1.0)
    return _contingency_nmi(table)


def _merge_segments(
    bounds_a: np.ndarray,
    labels_a: np.ndarray,
    bounds_b: np.ndarray,
    labels_b: np.ndarray,
    acc: dict[tuple[int, int], float],
) -> None:
    """Accumulate duration per (label_a, label_b) over one node's timeline."""
    merged = np.union1d(bounds_a, bounds_b)
    starts = merged[:-1]
    durations = np.diff(merged)
    ia = np.searchsorted(bounds_a, starts, side="right") - 1
    ib = np.searchsorted(bounds_b, starts, side="right") - 1
    for la, lb, d in zip(labels_a[ia], labels_b[ib], durations):
        if d > 0:
            key = (int(la), int(lb))
            acc[key] = acc.get(key, 0.0) + float(d)


def _table_from_acc(acc: dict[tuple[int, int], float]) -> np.ndarray:
    rows = sorted({k[0] for k in acc})
    cols = sorted({k[1] for k in acc})
    ri = {lab: i for i, lab in enumerate(rows)}
    ci = {lab: i for i, lab in enumerate(cols)}
    table = np.zeros((len(rows), len(cols)), dtype=np.float64)
    for (la, lb), d in acc.items():
        table[ri[la], ci[lb]] = d
    return table


def mosaic_nmi(p1: MosaicPartition, p2: MosaicPartition) -> float:
    """Exact NMI between two mosaic partitions over node x time.

    Each (node, segment) cell between consecutive merged breakpoints weighs
    its duration; the empty community counts as an ordinary label.
    """
    if p1.nodes != p2.nodes or p1.domain != p2.domain:
        raise ParameterError("partitions must share nodes and domain")
    idx1 = MembershipIndex(p1)
    idx2 = MembershipIndex(p2)
    acc: dict[tuple[int, int], float] = {}
    for v in sorted(p1.nodes):
        b1, l1 = idx1.node_segments(v)
        b2, l2 = idx2.node_segments(v)
        _merge_segments(b1, l1, b2, l2, acc)
    if not acc:
        return 1.0
    return _contingency_nmi(_table_from_acc(acc))


def dynamic_mosaic_nmi(
    p: MosaicPartition, d: DynamicPartition, boundaries: Sequence[float]
) -> float:
    """Exact NMI between a mosaic partition and a per-window labeling.

    The dynamic side is treated as piecewise constant over its windows, which
    must cover the partition domain exactly.
    """
    bounds_d = np.asarray(boundaries, dtype=np.float64)
    if len(bounds_d) != d.n_windows + 1:
        raise ParameterError("boundaries must delimit exactly the windows")
    if bounds_d[0] != p.domain.start or bounds_d[-1] != p.domain.end:
        raise ParameterError("windows must cover the partition domain")
    idx = MembershipIndex(p)
    acc: dict[tuple[int, int], float] = {}
    for v in sorted(p.nodes):
        b1, l1 = idx.node_segments(v)
        _merge_segments(b1, l1, bounds_d, d.labels[:, v], acc)
    if not acc:
        return 1.0
    return _contingency_nmi(_table_from_acc(acc))


def sm_p(d: DynamicPartition) -> float:
    """Partition smoothness: mean NMI of consecutive windows (labels ignored)."""
    if d.n_windows < 2:
        raise ParameterError("sm_p needs at least 2 windows")
    vals = [nmi(d.labels[w], d.labels[w + 1]) for w in range(d.n_windows - 1)]
    return float(np.mean(vals))


def sm_n(d: DynamicPartition) -> float:
    """Node smoothness: 1 - mean fraction of nodes changing label per step."""
    if d.n_windows < 2:
        raise ParameterError("sm_n needs at least 2 windows")
    changed = d.labels[1:] != d.labels[:-1]
    return float(1.0 - changed.mean())


def sm_l(d: DynamicPartition) -> float:
    """Label smoothness: mean over nodes of 1/(number of label runs)."""
    if d.n_windows < 1:
        raise ParameterError("sm_l needs at least 1 window")
    runs = 1 + (d.labels[1:] != d.labels[:-1]).sum(axis=0)
    return float(np.mean(1.0 / runs))


@dataclass(frozen=True)
class ScoreReport:
    """All scores of one detector run against the planted truth."""

    per_window_nmi: tuple[float, ...]
    mean_nmi: float
    mosaic_nmi: float
    sm_p: float
    sm_n: float
    sm_l: float


def score(
    detected: DynamicPartition,
    truth: MosaicPartition,
    boundaries: Sequence[float],
) -> ScoreReport:
    """Compare detector output with the planted partition on one window grid."""
    from mosaicstream.snapshot import project_ground_truth

    projected = project_ground_truth(truth, boundaries)
    if projected.labels.shape != detected.labels.shape:
        raise ParameterError("detected labels do not match the window grid")
    per_window = tuple(
        nmi(detected.labels[w], projected.labels[w]) for w in range(detected.n_windows)
    )
    return ScoreReport(
        per_window_nmi=per_window,
        mean_nmi=float(np.mean(per_window)) if per_window else 1.0,
        mosaic_nmi=dynamic_mosaic_nmi(truth, detected, boundaries),
        sm_p=sm_p(detected) if detected.n_windows >= 2 else 1.0,
        sm_n=sm_n(detected) if detected.n_windows >= 2 else 1.0,
        sm_l=sm_l(detected),
    )
