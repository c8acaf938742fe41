"""Planted-community scenarios: building mosaic partitions to generate from.

Three families are provided: hand-specified layouts, snapshot-style layouts
(time sliced into segments, nodes re-partitioned per segment), and recursive
random layouts (repeated node x time bisection of random leaves).  Any layout
can then be thinned by removing mosaics at random, which reassigns their
cells to the implicit empty community.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from mosaicstream.core import (
    Mosaic,
    MosaicPartition,
    ParameterError,
    TimeInterval,
    validate_partition,
)

KINDS = ("experimental", "snapshots", "random")
WINDOW_MODES = ("fixed", "varying")

#: default minimum mosaic duration, as a fraction of the domain length
MIN_DURATION_FRACTION = 0.05


@dataclass(frozen=True)
class ScenarioParams:
    """Configuration for :func:`generate_scenario`.

    ``k`` counts segments (snapshots) or splits (random).  ``specs`` is only
    used by the experimental kind and lists (members, (start, end)) pairs.
    ``min_duration=None`` defaults to 5% of the domain length.
    """

    kind: str
    k: int = 0
    window_mode: str = "fixed"
    gamma: float = 0.0
    min_nodes: int = 2
    min_duration: float | None = None
    seed: int = 0
    specs: tuple[tuple[frozenset[int], tuple[float, float]], ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown kind {self.kind!r}, expected one of {KINDS}")
        if self.window_mode not in WINDOW_MODES:
            raise ParameterError(
                f"unknown window_mode {self.window_mode!r}, "
                f"expected one of {WINDOW_MODES}"
            )
        if self.kind != "experimental" and self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ParameterError(f"gamma must be in [0, 1], got {self.gamma}")
        if self.min_nodes < 1:
            raise ParameterError(f"min_nodes must be >= 1, got {self.min_nodes}")
        if self.min_duration is not None and not self.min_duration > 0:
            raise ParameterError(
                f"min_duration must be > 0, got {self.min_duration}"
            )
        if self.seed < 0:
            raise ParameterError(f"seed must be >= 0, got {self.seed}")


def experimental_scenario(
    specs: Sequence[tuple[Iterable[int], tuple[float, float]]],
    nodes: frozenset[int],
    domain: TimeInterval,
) -> MosaicPartition:
    """Build a partition directly from (members, (start, end)) entries.

    Entries are assigned ids in order.  The result must satisfy the mosaic
    partition invariants; violations raise.  Singleton communities are legal
    here but warned about, since they can never host an internal edge.
    """
    mosaics = []
    for i, (members, (start, end)) in enumerate(specs):
        members = frozenset(int(v) for v in members)
        if len(members) == 1:
            warnings.warn(
                f"community {i} has a single node and will stay edge-free",
                stacklevel=2,
            )
        mosaics.append(Mosaic(i, members, TimeInterval(float(start), float(end))))
    partition = MosaicPartition(tuple(mosaics), nodes, domain)
    report = validate_partition(partition)
    if not report.ok:
        raise ParameterError(f"invalid scenario spec: {report}")
    return partition


def random_node_partition(
    nodes: frozenset[int], min_size: int, rng: np.random.Generator
) -> list[frozenset[int]]:
    """Split nodes into random groups, every group of size >= min_size.

    Group sizes are drawn uniformly from {min_size..remaining}; a final
    remainder smaller than min_size is merged into the last group.
    """
    if min_size < 1:
        raise ParameterError(f"min_size must be >= 1, got {min_size}")
    if len(nodes) < min_size:
        raise ParameterError(
            f"cannot partition {len(nodes)} nodes into groups of >= {min_size}"
        )
    ordered = np.array(sorted(nodes))
    ordered = ordered[rng.permutation(len(ordered))]
    sizes: list[int] = []
    remaining = len(ordered)
    while remaining >= min_size:
        size = int(rng.integers(min_size, remaining + 1))
        sizes.append(size)
        remaining -= size
    if remaining:
        sizes[-1] += remaining
    groups = []
    at = 0
    for size in sizes:
        groups.append(frozenset(int(v) for v in ordered[at : at + size]))
        at += size
    return groups


def snapshot_scenario(
    nodes: frozenset[int],
    domain: TimeInterval,
    k: int,
    window_mode: str,
    rng: np.random.Generator,
    min_size: int = 2,
) -> MosaicPartition:
    """Slice time into k segments and re-partition the nodes in each.

    ``fixed`` mode uses equal-length segments, ``varying`` mode cuts at k-1
    uniform points.  Mosaic ids run left to right, group by group.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if window_mode not in WINDOW_MODES:
        raise ParameterError(f"unknown window_mode {window_mode!r}")
    if window_mode == "fixed":
        length = domain.length
        boundaries = [domain.start + length * i / k for i in range(k)]
        boundaries.append(domain.end)
    else:
        while True:
            cuts = np.sort(rng.uniform(domain.start, domain.end, k - 1))
            boundaries = [domain.start, *cuts.tolist(), domain.end]
            if all(b2 > b1 for b1, b2 in zip(boundaries, boundaries[1:])):
                break  # collisions have probability zero but would be fatal
    mosaics = []
    for i in range(k):
        interval = TimeInterval(boundaries[i], boundaries[i + 1])
        for group in random_node_partition(nodes, min_size, rng):
            mosaics.append(Mosaic(len(mosaics), group, interval))
    return MosaicPartition(tuple(mosaics), nodes, domain)


def split_mosaic(
    mosaic: Mosaic,
    rng: np.random.Generator,
    min_nodes: int = 2,
    min_duration: float = 1.0,
    id_start: int = 0,
) -> list[Mosaic]:
    """Split one mosaic into four by a node bipartition and a time cut.

    The node split point is uniform over sizes leaving both sides >=
    min_nodes; the time cut is uniform over points leaving both halves >=
    min_duration.  Children get ids id_start..id_start+3 in the order
    (left side, early), (left side, late), (right side, early), (right, late).
    """
    if min_nodes < 1:
        raise ParameterError(f"min_nodes must be >= 1, got {min_nodes}")
    if not min_duration > 0:
        raise ParameterError(f"min_duration must be > 0, got {min_duration}")
    if mosaic.size < 2 * min_nodes:
        raise ParameterError(
            f"mosaic {mosaic.id} has {mosaic.size} nodes, needs >= {2 * min_nodes}"
        )
    if mosaic.duration < 2 * min_duration:
        raise ParameterError(
            f"mosaic {mosaic.id} lasts {mosaic.duration}, needs >= {2 * min_duration}"
        )
    members = np.array(sorted(mosaic.members))
    members = members[rng.permutation(len(members))]
    cut = int(rng.integers(min_nodes, mosaic.size - min_nodes + 1))
    side_a = frozenset(int(v) for v in members[:cut])
    side_b = frozenset(int(v) for v in members[cut:])
    lo = mosaic.interval.start + min_duration
    hi = mosaic.interval.end - min_duration
    t_cut = float(rng.uniform(lo, hi)) if hi > lo else lo
    early = TimeInterval(mosaic.interval.start, t_cut)
    late = TimeInterval(t_cut, mosaic.interval.end)
    return [
        Mosaic(id_start, side_a, early),
        Mosaic(id_start + 1, side_a, late),
        Mosaic(id_start + 2, side_b, early),
        Mosaic(id_start + 3, side_b, late),
    ]


def random_scenario(
    nodes: frozenset[int],
    domain: TimeInterval,
    k: int,
    rng: np.random.Generator,
    min_nodes: int = 2,
    min_duration: float | None = None,
) -> MosaicPartition:
    """Grow a partition by k recursive four-way splits of random leaves.

    Starts from one mosaic covering everything; each step picks a uniformly
    random leaf that is still splittable (both constraints satisfiable) and
    replaces it with its four children.  Steps with no splittable leaf are
    skipped with a warning.  Leaves are numbered in creation order.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if min_duration is None:
        min_duration = MIN_DURATION_FRACTION * domain.length
    leaves: list[tuple[frozenset[int], TimeInterval]] = [(nodes, domain)]
    for step in range(k):
        splittable = [
            i
            for i, (members, interval) in enumerate(leaves)
            if len(members) >= 2 * min_nodes and interval.length >= 2 * min_duration
        ]
        if not splittable:
            warnings.warn(
                f"no splittable leaf left, skipping {k - step} of {k} splits",
                stacklevel=2,
            )
            break
        pick = splittable[int(rng.integers(0, len(splittable)))]
        members, interval = leaves.pop(pick)
        children = split_mosaic(
            Mosaic(0, members, interval), rng, min_nodes, min_duration
        )
        leaves.extend((c.members, c.interval) for c in children)
    kept = [
        (members, interval)
        for members, interval in leaves
        if len(members) >= min_nodes and interval.length >= min_duration
    ]
    if len(kept) < len(leaves):
        warnings.warn(
            f"pruned {len(leaves) - len(kept)} undersized leaves to the "
            "empty community",
            stacklevel=2,
        )
    mosaics = tuple(
        Mosaic(i, members, interval) for i, (members, interval) in enumerate(kept)
    )
    return MosaicPartition(mosaics, nodes, domain)


def empty_mosaics(
    p: MosaicPartition, gamma: float, rng: np.random.Generator
) -> MosaicPartition:
    """Remove each mosaic independently with probability gamma.

    Removed cells fall to the implicit empty community; survivors keep their
    original ids, so removals never renumber anything.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError(f"gamma must be in [0, 1], got {gamma}")
    draws = rng.random(len(p.mosaics))
    survivors = tuple(m for m, d in zip(p.mosaics, draws) if d >= gamma)
    return MosaicPartition(survivors, p.nodes, p.domain)


def generate_scenario(
    params: ScenarioParams, nodes: frozenset[int], domain: TimeInterval
) -> MosaicPartition:
    """Build the partition named by ``params.kind`` and apply gamma-emptying.

    Layout and emptying consume independent streams derived from
    ``params.seed``, so changing gamma never reshuffles the layout.
    """
    layout_rng = np.random.default_rng(np.random.SeedSequence((params.seed, 0)))
    if params.kind == "experimental":
        p = experimental_scenario(params.specs, nodes, domain)
    elif params.kind == "snapshots":
        p = snapshot_scenario(
            nodes, domain, params.k, params.window_mode, layout_rng, params.min_nodes
        )
    else:
        p = random_scenario(
            nodes, domain, params.k, layout_rng, params.min_nodes, params.min_duration
        )
    if params.gamma > 0.0:
        empty_rng = np.random.default_rng(np.random.SeedSequence((params.seed, 1)))
        p = empty_mosaics(p, params.gamma, empty_rng)
    return p
