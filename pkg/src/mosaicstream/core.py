"""Domain types for link streams and node-time community tilings.

A link stream is a set of nodes interacting through instantaneous timestamped
edges over a continuous time domain.  Communities ("mosaics") are rectangles
in node-time space: a node set paired with a half-open time interval.  A
mosaic partition is a collection of such rectangles that never overlap; the
uncovered remainder of node-time space is the implicit empty community,
identified by the sentinel label ``EMPTY``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

#: Label of the implicit empty community (the uncovered region of node-time
#: space, where no edges may attach).  Explicit mosaic ids are >= 0.
EMPTY = -1


class ParameterError(ValueError):
    """An argument violates an operation's precondition."""


class DomainError(ValueError):
    """A node or time lies outside the partition's node set or time domain."""


class PartitionError(ValueError):
    """A mosaic collection violates the no-overlap / containment contract."""

    def __init__(self, message: str, violations: Sequence["Violation"] = ()):
        super().__init__(message)
        self.violations = list(violations)


class GenerationError(RuntimeError):
    """Edge generation or rewiring cannot proceed (e.g. no eligible mosaics)."""


@dataclass(frozen=True, order=True)
class TimeInterval:
    """Half-open interval [start, end) in real time units."""

    start: float
    end: float

    def __post_init__(self):
        if not (self.start < self.end):
            raise ParameterError(
                f"interval start must be < end, got [{self.start}, {self.end})"
            )

    @property
    def length(self) -> float:
        return self.end - self.start

    def contains(self, t: float) -> bool:
        return self.start <= t < self.end

    def covers(self, other: "TimeInterval") -> bool:
        return self.start <= other.start and other.end <= self.end

    def intersect(self, other: "TimeInterval") -> "TimeInterval | None":
        """Overlap with ``other``, or None when the interiors are disjoint."""
        lo = max(self.start, other.start)
        hi = min(self.end, other.end)
        if lo < hi:
            return TimeInterval(lo, hi)
        return None

    def overlaps(self, other: "TimeInterval") -> bool:
        return max(self.start, other.start) < min(self.end, other.end)


@dataclass(frozen=True)
class TemporalEdge:
    """Instantaneous interaction between two distinct nodes.

    Endpoints are unordered; instances are canonicalized to u < v.  The
    canonical sort order of edge sequences is (t, u, v).
    """

    u: int
    v: int
    t: float

    def __post_init__(self):
        if self.u == self.v:
            raise ParameterError(f"self-interaction at node {self.u}")
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    def sort_key(self) -> tuple[float, int, int]:
        return (self.t, self.u, self.v)


@dataclass(frozen=True)
class LinkStream:
    """A triple (nodes, edges, time domain) with canonically sorted edges."""

    nodes: frozenset[int]
    domain: TimeInterval
    edges: tuple[TemporalEdge, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        edges = tuple(sorted(self.edges, key=TemporalEdge.sort_key))
        object.__setattr__(self, "edges", edges)
        for e in edges:
            if e.u not in self.nodes or e.v not in self.nodes:
                raise DomainError(f"edge {e} has an endpoint outside the node set")
            if not self.domain.contains(e.t):
                raise DomainError(f"edge {e} lies outside the time domain")

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[TemporalEdge]:
        return iter(self.edges)

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Edge data as (u, v, t) arrays, in canonical order."""
        n = len(self.edges)
        u = np.fromiter((e.u for e in self.edges), dtype=np.int64, count=n)
        v = np.fromiter((e.v for e in self.edges), dtype=np.int64, count=n)
        t = np.fromiter((e.t for e in self.edges), dtype=np.float64, count=n)
        return u, v, t


@dataclass(frozen=True)
class Mosaic:
    """A community: a non-empty node set active over one time interval."""

    id: int
    members: frozenset[int]
    interval: TimeInterval

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            raise ParameterError(f"mosaic {self.id} has no members")
        if self.id < 0:
            raise ParameterError(f"mosaic id must be >= 0, got {self.id}")

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def duration(self) -> float:
        return self.interval.length

    def cell_measure(self) -> float:
        """Node-time area |members| * |interval|."""
        return self.size * self.duration


@dataclass(frozen=True)
class Violation:
    """One breach of the partition contract, naming the mosaics involved."""

    kind: str  # "overlap" | "out_of_domain" | "foreign_member" | "duplicate_id"
    mosaic_ids: tuple[int, ...]
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}{self.mosaic_ids}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class MosaicPartition:
    """Explicit mosaics tiling a subset of node-time space without overlap.

    The empty community is never materialized: it is whatever part of
    ``nodes x domain`` the explicit mosaics leave uncovered, so the
    "covers everything" half of the tiling contract holds by construction
    and only pairwise disjointness needs checking.
    """

    mosaics: tuple[Mosaic, ...]
    nodes: frozenset[int]
    domain: TimeInterval

    def __post_init__(self):
        object.__setattr__(self, "mosaics", tuple(self.mosaics))
        object.__setattr__(self, "nodes", frozenset(self.nodes))

    def __len__(self) -> int:
        return len(self.mosaics)

    def by_id(self, mosaic_id: int) -> Mosaic:
        for m in self.mosaics:
            if m.id == mosaic_id:
                return m
        raise KeyError(mosaic_id)

    def explicit_measure(self) -> float:
        return sum(m.cell_measure() for m in self.mosaics)


def validate_partition(p: MosaicPartition) -> ValidationReport:
    """Check the partition contract; violations are data, not exceptions.

    Reported violations: duplicate mosaic ids, members outside the node set,
    intervals outside the domain, and pairs of mosaics whose node-time cells
    intersect (shared node and overlapping intervals).
    """
    violations: list[Violation] = []

    seen_ids: set[int] = set()
    for m in p.mosaics:
        if m.id in seen_ids:
            violations.append(
                Violation("duplicate_id", (m.id,), f"mosaic id {m.id} reused")
            )
        seen_ids.add(m.id)
        foreign = m.members - p.nodes
        if foreign:
            violations.append(
                Violation(
                    "foreign_member",
                    (m.id,),
                    f"members {sorted(foreign)} not in the node set",
                )
            )
        if not p.domain.covers(m.interval):
            violations.append(
                Violation(
                    "out_of_domain",
                    (m.id,),
                    f"interval [{m.interval.start}, {m.interval.end}) "
                    f"outside domain [{p.domain.start}, {p.domain.end})",
                )
            )

    # Pairwise disjointness: sort by interval start so each mosaic is only
    # compared against candidates whose intervals can still overlap it.
    order = sorted(range(len(p.mosaics)), key=lambda i: p.mosaics[i].interval.start)
    for pos, i in enumerate(order):
        a = p.mosaics[i]
        for j in order[pos + 1:]:
            b = p.mosaics[j]
            if b.interval.start >= a.interval.end:
                break
            if a.members & b.members:
                violations.append(
                    Violation(
                        "overlap",
                        (a.id, b.id),
                        f"mosaics {a.id} and {b.id} share nodes "
                        f"{sorted(a.members & b.members)[:5]} on "
                        f"[{max(a.interval.start, b.interval.start)}, "
                        f"{min(a.interval.end, b.interval.end)})",
                    )
                )
    return ValidationReport(tuple(violations))


def membership(p: MosaicPartition, node: int, t: float) -> int:
    """Mosaic id covering (node, t), or ``EMPTY`` for the uncovered region."""
    if node not in p.nodes:
        raise DomainError(f"node {node} not in the partition's node set")
    if not p.domain.contains(t):
        raise DomainError(f"time {t} outside domain [{p.domain.start}, {p.domain.end})")
    for m in p.mosaics:
        if node in m.members and m.interval.contains(t):
            return m.id
    return EMPTY


def time_breakpoints(p: MosaicPartition) -> list[float]:
    """Sorted, deduplicated interval endpoints plus the domain endpoints.

    Between consecutive breakpoints every node's membership is constant.
    """
    points = {p.domain.start, p.domain.end}
    for m in p.mosaics:
        points.add(m.interval.start)
        points.add(m.interval.end)
    return sorted(points)


class MembershipIndex:
    """Per-node segment index for bulk membership lookups.

    For every node the domain is cut into consecutive half-open segments with
    constant membership, enabling O(log s) point queries and vectorized
    labelling of time arrays.  Assumes a valid (non-overlapping) partition.
    """

    def __init__(self, p: MosaicPartition):
        self.partition = p
        self._bounds: dict[int, np.ndarray] = {}
        self._labels: dict[int, np.ndarray] = {}
        per_node: dict[int, list[tuple[float, float, int]]] = {v: [] for v in p.nodes}
        for m in p.mosaics:
            iv = (m.interval.start, m.interval.end, m.id)
            for v in m.members:
                per_node[v].append(iv)
        for v, ivs in per_node.items():
            ivs.sort()
            bounds = [p.domain.start]
            labels = []
            for s, e, mid in ivs:
                if s > bounds[-1]:
                    labels.append(EMPTY)
                    bounds.append(s)
                labels.append(mid)
                bounds.append(e)
            if bounds[-1] < p.domain.end:
                labels.append(EMPTY)
                bounds.append(p.domain.end)
            self._bounds[v] = np.asarray(bounds, dtype=np.float64)
            self._labels[v] = np.asarray(labels, dtype=np.int64)

    def node_segments(self, node: int) -> tuple[np.ndarray, np.ndarray]:
        """(bounds, labels): len(bounds) == len(labels) + 1."""
        return self._bounds[node], self._labels[node]

    def label(self, node: int, t: float) -> int:
        bounds = self._bounds[node]
        i = bisect.bisect_right(bounds, t) - 1
        return int(self._labels[node][i])

    def labels_at(self, node: int, times: np.ndarray) -> np.ndarray:
        """Labels for an array of times, all within the domain."""
        idx = np.searchsorted(self._bounds[node], times, side="right") - 1
        return self._labels[node][idx]
