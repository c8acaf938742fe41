"""Canonical file formats used by the command line tools.

Everything is written deterministically: UTF-8, LF line endings, sorted
rows, shortest round-trip decimals for floats.  Identical data always
produces identical bytes, which the determinism guarantees lean on.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from mosaicstream.core import (
    LinkStream,
    Mosaic,
    MosaicPartition,
    ParameterError,
    TemporalEdge,
    TimeInterval,
)
from mosaicstream.snapshot import DynamicPartition, SnapshotSequence

EDGES_HEADER = "u,v,t"


def write_edges(path: str | Path, ls: LinkStream) -> None:
    lines = [EDGES_HEADER]
    lines.extend(f"{e.u},{e.v},{e.t!r}" for e in ls.edges)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_edges(
    path: str | Path, nodes: frozenset[int], domain: TimeInterval
) -> LinkStream:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0] != EDGES_HEADER:
        raise ParameterError(f"{path}:1: expected header {EDGES_HEADER!r}")
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            raise ParameterError(f"{path}:{lineno}: blank line")
        parts = line.split(",")
        if len(parts) != 3:
            raise ParameterError(f"{path}:{lineno}: expected 3 fields")
        try:
            u, v, t = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ParameterError(f"{path}:{lineno}: {exc}") from None
        edges.append(TemporalEdge(u, v, t))
    return LinkStream(nodes, domain, tuple(edges))


def write_json(path: str | Path, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def read_json(path: str | Path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def truth_to_dict(p: MosaicPartition) -> dict:
    return {
        "nodes": len(p.nodes),
        "t_start": p.domain.start,
        "t_end": p.domain.end,
        "mosaics": [
            {
                "id": m.id,
                "nodes": sorted(m.members),
                "t_start": m.interval.start,
                "t_end": m.interval.end,
            }
            for m in p.mosaics
        ],
    }


def write_truth(path: str | Path, p: MosaicPartition) -> None:
    write_json(path, truth_to_dict(p))


def read_truth(path: str | Path) -> MosaicPartition:
    doc = read_json(path)
    try:
        nodes = frozenset(range(int(doc["nodes"])))
        domain = TimeInterval(float(doc["t_start"]), float(doc["t_end"]))
        mosaics = tuple(
            Mosaic(
                int(m["id"]),
                frozenset(int(v) for v in m["nodes"]),
                TimeInterval(float(m["t_start"]), float(m["t_end"])),
            )
            for m in doc["mosaics"]
        )
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"{path}: malformed ground truth: {exc}") from None
    return MosaicPartition(mosaics, nodes, domain)


def write_snapshots(path: str | Path, s: SnapshotSequence) -> None:
    lines = ["window,u,v,weight"]
    for w, graph in enumerate(s.graphs):
        for (u, v), weight in sorted(graph.items()):
            lines.append(f"{w},{u},{v},{weight}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_windows(path: str | Path, s: SnapshotSequence) -> None:
    write_json(
        path, {"boundaries": list(s.boundaries), "nodes": len(s.nodes)}
    )


def write_labels(path: str | Path, d: DynamicPartition) -> None:
    lines = ["window,node,label"]
    for w in range(d.n_windows):
        row = d.labels[w]
        lines.extend(f"{w},{v},{int(row[v])}" for v in range(d.n_nodes))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


REPORT_HEADER = "method,mean_nmi,mosaic_nmi,sm_p,sm_n,sm_l"


def write_report(path: str | Path, rows: Iterable[Mapping]) -> None:
    lines = [REPORT_HEADER]
    for row in rows:
        lines.append(
            f"{row['method']},{row['mean_nmi']!r},{row['mosaic_nmi']!r},"
            f"{row['sm_p']!r},{row['sm_n']!r},{row['sm_l']!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def summary_stats(p: MosaicPartition, ls: LinkStream | None) -> dict:
    sizes = [m.size for m in p.mosaics]
    durations = [m.duration for m in p.mosaics]
    stats = {
        "communities": len(p.mosaics),
        "mean_size": float(np.mean(sizes)) if sizes else 0.0,
        "mean_duration": float(np.mean(durations)) if durations else 0.0,
    }
    if ls is not None:
        stats["edges"] = len(ls)
    return stats
