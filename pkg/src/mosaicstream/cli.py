"""Command line surface: generation, aggregation, detection, evaluation.

Configuration lives in a JSON file; every flag overrides its config
counterpart.  A single master seed drives scenario layout, emptying, edge
generation and rewiring through independent derived substreams, so one
(config, seed) pair pins down every output byte regardless of thread count.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from mosaicstream import __version__
from mosaicstream import _io
from mosaicstream.core import (
    DomainError,
    GenerationError,
    ParameterError,
    PartitionError,
    TimeInterval,
    validate_partition,
)
from mosaicstream.detect import METHODS, DetectorConfig, detect
from mosaicstream.edgegen import EdgeGenParams, generate_link_stream
from mosaicstream.metrics import score
from mosaicstream.scenario import ScenarioParams, generate_scenario
from mosaicstream.snapshot import aggregate

#: sweep defaults: phi grid 0..0.5 step 0.1, 10 seeds per point
DEFAULT_PHI = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)
DEFAULT_SWEEP_SEEDS = 10


@dataclass(frozen=True)
class SweepConfig:
    phi: tuple[float, ...] = DEFAULT_PHI
    seeds: int = DEFAULT_SWEEP_SEEDS

    def __post_init__(self):
        if not self.phi:
            raise ParameterError("sweep needs at least one phi value")
        for phi in self.phi:
            if not 0.0 <= phi <= 0.5:
                raise ParameterError(f"phi must be in [0, 0.5], got {phi}")
        if self.seeds < 1:
            raise ParameterError(f"sweep seeds must be >= 1, got {self.seeds}")


@dataclass(frozen=True)
class RunConfig:
    """One experiment: node/time domain, scenario, edge model, detectors."""

    nodes: int = 100
    t_start: float = 0.0
    t_end: float = 100.0
    seed: int = 0
    window: float = 2.0
    scenario: ScenarioParams = ScenarioParams(kind="random", k=30, gamma=0.2)
    edges: EdgeGenParams = EdgeGenParams(alpha=0.9, beta=0.1)
    detectors: tuple[DetectorConfig, ...] = tuple(
        DetectorConfig(method=m) for m in METHODS
    )
    sweep: SweepConfig | None = None
    out: str = "out"

    def __post_init__(self):
        if self.nodes < 1:
            raise ParameterError(f"nodes must be >= 1, got {self.nodes}")
        if not self.t_end > self.t_start:
            raise ParameterError("t_end must be greater than t_start")
        if not self.window > 0:
            raise ParameterError(f"window must be > 0, got {self.window}")
        if self.seed < 0:
            raise ParameterError(f"seed must be >= 0, got {self.seed}")

    @property
    def node_set(self) -> frozenset[int]:
        return frozenset(range(self.nodes))

    @property
    def domain(self) -> TimeInterval:
        return TimeInterval(self.t_start, self.t_end)

    def seeded(self, seed: int) -> "RunConfig":
        """Propagate one master seed into the scenario and edge substreams."""
        return replace(
            self,
            seed=seed,
            scenario=replace(self.scenario, seed=seed),
            edges=replace(self.edges, seed=seed),
        )

    def at_phi(self, phi: float) -> "RunConfig":
        return replace(self, edges=replace(self.edges, alpha=1.0 - phi, beta=phi))


def _parse_lambda_in(value):
    if isinstance(value, Mapping):
        return {int(k): float(v) for k, v in value.items()}
    return float(value)


def _parse_lambda_ext(value):
    if isinstance(value, Mapping):
        out = {}
        for k, v in value.items():
            i, j = (int(part) for part in str(k).split(","))
            out[(i, j)] = float(v)
        return out
    return float(value)


def _parse_specs(entries) -> tuple:
    return tuple(
        (frozenset(int(v) for v in members), (float(start), float(end)))
        for members, (start, end) in entries
    )


def config_from_dict(doc: Mapping) -> RunConfig:
    """Build a RunConfig from a JSON document, applying defaults throughout."""
    base = RunConfig()
    scen = dict(doc.get("scenario", {}))
    if "specs" in scen:
        scen["specs"] = _parse_specs(scen["specs"])
    scenario = ScenarioParams(
        kind=scen.get("kind", base.scenario.kind),
        k=int(scen.get("k", base.scenario.k)),
        window_mode=scen.get("window_mode", base.scenario.window_mode),
        gamma=float(scen.get("gamma", base.scenario.gamma)),
        min_nodes=int(scen.get("min_nodes", base.scenario.min_nodes)),
        min_duration=scen.get("min_duration", base.scenario.min_duration),
        specs=scen.get("specs", ()),
    )
    edge = dict(doc.get("edges", {}))
    edges = EdgeGenParams(
        alpha=float(edge.get("alpha", base.edges.alpha)),
        beta=float(edge.get("beta", base.edges.beta)),
        lambda_in=_parse_lambda_in(edge.get("lambda_in", base.edges.lambda_in)),
        lambda_ext=_parse_lambda_ext(edge.get("lambda_ext", base.edges.lambda_ext)),
        eta=float(edge.get("eta", base.edges.eta)),
    )
    detectors = base.detectors
    if "detectors" in doc:
        detectors = tuple(
            DetectorConfig(
                method=d["method"],
                theta=float(d.get("theta", 0.3)),
                rho=float(d.get("rho", 0.9)),
                seed=int(d.get("seed", 0)),
            )
            for d in doc["detectors"]
        )
    sweep = None
    if "sweep" in doc:
        sw = doc["sweep"]
        sweep = SweepConfig(
            phi=tuple(float(x) for x in sw.get("phi", DEFAULT_PHI)),
            seeds=int(sw.get("seeds", DEFAULT_SWEEP_SEEDS)),
        )
    cfg = RunConfig(
        nodes=int(doc.get("nodes", base.nodes)),
        t_start=float(doc.get("t_start", base.t_start)),
        t_end=float(doc.get("t_end", base.t_end)),
        seed=int(doc.get("seed", base.seed)),
        window=float(doc.get("window", base.window)),
        scenario=scenario,
        edges=edges,
        detectors=detectors,
        sweep=sweep,
        out=str(doc.get("out", base.out)),
    )
    return cfg.seeded(cfg.seed)


def config_to_dict(cfg: RunConfig) -> dict:
    """Echo of the effective configuration, as written into manifests.

    The output directory is omitted: manifests describe the experiment, not
    where its files happen to live, and stay byte-comparable across runs.
    """
    edges = cfg.edges
    lambda_in = (
        {str(k): v for k, v in edges.lambda_in.items()}
        if isinstance(edges.lambda_in, Mapping)
        else edges.lambda_in
    )
    lambda_ext = (
        {f"{i},{j}": v for (i, j), v in edges.lambda_ext.items()}
        if isinstance(edges.lambda_ext, Mapping)
        else edges.lambda_ext
    )
    doc = {
        "nodes": cfg.nodes,
        "t_start": cfg.t_start,
        "t_end": cfg.t_end,
        "seed": cfg.seed,
        "window": cfg.window,
        "scenario": {
            "kind": cfg.scenario.kind,
            "k": cfg.scenario.k,
            "window_mode": cfg.scenario.window_mode,
            "gamma": cfg.scenario.gamma,
            "min_nodes": cfg.scenario.min_nodes,
            "min_duration": cfg.scenario.min_duration,
            "specs": [
                [sorted(members), [start, end]]
                for members, (start, end) in cfg.scenario.specs
            ],
        },
        "edges": {
            "alpha": edges.alpha,
            "beta": edges.beta,
            "lambda_in": lambda_in,
            "lambda_ext": lambda_ext,
            "eta": edges.eta,
        },
        "detectors": [
            {"method": d.method, "theta": d.theta, "rho": d.rho, "seed": d.seed}
            for d in cfg.detectors
        ],
    }
    if cfg.sweep is not None:
        doc["sweep"] = {"phi": list(cfg.sweep.phi), "seeds": cfg.sweep.seeds}
    return doc


def load_config(args: argparse.Namespace) -> RunConfig:
    doc = {}
    if getattr(args, "config", None):
        doc = _io.read_json(args.config)
        if not isinstance(doc, dict):
            raise ParameterError(f"{args.config}: config must be a JSON object")
    cfg = config_from_dict(doc)
    if getattr(args, "seed", None) is not None:
        cfg = cfg.seeded(args.seed)
    if getattr(args, "out", None) is not None:
        cfg = replace(cfg, out=args.out)
    if getattr(args, "window", None) is not None:
        cfg = replace(cfg, window=args.window)
    if getattr(args, "phi", None) is not None:
        sweep = cfg.sweep or SweepConfig()
        cfg = replace(cfg, sweep=replace(sweep, phi=tuple(args.phi)))
    if getattr(args, "method", None) is not None:
        keep = [d for d in cfg.detectors if d.method in args.method]
        missing = set(args.method) - {d.method for d in keep}
        for name in sorted(missing):
            keep.append(DetectorConfig(method=name))
        cfg = replace(cfg, detectors=tuple(keep))
    return cfg


def _generate_files(cfg: RunConfig, threads: int, outdir: Path) -> dict:
    partition = generate_scenario(cfg.scenario, cfg.node_set, cfg.domain)
    stream = generate_link_stream(partition, cfg.edges, threads=threads)
    outdir.mkdir(parents=True, exist_ok=True)
    _io.write_edges(outdir / "edges.csv", stream)
    _io.write_truth(outdir / "truth.json", partition)
    manifest = {
        "config": config_to_dict(cfg),
        "seed": cfg.seed,
        "version": __version__,
        "stats": _io.summary_stats(partition, stream),
    }
    _io.write_json(outdir / "manifest.json", manifest)
    return manifest


def cmd_generate(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    outdir = Path(cfg.out)
    manifest = _generate_files(cfg, args.threads, outdir)
    stats = manifest["stats"]
    print(
        f"wrote {outdir}/edges.csv truth.json manifest.json: "
        f"{stats['communities']} communities, {stats['edges']} edges"
    )
    return 0


def _read_inputs(args: argparse.Namespace):
    partition = _io.read_truth(args.truth)
    stream = _io.read_edges(args.edges, partition.nodes, partition.domain)
    return partition, stream


def cmd_aggregate(args: argparse.Namespace) -> int:
    partition, stream = _read_inputs(args)
    snapshots = aggregate(stream, args.window)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _io.write_snapshots(outdir / "snapshots.csv", snapshots)
    _io.write_windows(outdir / "windows.json", snapshots)
    print(f"wrote {outdir}/snapshots.csv windows.json: {snapshots.n_windows} windows")
    return 0


def _detector_configs(args: argparse.Namespace) -> tuple[DetectorConfig, ...]:
    methods = args.method if args.method is not None else list(METHODS)
    return tuple(
        DetectorConfig(method=m, theta=args.theta, rho=args.rho, seed=args.seed or 0)
        for m in methods
    )


def cmd_detect(args: argparse.Namespace) -> int:
    partition, stream = _read_inputs(args)
    snapshots = aggregate(stream, args.window)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for dc in _detector_configs(args):
        result = detect(snapshots, dc)
        _io.write_labels(outdir / f"labels_{dc.method}.csv", result)
    print(f"wrote {outdir}/labels_<method>.csv for {len(_detector_configs(args))} methods")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    partition, stream = _read_inputs(args)
    snapshots = aggregate(stream, args.window)
    rows = []
    window_rows = ["method,window,nmi"]
    for dc in _detector_configs(args):
        result = detect(snapshots, dc)
        report = score(result, partition, snapshots.boundaries)
        rows.append(
            {
                "method": dc.method,
                "mean_nmi": report.mean_nmi,
                "mosaic_nmi": report.mosaic_nmi,
                "sm_p": report.sm_p,
                "sm_n": report.sm_n,
                "sm_l": report.sm_l,
            }
        )
        window_rows.extend(
            f"{dc.method},{w},{v!r}" for w, v in enumerate(report.per_window_nmi)
        )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _io.write_report(outdir / "report.csv", rows)
    (outdir / "report_windows.csv").write_text(
        "\n".join(window_rows) + "\n", encoding="utf-8", newline="\n"
    )
    print(f"wrote {outdir}/report.csv: {len(rows)} methods")
    return 0


def _sweep_point(cfg: RunConfig, phi: float, run_seed: int) -> list[dict]:
    point = cfg.at_phi(phi).seeded(run_seed)
    partition = generate_scenario(point.scenario, point.node_set, point.domain)
    stream = generate_link_stream(partition, point.edges)
    snapshots = aggregate(stream, point.window)
    rows = []
    for dc in point.detectors:
        result = detect(snapshots, dc)
        report = score(result, partition, snapshots.boundaries)
        rows.append(
            {
                "phi": phi,
                "seed": run_seed,
                "method": dc.method,
                "mean_nmi": report.mean_nmi,
                "sm_p": report.sm_p,
                "sm_n": report.sm_n,
                "sm_l": report.sm_l,
            }
        )
    return rows


def run_sweep(cfg: RunConfig, threads: int = 1) -> list[dict]:
    """All sweep rows in deterministic (phi, seed, method) order."""
    if cfg.sweep is None:
        raise ParameterError("config has no sweep section")
    tasks = [
        (phi, cfg.seed + idx)
        for phi in cfg.sweep.phi
        for idx in range(cfg.sweep.seeds)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(lambda task: _sweep_point(cfg, *task), tasks)
            )
    else:
        results = [_sweep_point(cfg, *task) for task in tasks]
    return [row for rows in results for row in rows]


def summarize_sweep(rows: list[dict]) -> list[dict]:
    """Mean over seeds per (phi, method), in first-seen order."""
    groups: dict[tuple[float, str], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["phi"], row["method"]), []).append(row)
    summary = []
    for (phi, method), members in groups.items():
        summary.append(
            {
                "phi": phi,
                "method": method,
                "mean_nmi": float(np.mean([r["mean_nmi"] for r in members])),
                "sm_p": float(np.mean([r["sm_p"] for r in members])),
                "sm_n": float(np.mean([r["sm_n"] for r in members])),
                "sm_l": float(np.mean([r["sm_l"] for r in members])),
            }
        )
    return summary


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    if cfg.sweep is None:
        cfg = replace(cfg, sweep=SweepConfig())
    rows = run_sweep(cfg, threads=args.threads)
    summary = summarize_sweep(rows)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    lines = ["phi,seed,method,mean_nmi,sm_p,sm_n,sm_l"]
    lines.extend(
        f"{r['phi']!r},{r['seed']},{r['method']},"
        f"{r['mean_nmi']!r},{r['sm_p']!r},{r['sm_n']!r},{r['sm_l']!r}"
        for r in rows
    )
    (outdir / "sweep.csv").write_text(
        "\n".join(lines) + "\n", encoding="utf-8", newline="\n"
    )
    lines = ["phi,method,mean_nmi,sm_p,sm_n,sm_l"]
    lines.extend(
        f"{r['phi']!r},{r['method']},"
        f"{r['mean_nmi']!r},{r['sm_p']!r},{r['sm_n']!r},{r['sm_l']!r}"
        for r in summary
    )
    (outdir / "summary.csv").write_text(
        "\n".join(lines) + "\n", encoding="utf-8", newline="\n"
    )
    print(f"wrote {outdir}/sweep.csv summary.csv: {len(rows)} rows")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    partition = _io.read_truth(args.truth)
    report = validate_partition(partition)
    if args.edges:
        _io.read_edges(args.edges, partition.nodes, partition.domain)
    print(str(report))
    return 0 if report.ok else 2


def cmd_stats(args: argparse.Namespace) -> int:
    partition = _io.read_truth(args.truth)
    stream = None
    if args.edges:
        stream = _io.read_edges(args.edges, partition.nodes, partition.domain)
    print(json.dumps(_io.summary_stats(partition, stream), indent=2, sort_keys=True))
    return 0


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part]


def _method_list(text: str) -> list[str]:
    methods = [part for part in text.split(",") if part]
    for m in methods:
        if m not in METHODS:
            raise argparse.ArgumentTypeError(
                f"unknown method {m!r}, expected one of {METHODS}"
            )
    return methods


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mosaicstream",
        description="Generate modular link streams and evaluate dynamic "
        "community detection against the planted structure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=False, io_files=False, detect_flags=False):
        if config:
            p.add_argument("--config", help="JSON config file")
            p.add_argument("--seed", type=int, help="master seed override")
            p.add_argument("--out", help="output directory override")
        if io_files:
            p.add_argument("--edges", required=True, help="edges CSV file")
            p.add_argument("--truth", required=True, help="ground-truth JSON file")
            p.add_argument("--window", type=float, required=True, help="window size")
            p.add_argument("--out", default="out", help="output directory")
        if detect_flags:
            p.add_argument(
                "--method",
                type=_method_list,
                help=f"comma-separated subset of {','.join(METHODS)}",
            )
            p.add_argument("--theta", type=float, default=0.3)
            p.add_argument("--rho", type=float, default=0.9)
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("generate", help="generate a link stream with ground truth")
    add_common(p, config=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("aggregate", help="aggregate edges into window snapshots")
    add_common(p, io_files=True)
    p.set_defaults(fn=cmd_aggregate)

    p = sub.add_parser("detect", help="run detectors, write per-window labels")
    add_common(p, io_files=True, detect_flags=True)
    p.set_defaults(fn=cmd_detect)

    p = sub.add_parser("evaluate", help="run detectors and score against truth")
    add_common(p, io_files=True, detect_flags=True)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("sweep", help="phi sweep: generate, detect, score")
    add_common(p, config=True)
    p.add_argument("--phi", type=_float_list, help="comma-separated phi values")
    p.add_argument(
        "--method", type=_method_list, help="comma-separated method subset"
    )
    p.add_argument("--window", type=float, help="window size override")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("validate", help="check a ground-truth file (and edges)")
    p.add_argument("--truth", required=True)
    p.add_argument("--edges")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("stats", help="recompute summary stats from data files")
    p.add_argument("--truth", required=True)
    p.add_argument("--edges")
    p.set_defaults(fn=cmd_stats)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (
        ParameterError,
        DomainError,
        PartitionError,
        GenerationError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
