"""End-to-end acceptance checks for the whole toolkit.

Each test prints one ``ACCEPTANCE NN PASS|FAIL <what>`` line (visible with
``pytest -s``) and carries its collected failure reasons in the assert.
"""

import itertools
import math
import warnings
from collections import Counter, defaultdict
from dataclasses import replace
from time import perf_counter

import numpy as np
import pytest
import scipy.stats

from mosaicstream.cli import _generate_files, config_from_dict, run_sweep
from mosaicstream.core import (
    EMPTY,
    MembershipIndex,
    TimeInterval,
    time_breakpoints,
    validate_partition,
)
from mosaicstream.detect import Graph, louvain
from mosaicstream.edgegen import (
    EdgeGenParams,
    build_backbones,
    expected_edge_count,
    generate_edges,
    generate_link_stream,
    poisson_timestamps,
    rewire,
)
from mosaicstream.metrics import dynamic_mosaic_nmi, mosaic_nmi, nmi, sm_l, sm_n, sm_p
from mosaicstream.scenario import ScenarioParams, generate_scenario
from mosaicstream.snapshot import DynamicPartition, project_ground_truth


def report(num: int, desc: str, failures: list[str]) -> None:
    status = "FAIL" if failures else "PASS"
    print(f"\nACCEPTANCE {num:02d} {status} {desc}")
    assert not failures, f"criterion {num:02d}: " + "; ".join(failures)


@pytest.fixture(scope="session")
def sweep_rows():
    cfg = config_from_dict(
        {
            "seed": 1,
            "sweep": {"phi": [0.0, 0.1, 0.2, 0.3, 0.4, 0.5], "seeds": 10},
        }
    )
    return run_sweep(cfg, threads=4)


def rows_mean(rows, method, key, phi=None) -> float:
    vals = [
        r[key]
        for r in rows
        if r["method"] == method and (phi is None or r["phi"] == phi)
    ]
    return float(np.mean(vals))


def test_criterion_01_scenario_validity_fuzz():
    failures = []
    rng = np.random.default_rng(2024)
    t0 = perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for i in range(200):
            n = int(rng.integers(4, 201))
            k = int(rng.integers(0, 51))
            gamma = float(rng.choice([0.0, 0.2, 1.0]))
            kind = "snapshots" if i % 2 else "random"
            mode = "varying" if (i // 2) % 2 else "fixed"
            t_end = float(rng.uniform(5.0, 120.0))
            params = ScenarioParams(
                kind=kind,
                k=max(1, k),
                window_mode=mode,
                gamma=gamma,
                seed=int(rng.integers(0, 10**6)),
            )
            nodes = frozenset(range(n))
            domain = TimeInterval(0.0, t_end)
            p = generate_scenario(params, nodes, domain)
            rep = validate_partition(p)
            if not rep.ok:
                failures.append(f"run {i} ({kind}, n={n}, k={k}): {rep}")
                continue
            if i % 10 == 0 and p.mosaics:
                specs = tuple(
                    (m.members, (m.interval.start, m.interval.end)) for m in p.mosaics
                )
                pe = generate_scenario(
                    ScenarioParams(kind="experimental", specs=specs), nodes, domain
                )
                if not validate_partition(pe).ok:
                    failures.append(f"run {i}: experimental replay invalid")
    elapsed = perf_counter() - t0
    if elapsed >= 30.0:
        failures.append(f"200 runs took {elapsed:.1f}s, budget 30s")
    report(1, f"200 randomized scenarios all valid in {elapsed:.1f}s", failures)


def test_criterion_02_backbone_exactness():
    failures = []
    for seed in range(20):
        p = generate_scenario(
            ScenarioParams(kind="random", k=6, gamma=0.2, seed=seed),
            frozenset(range(24)),
            TimeInterval(0.0, 30.0),
        )
        params = EdgeGenParams(alpha=1.0, beta=0.0, seed=seed)
        by_ctx = defaultdict(set)
        cross = 0
        for e in build_backbones(p, params):
            if isinstance(e.context, tuple):
                cross += 1
            else:
                by_ctx[e.context].add((e.u, e.v))
        if cross:
            failures.append(f"seed {seed}: {cross} cross pairs despite beta=0")
        for m in p.mosaics:
            if m.size < 2:
                continue
            want = set(itertools.combinations(sorted(m.members), 2))
            if by_ctx.get(m.id, set()) != want:
                failures.append(f"seed {seed}: mosaic {m.id} backbone incomplete")
        idx = MembershipIndex(p)
        for e in generate_edges(p, params).edges:
            cu, cv = idx.label(e.u, e.t), idx.label(e.v, e.t)
            if cu != cv or cu == EMPTY:
                failures.append(f"seed {seed}: edge {e} leaves its community")
                break
    report(2, "alpha=1 backbones complete, beta=0 edges stay internal", failures)


def test_criterion_03_poisson_and_uniform_times():
    failures = []
    rng = np.random.default_rng(7)
    window = TimeInterval(0.0, 1.0)
    counts = np.empty(10_000)
    pooled = []
    for i in range(10_000):
        ts = poisson_timestamps(window, 4.0, rng)
        counts[i] = len(ts)
        pooled.append(ts)
    mean = float(counts.mean())
    if not 3.92 <= mean <= 4.08:
        failures.append(f"count mean {mean:.4f} outside [3.92, 4.08]")
    ks = scipy.stats.kstest(np.concatenate(pooled), "uniform")
    if ks.pvalue < 0.01:
        failures.append(f"KS uniformity rejected, p={ks.pvalue:.4g}")
    report(3, f"poisson mean {mean:.3f}, KS p={ks.pvalue:.3f}", failures)


def test_criterion_04_expected_edge_counts():
    failures = []
    base = EdgeGenParams(alpha=0.9, beta=0.1)
    for scen_seed in range(10):
        p = generate_scenario(
            ScenarioParams(kind="random", k=10, gamma=0.2, seed=scen_seed),
            frozenset(range(50)),
            TimeInterval(0.0, 40.0),
        )
        expected = expected_edge_count(p, base)
        counts = [
            len(generate_edges(p, replace(base, seed=s))) for s in range(50)
        ]
        observed = float(np.mean(counts))
        if expected == 0.0:
            if observed:
                failures.append(f"scenario {scen_seed}: edges from empty layout")
            continue
        rel = abs(observed - expected) / expected
        if rel > 0.03:
            failures.append(
                f"scenario {scen_seed}: mean {observed:.0f} vs "
                f"expected {expected:.0f} ({rel:.1%})"
            )
    report(4, "50-seed mean edge counts within 3% of expectation", failures)


def test_criterion_05_reference_instance_bands():
    failures = []
    communities, edges, times = [], [], []
    for seed in range(20):
        cfg = config_from_dict({"seed": seed})
        t0 = perf_counter()
        p = generate_scenario(cfg.scenario, cfg.node_set, cfg.domain)
        ls = generate_link_stream(p, cfg.edges)
        times.append(perf_counter() - t0)
        communities.append(len(p.mosaics))
        edges.append(len(ls))
    mean_comm = float(np.mean(communities))
    mean_edges = float(np.mean(edges))
    if not 43 <= mean_comm <= 79:
        failures.append(f"community mean {mean_comm:.1f} outside [43, 79]")
    if not 9_500 <= mean_edges <= 85_000:
        failures.append(f"edge mean {mean_edges:.0f} outside [9500, 85000]")
    if max(times) >= 10.0:
        failures.append(f"slowest generation {max(times):.2f}s, budget 10s")
    report(
        5,
        f"reference instance: {mean_comm:.1f} communities, "
        f"{mean_edges:.0f} edges, max {max(times):.2f}s",
        failures,
    )


def test_criterion_06_thread_count_invariance(tmp_path):
    failures = []
    cfg = config_from_dict({"seed": 5})
    dir_a, dir_b = tmp_path / "t1", tmp_path / "t4"
    _generate_files(cfg, 1, dir_a)
    _generate_files(cfg, 4, dir_b)
    for name in ("edges.csv", "truth.json", "manifest.json"):
        if (dir_a / name).read_bytes() != (dir_b / name).read_bytes():
            failures.append(f"{name} differs between 1 and 4 threads")
    report(6, "generation byte-identical for 1 vs 4 threads", failures)


def test_criterion_07_rewiring_contract():
    failures = []
    cfg = config_from_dict({"seed": 2})
    p = generate_scenario(cfg.scenario, cfg.node_set, cfg.domain)
    ls = generate_edges(p, cfg.edges)
    if len(ls) < 1000:
        failures.append(f"base stream too small ({len(ls)} edges)")
    if rewire(ls, p, 0.0, np.random.default_rng(1)) is not ls:
        failures.append("eta=0 did not return the stream unchanged")
    full = rewire(ls, p, 1.0, np.random.default_rng(2))
    if len(full) != len(ls):
        failures.append("eta=1 changed the edge count")
    if not validate_partition(p).ok:
        failures.append("partition invalid")
    half = rewire(ls, p, 0.5, np.random.default_rng(3))
    if len(half) != len(ls):
        failures.append("eta=0.5 changed the edge count")
    kept = sum((Counter(ls.edges) & Counter(half.edges)).values())
    frac = 1.0 - kept / len(ls)
    if abs(frac - 0.5) > 0.03:
        failures.append(f"eta=0.5 rewired fraction {frac:.3f} not within 0.03")
    report(7, f"rewiring: identity at 0, count kept, fraction {frac:.3f}", failures)


def test_criterion_08_nmi_degrades_with_phi(sweep_rows):
    failures = []
    methods = sorted({r["method"] for r in sweep_rows})
    for method in methods:
        lo = rows_mean(sweep_rows, method, "mean_nmi", phi=0.0)
        hi = rows_mean(sweep_rows, method, "mean_nmi", phi=0.5)
        if not lo > hi:
            failures.append(f"{method}: nmi {lo:.3f} at phi=0 !> {hi:.3f} at phi=0.5")
    report(8, "every method scores higher at phi=0 than at phi=0.5", failures)


def test_criterion_09_smoothing_orders_stability(sweep_rows):
    failures = []
    for key in ("sm_p", "sm_n"):
        base = rows_mean(sweep_rows, "no_smoothing", key)
        for other in ("implicit_global", "smoothed_graph"):
            val = rows_mean(sweep_rows, other, key)
            if not base <= val:
                failures.append(f"{key}: no_smoothing {base:.3f} > {other} {val:.3f}")
    report(9, "smoothing methods at least as stable as independent runs", failures)


def pair_nmi(la, lb) -> float:
    n = len(la)
    joint = Counter(zip(la, lb))
    ca, cb = Counter(la), Counter(lb)
    mi = sum(
        c / n * math.log((c / n) / ((ca[x] / n) * (cb[y] / n)))
        for (x, y), c in joint.items()
    )
    ha = -sum(c / n * math.log(c / n) for c in ca.values())
    hb = -sum(c / n * math.log(c / n) for c in cb.values())
    return 1.0 if ha + hb == 0.0 else 2.0 * mi / (ha + hb)


def test_criterion_10_metric_suite():
    failures = []
    if abs(nmi([0, 0, 1, 1], [0, 0, 1, 2]) - 0.8) > 1e-12:
        failures.append("refinement nmi is not exactly 0.8")
    if nmi([0, 0, 1, 1], [7, 7, 3, 3]) != pytest.approx(1.0):
        failures.append("nmi not label-name invariant")
    if nmi([0, 0, 1, 1], [5, 5, 5, 5]) != pytest.approx(0.0):
        failures.append("nmi of split vs single block not 0")
    d = DynamicPartition(np.array([[0, 0, 1, 1], [1, 1, 0, 0]]))
    if sm_p(d) != pytest.approx(1.0) or sm_n(d) != pytest.approx(0.0):
        failures.append("sm_p/sm_n hand values wrong")
    if sm_l(DynamicPartition(np.array([[0], [1], [0]]))) != pytest.approx(1 / 3):
        failures.append("sm_l run counting wrong")

    p1 = generate_scenario(
        ScenarioParams(kind="random", k=6, seed=3),
        frozenset(range(30)),
        TimeInterval(0.0, 50.0),
    )
    p2 = generate_scenario(
        ScenarioParams(kind="random", k=5, gamma=0.3, seed=11),
        frozenset(range(30)),
        TimeInterval(0.0, 50.0),
    )
    if mosaic_nmi(p1, p1) != pytest.approx(1.0):
        failures.append("mosaic_nmi identity not 1")
    bounds = time_breakpoints(p1)
    aligned = project_ground_truth(p1, bounds)
    if dynamic_mosaic_nmi(p1, aligned, bounds) != pytest.approx(1.0):
        failures.append("breakpoint-aligned projection not exact")

    exact = mosaic_nmi(p1, p2)
    rng = np.random.default_rng(7)
    n_samples = 1_000_000
    which = rng.integers(0, 30, n_samples)
    times = rng.uniform(0.0, 50.0, n_samples)
    idx1, idx2 = MembershipIndex(p1), MembershipIndex(p2)
    la = np.empty(n_samples, dtype=np.int64)
    lb = np.empty(n_samples, dtype=np.int64)
    for v in range(30):
        mask = which == v
        la[mask] = idx1.labels_at(v, times[mask])
        lb[mask] = idx2.labels_at(v, times[mask])
    mc = pair_nmi(la.tolist(), lb.tolist())
    if abs(exact - mc) >= 0.01:
        failures.append(f"mosaic_nmi {exact:.4f} vs monte carlo {mc:.4f}")
    report(10, f"metric oracles hold, MC gap {abs(exact - mc):.4f}", failures)


def dense_modularity(adj: np.ndarray, labels) -> float:
    deg = adj.sum(axis=1)
    two_m = deg.sum()
    if two_m == 0:
        return 0.0
    q = 0.0
    for i in range(adj.shape[0]):
        for j in range(adj.shape[0]):
            if labels[i] == labels[j]:
                q += adj[i, j] - deg[i] * deg[j] / two_m
    return q / two_m


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1 :]
        yield [[first]] + part


def test_criterion_11_louvain_reaches_exhaustive_optimum():
    failures = []

    def clique(nodes):
        return {(u, v): 1.0 for u, v in itertools.combinations(sorted(nodes), 2)}

    corpus = []
    for name, parts, bridges in [
        ("two triangles", [{0, 1, 2}, {3, 4, 5}], []),
        ("two 4-cliques", [{0, 1, 2, 3}, {4, 5, 6, 7}], []),
        ("3-clique and 5-clique", [{0, 1, 2}, {3, 4, 5, 6, 7}], []),
        ("barbell 3-3", [{0, 1, 2}, {3, 4, 5}], [(2, 3)]),
        ("barbell 4-4", [{0, 1, 2, 3}, {4, 5, 6, 7}], [(3, 4)]),
    ]:
        pairs = {}
        for part in parts:
            pairs.update(clique(part))
        for u, v in bridges:
            pairs[(u, v)] = 1.0
        corpus.append((name, max(max(p) for p in parts) + 1, pairs))

    for name, n, pairs in corpus:
        adj = np.zeros((n, n))
        for (u, v), w in pairs.items():
            adj[u, v] = adj[v, u] = w
        best = max(
            dense_modularity(
                adj,
                [next(i for i, block in enumerate(part) if v in block) for v in range(n)],
            )
            for part in set_partitions(list(range(n)))
        )
        for seed in (0, 1, 7):
            labels = louvain(Graph.from_pairs(n, pairs), seed=seed)
            achieved = dense_modularity(adj, labels)
            if abs(achieved - best) > 1e-12:
                failures.append(
                    f"{name} seed {seed}: Q={achieved:.6f} < optimum {best:.6f}"
                )
    report(11, "louvain matches exhaustive optimum on the small corpus", failures)
