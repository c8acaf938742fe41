"""Edge generation: from a mosaic partition to a link stream.

Every community (and every time-overlapping pair of communities) first gets a
static backbone graph whose pairs are sampled independently; every backbone
pair then emits temporal edges through a Poisson point process over its time
window: an event count drawn at rate |window| x lambda, then that many
timestamps placed uniformly.  A final pass optionally rewires each edge with
probability eta as structural noise.

Each community and pair owns an RNG substream keyed by (seed, kind, ids), so
contexts can be generated in any order or in parallel without changing the
output stream.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from mosaicstream.core import (
    GenerationError,
    LinkStream,
    Mosaic,
    MosaicPartition,
    ParameterError,
    TemporalEdge,
    TimeInterval,
)

RateIn = Union[float, Mapping[int, float]]
RateExt = Union[float, Mapping[tuple[int, int], float]]


@dataclass(frozen=True)
class EdgeGenParams:
    """Knobs for edge generation.

    ``alpha`` controls internal backbone density (1 = cliques), ``beta``
    scales cross-community density (0 = fully separable), ``lambda_in`` and
    ``lambda_ext`` are Poisson rates per unit time (scalars, or maps keyed by
    mosaic id / unordered id pair), ``eta`` is the rewiring probability.
    """

    alpha: float
    beta: float
    lambda_in: RateIn = 0.4
    lambda_ext: RateExt = 0.1
    eta: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ParameterError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ParameterError(f"beta must be in [0, 1], got {self.beta}")
        if not 0.0 <= self.eta <= 1.0:
            raise ParameterError(f"eta must be in [0, 1], got {self.eta}")
        if self.seed < 0:
            raise ParameterError(f"seed must be >= 0, got {self.seed}")
        if isinstance(self.lambda_in, Mapping):
            for key, rate in self.lambda_in.items():
                if rate < 0:
                    raise ParameterError(f"lambda_in[{key}] must be >= 0")
        elif self.lambda_in < 0:
            raise ParameterError(f"lambda_in must be >= 0, got {self.lambda_in}")
        if isinstance(self.lambda_ext, Mapping):
            for (i, j), rate in self.lambda_ext.items():
                if rate < 0:
                    raise ParameterError(f"lambda_ext[{(i, j)}] must be >= 0")
                mirror = self.lambda_ext.get((j, i), rate)
                if mirror != rate:
                    raise ParameterError(
                        f"lambda_ext asymmetric for pair ({i}, {j}): "
                        f"{rate} vs {mirror}"
                    )
        elif self.lambda_ext < 0:
            raise ParameterError(f"lambda_ext must be >= 0, got {self.lambda_ext}")

    def rate_in(self, mosaic_id: int) -> float:
        if isinstance(self.lambda_in, Mapping):
            try:
                return float(self.lambda_in[mosaic_id])
            except KeyError:
                raise ParameterError(f"no lambda_in entry for mosaic {mosaic_id}")
        return float(self.lambda_in)

    def rate_ext(self, id_a: int, id_b: int) -> float:
        if isinstance(self.lambda_ext, Mapping):
            for key in ((id_a, id_b), (id_b, id_a)):
                if key in self.lambda_ext:
                    return float(self.lambda_ext[key])
            raise ParameterError(f"no lambda_ext entry for pair ({id_a}, {id_b})")
        return float(self.lambda_ext)


@dataclass(frozen=True)
class BackboneEdge:
    """A potential edge: node pair plus the context and window that own it."""

    u: int
    v: int
    context: int | tuple[int, int]
    window: TimeInterval

    def __post_init__(self):
        if self.u == self.v:
            raise ParameterError(f"backbone edge endpoints must differ, got {self.u}")
        if self.u > self.v:
            u, v = self.u, self.v
            object.__setattr__(self, "u", v)
            object.__setattr__(self, "v", u)


def internal_probability(n: int, alpha: float) -> float:
    """Backbone probability (n-1)^(alpha-1) for an n-node community."""
    if n < 2:
        raise ParameterError(f"community size must be >= 2, got {n}")
    return float(n - 1) ** (alpha - 1.0)


def external_probability(n1: int, n2: int, alpha: float, beta: float) -> float:
    """Cross backbone probability beta*(n1+n2-1)^(alpha-1)."""
    if n1 < 1 or n2 < 1:
        raise ParameterError(f"community sizes must be >= 1, got {n1}, {n2}")
    return beta * float(n1 + n2 - 1) ** (alpha - 1.0)


def _sample_pairs(
    side_a: frozenset[int], side_b: frozenset[int], p: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Independently keep each candidate pair with probability p.

    This is always the first draw from a context's stream, so backbones can
    be reproduced without generating timestamps.
    """
    if side_a == side_b:
        nodes = np.fromiter(sorted(side_a), dtype=np.int64, count=len(side_a))
        iu, iv = np.triu_indices(len(nodes), k=1)
        us, vs = nodes[iu], nodes[iv]
    else:
        a = np.fromiter(sorted(side_a), dtype=np.int64, count=len(side_a))
        b = np.fromiter(sorted(side_b), dtype=np.int64, count=len(side_b))
        us = np.repeat(a, len(b))
        vs = np.tile(b, len(a))
    if us.size == 0:
        return us, vs
    keep = rng.random(us.size) < p
    us, vs = us[keep], vs[keep]
    return np.minimum(us, vs), np.maximum(us, vs)


def backbone(
    side_a: frozenset[int],
    side_b: frozenset[int],
    p: float,
    rng: np.random.Generator,
    context: int | tuple[int, int] = 0,
    window: TimeInterval | None = None,
) -> list[BackboneEdge]:
    """Sample a backbone graph over one community or one community pair."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"probability must be in [0, 1], got {p}")
    if side_a != side_b and side_a & side_b:
        raise ParameterError("external backbone sides must be disjoint")
    if window is None:
        window = TimeInterval(0.0, 1.0)
    us, vs = _sample_pairs(side_a, side_b, p, rng)
    return [
        BackboneEdge(int(u), int(v), context, window) for u, v in zip(us, vs)
    ]


def poisson_timestamps(
    window: TimeInterval, rate: float, rng: np.random.Generator
) -> np.ndarray:
    """Event times of one backbone edge: N ~ Poisson(|window|*rate) uniforms."""
    if rate < 0:
        raise ParameterError(f"rate must be >= 0, got {rate}")
    n = int(rng.poisson(window.length * rate))
    times = rng.uniform(window.start, window.end, n)
    times.sort()
    return times


@dataclass(frozen=True)
class _Context:
    """One independent generation unit: a mosaic or an overlapping pair."""

    key: tuple[int, ...]  # RNG substream entropy
    side_a: frozenset[int]
    side_b: frozenset[int]
    window: TimeInterval
    prob: float
    rate: float
    label: int | tuple[int, int]


_INTERNAL, _EXTERNAL, _REWIRE = 0, 1, 2


def _contexts(p: MosaicPartition, params: EdgeGenParams) -> list[_Context]:
    out = []
    for c in p.mosaics:
        if c.size < 2:
            continue
        out.append(
            _Context(
                key=(params.seed, _INTERNAL, c.id, c.id),
                side_a=c.members,
                side_b=c.members,
                window=c.interval,
                prob=internal_probability(c.size, params.alpha),
                rate=params.rate_in(c.id),
                label=c.id,
            )
        )
    mosaics = p.mosaics
    for i in range(len(mosaics)):
        for j in range(i + 1, len(mosaics)):
            ci, cj = mosaics[i], mosaics[j]
            overlap = ci.interval.intersect(cj.interval)
            if overlap is None:
                continue
            lo, hi = min(ci.id, cj.id), max(ci.id, cj.id)
            out.append(
                _Context(
                    key=(params.seed, _EXTERNAL, lo, hi),
                    side_a=ci.members,
                    side_b=cj.members,
                    window=overlap,
                    prob=external_probability(
                        ci.size, cj.size, params.alpha, params.beta
                    ),
                    rate=params.rate_ext(ci.id, cj.id),
                    label=(lo, hi),
                )
            )
    return out


def build_backbones(p: MosaicPartition, params: EdgeGenParams) -> list[BackboneEdge]:
    """All backbone edges of all contexts, exactly as generate_edges sees them."""
    out = []
    for ctx in _contexts(p, params):
        rng = np.random.default_rng(np.random.SeedSequence(ctx.key))
        out.extend(
            backbone(ctx.side_a, ctx.side_b, ctx.prob, rng, ctx.label, ctx.window)
        )
    return out


def _context_edges(ctx: _Context) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rng = np.random.default_rng(np.random.SeedSequence(ctx.key))
    us, vs = _sample_pairs(ctx.side_a, ctx.side_b, ctx.prob, rng)
    empty = np.empty(0, dtype=np.float64)
    if us.size == 0:
        return us, vs, empty
    counts = rng.poisson(ctx.window.length * ctx.rate, size=us.size)
    total = int(counts.sum())
    if total == 0:
        return us[:0], vs[:0], empty
    times = rng.uniform(ctx.window.start, ctx.window.end, total)
    return np.repeat(us, counts), np.repeat(vs, counts), times


def generate_edges(
    p: MosaicPartition, params: EdgeGenParams, threads: int = 1
) -> LinkStream:
    """Generate internal and external temporal edges for a valid partition.

    The empty community hosts nothing.  Output is sorted by (t, u, v) and is
    bit-identical for any thread count: contexts are merged in a fixed order
    and each draws from its own substream.
    """
    contexts = _contexts(p, params)
    if threads > 1 and len(contexts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_context_edges, contexts))
    else:
        parts = [_context_edges(ctx) for ctx in contexts]
    if parts:
        us = np.concatenate([q[0] for q in parts])
        vs = np.concatenate([q[1] for q in parts])
        ts = np.concatenate([q[2] for q in parts])
    else:
        us = vs = np.empty(0, dtype=np.int64)
        ts = np.empty(0, dtype=np.float64)
    order = np.lexsort((vs, us, ts))
    edges = tuple(
        TemporalEdge(int(us[i]), int(vs[i]), float(ts[i])) for i in order
    )
    return LinkStream(p.nodes, p.domain, edges)


def expected_edge_count(p: MosaicPartition, params: EdgeGenParams) -> float:
    """Analytic mean of |E|: sum over contexts of pairs x prob x |window| x rate."""
    total = 0.0
    for ctx in _contexts(p, params):
        if ctx.side_a == ctx.side_b:
            n = len(ctx.side_a)
            pairs = n * (n - 1) // 2
        else:
            pairs = len(ctx.side_a) * len(ctx.side_b)
        total += pairs * ctx.prob * ctx.window.length * ctx.rate
    return total


def rewire(
    ls: LinkStream, p: MosaicPartition, eta: float, rng: np.random.Generator
) -> LinkStream:
    """Independently rewire each edge with probability eta.

    A rewired edge is redrawn wholesale: a uniformly random eligible ordered
    community pair (c, c'), c = c' allowed when the community has >= 2 nodes,
    then endpoints from their member sets and a uniform time in the window
    overlap.  Edge count is preserved and the empty community stays untouched.
    """
    if not 0.0 <= eta <= 1.0:
        raise ParameterError(f"eta must be in [0, 1], got {eta}")
    if eta == 0.0 or not ls.edges:
        return ls
    eligible: list[tuple[Mosaic, Mosaic, TimeInterval]] = []
    for ci in p.mosaics:
        for cj in p.mosaics:
            if ci.id == cj.id:
                if ci.size >= 2:
                    eligible.append((ci, cj, ci.interval))
            else:
                overlap = ci.interval.intersect(cj.interval)
                if overlap is not None:
                    eligible.append((ci, cj, overlap))
    if not eligible:
        raise GenerationError("no eligible community pair to rewire into")
    members = {c.id: sorted(c.members) for c in p.mosaics}
    selected = rng.random(len(ls.edges)) < eta
    out = []
    for e, hit in zip(ls.edges, selected):
        if not hit:
            out.append(e)
            continue
        ca, cb, window = eligible[int(rng.integers(0, len(eligible)))]
        side_a = members[ca.id]
        iu = int(rng.integers(0, len(side_a)))
        u = side_a[iu]
        if ca.id == cb.id:
            jv = int(rng.integers(0, len(side_a) - 1))
            if jv >= iu:
                jv += 1
            v = side_a[jv]
        else:
            side_b = members[cb.id]
            v = side_b[int(rng.integers(0, len(side_b)))]
        t = float(rng.uniform(window.start, window.end))
        out.append(TemporalEdge(u, v, t))
    return LinkStream(ls.nodes, ls.domain, tuple(out))


def generate_link_stream(
    p: MosaicPartition, params: EdgeGenParams, threads: int = 1
) -> LinkStream:
    """Full pipeline: generate internal + external edges, then rewire."""
    ls = generate_edges(p, params, threads)
    if params.eta > 0.0:
        rng = np.random.default_rng(np.random.SeedSequence((params.seed, _REWIRE)))
        ls = rewire(ls, p, params.eta, rng)
    return ls
