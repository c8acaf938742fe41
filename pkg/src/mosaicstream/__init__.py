"""Modular link stream generation and dynamic community detection toolkit."""

__version__ = "0.1.0"

from mosaicstream.core import (
    EMPTY,
    DomainError,
    GenerationError,
    LinkStream,
    MembershipIndex,
    Mosaic,
    MosaicPartition,
    ParameterError,
    PartitionError,
    TemporalEdge,
    TimeInterval,
    membership,
    time_breakpoints,
    validate_partition,
)
from mosaicstream.scenario import (
    ScenarioParams,
    empty_mosaics,
    experimental_scenario,
    generate_scenario,
    random_scenario,
    snapshot_scenario,
    split_mosaic,
)
from mosaicstream.edgegen import (
    BackboneEdge,
    EdgeGenParams,
    backbone,
    build_backbones,
    expected_edge_count,
    external_probability,
    generate_edges,
    generate_link_stream,
    internal_probability,
    poisson_timestamps,
    rewire,
)
from mosaicstream.snapshot import (
    DynamicPartition,
    SnapshotSequence,
    aggregate,
    project_ground_truth,
)
from mosaicstream.detect import (
    METHODS,
    DetectorConfig,
    Graph,
    detect,
    jaccard,
    louvain,
    modularity,
)
from mosaicstream.metrics import (
    ScoreReport,
    dynamic_mosaic_nmi,
    mosaic_nmi,
    nmi,
    score,
    sm_l,
    sm_n,
    sm_p,
)

__all__ = [
    "__version__",
    "EMPTY",
    "DomainError",
    "GenerationError",
    "LinkStream",
    "MembershipIndex",
    "Mosaic",
    "MosaicPartition",
    "ParameterError",
    "PartitionError",
    "TemporalEdge",
    "TimeInterval",
    "membership",
    "time_breakpoints",
    "validate_partition",
    "ScenarioParams",
    "empty_mosaics",
    "experimental_scenario",
    "generate_scenario",
    "random_scenario",
    "snapshot_scenario",
    "split_mosaic",
    "BackboneEdge",
    "EdgeGenParams",
    "backbone",
    "build_backbones",
    "expected_edge_count",
    "external_probability",
    "generate_edges",
    "generate_link_stream",
    "internal_probability",
    "poisson_timestamps",
    "rewire",
    "DynamicPartition",
    "SnapshotSequence",
    "aggregate",
    "project_ground_truth",
    "METHODS",
    "DetectorConfig",
    "Graph",
    "detect",
    "jaccard",
    "louvain",
    "modularity",
    "ScoreReport",
    "dynamic_mosaic_nmi",
    "mosaic_nmi",
    "nmi",
    "score",
    "sm_l",
    "sm_n",
    "sm_p",
]
