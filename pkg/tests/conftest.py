import numpy as np
import pytest

from mosaicstream.core import Mosaic, MosaicPartition, TimeInterval


@pytest.fixture
def grid_partition() -> MosaicPartition:
    """Hand-checkable layout: 4 nodes over [0, 10), node 3 bare after t=5."""
    return MosaicPartition(
        mosaics=(
            Mosaic(0, frozenset({0, 1}), TimeInterval(0.0, 5.0)),
            Mosaic(1, frozenset({2, 3}), TimeInterval(0.0, 5.0)),
            Mosaic(2, frozenset({0, 1, 2}), TimeInterval(5.0, 10.0)),
        ),
        nodes=frozenset(range(4)),
        domain=TimeInterval(0.0, 10.0),
    )


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)
