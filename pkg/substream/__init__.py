"""
Substream tracks a low-dimensional subspace from a stream of
noisy, partially observed vectors. Trackers live in
`substream.math.trackers`, the high-dimensional ODE limits in
`substream.math.theory`, and the benchmark harness and command
line in `substream.bench`.
"""

from .core import (
    __version__, Subspace, PartialObservation, SpikedModelConfig, ScenarioConfig,
    scenario_stream, orthonormalize, projection_error, determinant_similarity, cosine_similarity,
)
from .math.trackers import tracker_factory
