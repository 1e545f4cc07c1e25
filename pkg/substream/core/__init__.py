from ._version import version as __version__
from .errors import *
from .kinds import (
    TrackerName, ScenarioKind, LoadingDraw, OdeModel,
    WELL_CONDITIONED_LOADING, ILL_CONDITIONED_LOADING,
)
from .subspace import (
    Subspace, PartialObservation, SvdFactor,
    orthonormalize, orthonormality_error, masked_ls_weights, masked_residual,
    cosine_similarity, determinant_similarity, projection_error, batch_pca,
)
from .dpr1 import Dpr1Problem, dpr1_eigen
from .datagen import (
    SpikedModelConfig, ScenarioConfig, as_generator, make_ground_truth, next_snapshot,
    sample_skew_symmetric, rotation_operator, rotate_subspace, scenario_stream,
)
from .params import BenchParameters, read_param_file
from .workers import worker_cap, pool_map
