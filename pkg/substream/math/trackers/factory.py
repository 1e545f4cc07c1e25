import logging
from typing import Union

from ...core.kinds import TrackerName
from ...core.errors import UnknownTracker, DimensionMismatch
from ...core.subspace import Subspace
from .base import SubspaceTracker
from .isvd import IncrementalSvd, MissingDataIsvd, BrandIsvd, PimcIsvd
from .oja import OjaTracker, KrasulinaTracker
from .grouse import GrouseTracker
from .past import PastTracker, PetrelsTracker

logger = logging.getLogger(__name__)

__all__ = [
    'TRACKERS',
    'tracker_factory',
    'parse_tracker_name',
]

TRACKERS : dict[TrackerName, type[SubspaceTracker]] = {
    TrackerName.ISVD : IncrementalSvd,
    TrackerName.MD_ISVD : MissingDataIsvd,
    TrackerName.BRAND : BrandIsvd,
    TrackerName.PIMC : PimcIsvd,
    TrackerName.OJA : OjaTracker,
    TrackerName.KRASULINA : KrasulinaTracker,
    TrackerName.GROUSE : GrouseTracker,
    TrackerName.PAST : PastTracker,
    TrackerName.PETRELS : PetrelsTracker,
}

def parse_tracker_name(name : Union[str, TrackerName])->TrackerName:
    if isinstance(name, TrackerName):
        return name
    try:
        return TrackerName(str(name).strip().lower())
    except ValueError:
        raise UnknownTracker(
            f"Unknown tracker {name!r}; choose from {[t.value for t in TrackerName]}"
        )

def tracker_factory(
        name : Union[str, TrackerName],
        d : int,
        k : int,
        params : dict = None,
        U0 : Subspace = None,
    )->SubspaceTracker:
    """
    Builds a configured tracker starting from U0.

    Arguments
    ---------

    name : str or TrackerName

        One of isvd, md-isvd, brand, pimc, oja, krasulina, grouse,
        past, petrels.

    d, k : int

        Must match U0.

    params : dict

        Tracker parameters (see each tracker's `class_params`).
        Missing entries take the tracker's defaults.

    U0 : Subspace

        The shared initial estimate.

    Returns
    -------

    tracker : SubspaceTracker

    Raises UnknownTracker for a bad name and InvalidParams naming
    the offending field for bad parameters.
    """
    name = parse_tracker_name(name)
    if U0 is None:
        raise ValueError("tracker_factory needs an initial subspace U0.")
    if not isinstance(U0, Subspace):
        U0 = Subspace(U0)
    if (U0.d, U0.k) != (d, k):
        raise DimensionMismatch(
            f"U0 is {U0.d} x {U0.k} but the tracker was asked for d={d}, k={k}"
        )
    tracker = TRACKERS[name](U0, **(params or {}))
    logger.debug("Built %r", tracker)
    return tracker
