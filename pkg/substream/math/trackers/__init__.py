"""
Streaming subspace trackers behind one interface
(`update(obs)`, `estimate()`, `reset(U0)`).
"""
from .base import SubspaceTracker
from .steps import StepSchedule, ScheduleKind
from .isvd import IncrementalSvd, MissingDataIsvd, BrandIsvd, PimcIsvd
from .oja import OjaTracker, KrasulinaTracker
from .grouse import GrouseTracker
from .past import PastTracker, PetrelsTracker
from .factory import TRACKERS, tracker_factory, parse_tracker_name
