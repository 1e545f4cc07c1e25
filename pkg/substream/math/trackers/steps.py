"""
Step-size schedules for the gradient-type trackers (Oja,
Krasulina, GROUSE with a fixed step).
"""
from enum import Enum

from ...core.errors import InvalidParams

class ScheduleKind(Enum):
    CONSTANT = "constant"
    INVERSE = "inverse"

class StepSchedule():
    """
    eta_n = step          (CONSTANT)
    eta_n = step / n      (INVERSE)

    n counts updates starting at 1. The high-dimensional theory
    uses a constant step tau / d.
    """

    def __init__(self, step : float, kind = ScheduleKind.CONSTANT):
        try:
            kind = ScheduleKind(kind)
        except ValueError:
            raise InvalidParams(
                'schedule',
                f"{kind!r} is not one of {[s.value for s in ScheduleKind]}"
            )
        step = float(step)
        if not step > 0:
            raise InvalidParams('step', f"must be positive, got {step}")
        self.step = step
        self.kind = kind

    def __call__(self, n : int)->float:
        if self.kind is ScheduleKind.INVERSE:
            return self.step / max(int(n), 1)
        return self.step

    def __repr__(self)->str:
        return f"StepSchedule({self.step}, {self.kind.value})"
