"""
Exceptions raised across substream.

Everything a caller can reasonably trip over is a ValueError
subclass, so `except ValueError` still catches bad inputs. The
only RuntimeError is a diverging ODE integration.
"""

__all__ = [
    'SubstreamError',
    'RankDeficient',
    'DimensionMismatch',
    'ZeroVector',
    'DegenerateGap',
    'NotOrthonormal',
    'NotSkewSymmetric',
    'IncompleteObservation',
    'UnknownTracker',
    'InvalidParams',
    'EmptyInput',
    'ZeroNoise',
    'ConfigError',
    'IntegrationDiverged',
]

class SubstreamError(Exception):
    """ Mixin marking every error this package raises on purpose """

class RankDeficient(SubstreamError, ValueError):
    """ A matrix that must have full column rank does not """

class DimensionMismatch(SubstreamError, ValueError):
    """ Two subspaces (or a subspace and a vector) disagree in shape """

class ZeroVector(SubstreamError, ValueError):
    """ A similarity was requested for a zero vector """

class DegenerateGap(SubstreamError, ValueError):
    """ sigma_k == sigma_{k+1}, so the top-k subspace is not unique """

class NotOrthonormal(SubstreamError, ValueError):
    """ A basis handed to Subspace fails the orthonormality check """

class NotSkewSymmetric(SubstreamError, ValueError):
    """ A rotation generator B does not satisfy B = -B^T """

class IncompleteObservation(SubstreamError, ValueError):
    """ A full-data tracker was given a snapshot with missing entries """

class UnknownTracker(SubstreamError, ValueError):
    """ tracker_factory was asked for a name it does not know """

class InvalidParams(SubstreamError, ValueError):
    """ A tracker parameter is unknown or out of range. `field` names it. """
    def __init__(self, field : str, message : str):
        self.field = field
        self.message = message
        super().__init__(f"Invalid tracker parameter '{field}': {message}")

    def __reduce__(self):
        return (self.__class__, (self.field, self.message))

class EmptyInput(SubstreamError, ValueError):
    """ A reduction was asked to summarize nothing """

class ZeroNoise(SubstreamError, ValueError):
    """ The PETRELS phase threshold diverges at sigma = 0 """

class ConfigError(SubstreamError, ValueError):
    """ A benchmark/ODE configuration value is invalid. `field` names it. """
    def __init__(self, field : str, message : str):
        self.field = field
        self.message = message
        super().__init__(f"Invalid value for '{field}': {message}")

    def __reduce__(self):
        return (self.__class__, (self.field, self.message))

class IntegrationDiverged(SubstreamError, RuntimeError):
    """ |s| left [-1, 1] by more than the integrator tolerance """
