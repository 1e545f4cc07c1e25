"""
Enum catalogs for the names that show up on the command line
and in CSV files, so a typo fails loudly instead of silently
selecting a default.
"""

from enum import Enum

class TrackerName(Enum):
    ISVD        =   "isvd"
    MD_ISVD     =   "md-isvd"
    BRAND       =   "brand"
    PIMC        =   "pimc"
    OJA         =   "oja"
    KRASULINA   =   "krasulina"
    GROUSE      =   "grouse"
    PAST        =   "past"
    PETRELS     =   "petrels"

class ScenarioKind(Enum):
    STATIC          =   "static"
    ABRUPT_CHANGE   =   "abrupt"
    ROTATING        =   "rotating"

class LoadingDraw(Enum):
    """
    Where the signal loading vector c comes from.

    GIVEN uses SpikedModelConfig.loading as is. UNIFORM_PER_TRIAL
    draws c ~ U[0,1]^k from each trial's generator, UNIFORM_SHARED
    draws it once from the scenario seed so every trial shares it.
    """
    GIVEN               =   "given"
    UNIFORM_PER_TRIAL   =   "uniform-per-trial"
    UNIFORM_SHARED      =   "uniform-shared"

class OdeModel(Enum):
    OJA_GROUSE  =   "oja-grouse"
    PETRELS     =   "petrels"

# Loading presets of the simulation setup
WELL_CONDITIONED_LOADING = (1.0,)*10
ILL_CONDITIONED_LOADING = (1.0, 1.0, 1.0, 1.0, 1.0, 0.3, 0.3, 0.3, 0.1, 0.1)
