"""
High-dimensional theory: limiting ODEs, their fixed points and
the PETRELS phase threshold, and Monte Carlo checks against them.
"""
from .odes import (
    OdeParams, OdeTrajectory,
    integrate, integrate_oja_grouse_ode, integrate_petrels_ode,
    oja_grouse_coefficients, oja_grouse_closed_form, oja_grouse_fixed_point,
    petrels_phase_threshold, petrels_ode_steady_state, cosine_recursion,
)
from .scaling import (
    TimeUnits, convert_time, snapshots_for, step_from_tau, tau_from_step,
    discount_from_mu, mu_from_discount, delta_from_prime, petrels_g,
)
from .montecarlo import (
    McOdeRow, PhaseRow, ImprovementReport, rank_one_start,
    mc_vs_ode_report, petrels_steady_state, phase_grid, grouse_expected_improvement,
)
