"""frontlab: desk-scale stability laboratory for diffusive-dispersive fronts.

Modules
  profile   -- traveling-front profiles of the KdV-Burgers equation
  bargmann  -- Bargmann's integral, monotonization, ideal-shock distance
  spectral  -- Schrodinger bound-state counts and rank-one perturbations
  evans     -- rescaled Evans function and the critical dispersion
  dynamics  -- modulated-front PDE evolution with stability diagnostics
  cli       -- command-line frontend over all of the above
"""

from . import bargmann, dynamics, errors, evans, profile, spectral
from .bargmann import (BargmannReport, analytic_bound_minus, analytic_bound_plus,
                       analytic_tau_bound, bargmann_report, find_tau_crossing,
                       l1_distance, monotonize, negative_part, shock_offset, tau)
from .dynamics import (MultiplierSpec, SimState, SimTrace, gaussian_bump,
                       make_state, modulation_rhs, simulate, step,
                       sup_norm_diagnostic)
from .evans import (EvansCurve, count_negative_roots, evans_curve,
                    find_nu_critical, shoot_evans)
from .profile import FrontProfile, front_residual, reflect_front, solve_front
from .sampled import SampledFunction
from .spectral import (SchrodingerOperator, SpectrumReport, build_operator,
                       count_negative_eigenvalues, eigenvalue_vs_gamma,
                       herglotz_R, rank_one_min_eigenvalue,
                       rank_one_negative_count)

__version__ = "0.1.0"

__all__ = [
    "BargmannReport", "EvansCurve", "FrontProfile", "MultiplierSpec",
    "SampledFunction", "SchrodingerOperator", "SimState", "SimTrace",
    "SpectrumReport", "analytic_bound_minus", "analytic_bound_plus",
    "analytic_tau_bound", "bargmann", "bargmann_report", "build_operator",
    "count_negative_eigenvalues", "count_negative_roots", "dynamics",
    "eigenvalue_vs_gamma", "errors", "evans", "evans_curve",
    "find_nu_critical", "find_tau_crossing", "front_residual",
    "gaussian_bump", "herglotz_R", "l1_distance", "make_state",
    "modulation_rhs", "monotonize", "negative_part", "profile",
    "rank_one_min_eigenvalue", "rank_one_negative_count", "reflect_front",
    "shock_offset", "shoot_evans", "simulate", "solve_front", "spectral",
    "step", "sup_norm_diagnostic", "tau",
]
