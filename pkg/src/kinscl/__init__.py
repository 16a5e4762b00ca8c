"""Threshold-gated kinetic relaxation solvers for 1-D scalar conservation laws."""

from .errors import (ConfigError, InvariantViolation, MassMismatchError,
                     SignStructureError)
from .grid import GridSpec
from .flux import (FluxModel, burgers_flux, cubic_flux, flux_from_table,
                   linear_flux, load_flux_table)
from .kinetic import (KineticState, Moments, cell_sums, check_nondegeneracy,
                      collapse_threshold, deviation, deviation_profile,
                      equilibrium_profile, kinetic_entropy, moments,
                      ordered_sum, project_equilibrium, total_mass, u_profile)
from .transport import ShiftPlan, advect, shift_plan
from .schemes import (DiagnosticsLedger, SchemeConfig, StepReport,
                      collapse_substep, relax_substep, run, step_bgk,
                      step_classic, step_thresholded)
from .ot import (EntropyBudgets, FluxErrorField, MVRepresentation,
                 MeasureField, MonotoneMap, cdf, check_convexity_lemma,
                 entropy_budgets, flux_error_field, monotone_map,
                 mv_mass_profile, mv_representation, reconstruct_m)
from .oracles import (RiemannProblem, SelfSimilarLimit, limit_density,
                      limit_u, riemann_exact, stripe_initial_state)

__version__ = "0.1.0"
