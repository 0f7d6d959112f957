"""Calm local selections of regular set-valued inverses.

Modulus estimation, convex geometry, the constructive selection iteration,
smooth right inverses, constrained endpoint steering, and a CLI over JSON
problem files.
"""

from .errors import (ContractError, InfeasibilitySuspectedError,
                     LocalityError, NumericBreakdownError, ProblemFileError,
                     RegselError, RegularityError, ShapeError,
                     UncontrollableError)
from .linalg import (SvdFactorization, is_surjective, least_norm_solve,
                     operator_norm, pinv_apply, pinv_matrix,
                     sigma_min_surjective, svd)
from .convex import (AffineSet, Ball, Box, ConvexSet, Halfspaces,
                     Intersection, TruncatedSet, direction_grid, dykstra,
                     interior_contains, set_from_json, truncate)
from .moduli import (CheckReport, LscProbeReport, ModulusEstimate,
                     SampledMapping, clm_estimate, counterexample_mapping,
                     csv_report, lg_bound_check, lip_estimate, lsc_probe,
                     reg_linear, sampled_reg, truncated_counterexample,
                     verify_aubin, verify_metric_regularity)
from .selection import (GeneralizedEquation, IterationCertificate,
                        IterationConfig, SweepResult, SweepRow, compute_tau,
                        default_config, initial_selection, iterate_step,
                        solve, solve_implicit, sweep)
from .smooth import (SmoothProblem, augmented_jacobian, calm_bound_linear,
                     config_for, derivative_check, remainder_lip_profile,
                     smooth_selection, split)
from .control import (ControlProblem, ControlSweep, DiscretizedSystem,
                      SteeringResult, SteeringSetup, calm_sweep,
                      endpoint_order_ratios, kalman_rank, linearize,
                      reachable_interior, simulate_trapezoidal, steer,
                      steering_setup)
from .problems import (DYNAMICS_FIXTURES, PolynomialMap, ProblemFile,
                       load_problem, parse_problem, polynomial_from_json)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
