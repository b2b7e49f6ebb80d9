"""Certified Riemann integration, mean value witnesses and counterexample
models in exact rational arithmetic."""

from .cantorpath import (CantorIndefinite, FatCantorSpec, build_stage, cantor_F_eval,
                         limit_measure, nonconstancy_report)
from .darboux import Partition, darboux_sums, global_bounds_check, integrate
from .errors import *  # noqa: F401,F403
from .exactnum import ExactRational, RatInterval, interval_arith, parse_rational
from .funcmodel import (AbsShift, AffineImage, FatCantorIndicator, Glued, Pathological,
                        PiecewisePoly, PiRat, Step, parse_function)
from .indefinite import (IndefiniteIntegral, dense_zero_derivative_harness, derivative_enclosure,
                         indefinite_eval, thomson_adversarial, thomson_sum)
from .mvt import (bounded_mean_inequality, constancy_check_partC, epsilon_witnesses,
                  exact_witness_continuous, inequality_witnesses, no_exact_witness_demo,
                  step_sublevel_measures)
from .oscillation import find_continuity_point, osc_interval, osc_point

__version__ = "0.1.0"
