"""Hausdorff contents, Frostman measures and Nevanlinna-characteristic bounds
for Stieltjes integrals over fractal subsets of an interval."""
from .bounds import (BoundReport, CaseInputs, evaluate_case, frostman_sharpness, lhs_integral, measure_factors,
                     rhs_main, rhs_theorem1, rhs_theorem2_swap, rhs_theorem4)
from .content import ContentQuery, ContentResult, brute_force_content, hausdorff_content, single_interval_content
from .errors import (CapabilityError, DegenerateSetError, DomainError, FractalNevanlinnaError, PreconditionError,
                     RangeError, SizeError)
from .frostman import FrostmanResult, frostman_measure, verify_frostman
from .gauge import Gauge, eval_gauge, inverse_gauge, normalization_constant, stretch_constant
from .increasing import (IncreasingFunction, Staircase, dini_integral, eval_m, interval_measure,
                         modulus_of_continuity, stabilization_diameter, stieltjes_integral)
from .intervals import IntervalUnion, cantor_prefractal, from_points, normalize, similarity_dimension
from .nevanlinna import (LogRatio, characteristic_T, circle_mean, circle_mean_positive, eval_U, lower_variation,
                         max_on_circle, pole_term)

__version__ = "0.1.0"
