"""Shape-constrained confidence intervals for sieve regression functionals.

Intervals are projections of a polyhedral confidence region for the sieve
coefficients, so each endpoint is the value of a linear program. The
``rkd`` module specializes the machinery to regression kink designs and
``sim`` runs the matching Monte Carlo coverage study.
"""

from .bands import (
    ConfidenceBand,
    ConfidenceInterval,
    Functional,
    ShapeConstraints,
    band_general,
    ci_projected,
    interval_over_polyhedron,
    rkd_shape_constraints,
    sampling_constraints_general,
    sampling_constraints_projected,
)
from .bootstrap import BootstrapConfig, CriticalValue, cv_general, cv_projected
from .errors import (
    ConvergenceError,
    IterationLimit,
    KinkError,
    NearSingular,
    ShapeCIError,
    StepError,
    WindowError,
)
from .lp import LpProblem, LpSolution, solve
from .regression import Dataset, SieveFit, fit, project_variance
from .rkd import KinkSchedule, RkdConfig, RkdReport, a0_row, kink_denominator, run_rkd
from .sieve import SieveBasis
from .sim import SimDesign, SimResult, dgp_sample, run_study

__version__ = "0.1.0"
