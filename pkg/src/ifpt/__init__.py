"""Boundary reconstruction for Wiener first-passage times.

Given the law of the first-passage time of a standard Wiener process
through an unknown time-varying boundary, this package recovers the
boundary by two independent routes: a piecewise-linear Monte Carlo
construction, and a knot-by-knot solve of the discretized nonlinear
Volterra equation.  Direct first-passage solvers (weighted-path Monte
Carlo and a nonsingular second-kind integral equation) cross-validate
both.
"""

from .bench import (
    ErrorReport,
    OrderEstimate,
    ShiryaevReport,
    convergence_order,
    mean_square_deviation,
    section7_suite,
    shiryaev_compare,
)
from .boundaries import (
    DanielsBoundary,
    LinearBoundary,
    OscillatingBoundary,
    PeskirGBoundary,
    PiecewiseLinearBoundary,
)
from .bridge import (
    McEstimate,
    WeightedPaths,
    bridge_weight,
    estimate_lhs,
    extend_paths,
    make_rng,
    segment_cross_mass_H,
)
from .densities import (
    DanielsDensity,
    ExponentialDensity,
    FptDensity,
    LinearBoundaryDensity,
    SmallTimeClass,
    TabulatedDensity,
    c_from_kappa,
    classify_small_time,
    flux_small_time_solve,
    fpt_cdf_linear,
    fpt_density_daniels,
    fpt_density_linear,
    interval_mass,
    peskir_limit,
)
from .direct import DirectResult, direct_fpt_mc, direct_fpt_vie
from .errors import (
    ConfigError,
    DegenerateSample,
    DomainError,
    IfptError,
    InfeasibleMass,
    MassOverflow,
    MaxIterations,
    NoSignChange,
    NoSolution,
    NumericalFailure,
    QuadratureFailure,
)
from .numerics import (
    Bracket,
    find_root_midpoint,
    std_normal_cdf,
    std_normal_pdf,
    survival,
    survival_inv,
)
from .plmc import PlmcConfig, PlmcResult, plmc_solve, plmc_step1, plmc_step_n
from .vie import VieConfig, VieResult, vie_first_knot, vie_flux_correct, vie_solve

__version__ = "0.1.0"
