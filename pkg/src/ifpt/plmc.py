"""Inverse solver 1: piecewise-linear boundary reconstruction by Monte Carlo.

Knot by knot, the solver picks the next segment slope so that the
estimated crossing mass of the chord over the next interval matches the
target density's mass there.  The estimator reuses one fixed path
ensemble for every slope trial within a step (common random numbers),
which makes the estimated mass a deterministic, strictly decreasing
function of the slope, so plain bisection finds the unique root.

Targets with f(0+) = kappa > 0 cannot start from a positive level; the
first interval is instead bridged with the small-time square-root
boundary matching kappa, and crossings inside that first interval are
deliberately not weighted (they are not resolvable there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundaries import PeskirGBoundary, PiecewiseLinearBoundary
from .bridge import (
    ESS_FLOOR,
    WeightedPaths,
    extend_paths,
    make_rng,
    segment_cross_mass_H,
)
from .densities import FptDensity, c_from_kappa
from .errors import (
    ConfigError,
    DegenerateSample,
    DomainError,
    InfeasibleMass,
    NoSignChange,
)
from .numerics import survival_inv

MASS_EXHAUSTION = 1e-9
MAX_BRACKET_DOUBLINGS = 60


@dataclass(frozen=True)
class PlmcConfig:
    h: float
    n_steps: int
    mc_samples: int = 10_000
    seed: int = 0
    confidence: float = 0.95
    root_tol: float = 1e-9
    b0: float | None = None
    startup: str = "auto"  # auto | standard | peskir_g
    compute_ci: bool = True

    def __post_init__(self):
        if self.h <= 0:
            raise ConfigError(f"h must be positive, got {self.h}")
        if self.n_steps < 0:
            raise ConfigError(f"n_steps must be >= 0, got {self.n_steps}")
        if self.mc_samples < 1000:
            raise ConfigError(f"mc_samples must be >= 10^3, got {self.mc_samples}")
        if self.root_tol <= 0:
            raise ConfigError(f"root_tol must be positive, got {self.root_tol}")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigError(f"confidence must be in (0,1), got {self.confidence}")
        if self.startup not in ("auto", "standard", "peskir_g"):
            raise ConfigError(f"unknown startup {self.startup!r}")
        if self.startup == "standard" and self.b0 is None:
            raise ConfigError("standard startup requires b0 (known or guessed)")


@dataclass
class PlmcResult:
    """Recovered knots with per-step diagnostics.

    ``times``/``levels`` include the starting knot at t = 0.  ``ci`` rows
    bound the slope at the configured confidence; rows are degenerate for
    steps solved without Monte Carlo noise (step 1, and the square-root
    startup interval whose slope is prescribed, not solved).
    """

    times: np.ndarray
    levels: np.ndarray
    slopes: np.ndarray
    ci: np.ndarray
    stderr_per_step: np.ndarray
    ess_per_step: np.ndarray
    target_masses: np.ndarray
    ci_clipped: np.ndarray
    startup: str
    truncated: bool = False

    @property
    def boundary(self) -> PiecewiseLinearBoundary | None:
        if self.times.size < 2:
            return None
        return PiecewiseLinearBoundary(list(zip(self.times, self.levels)))


def plmc_step1(k1: float, alpha1: float, t1: float, root_tol: float = 1e-9) -> float:
    """Slope of the first segment: solve H(beta; origin, alpha1, t1) = k1.

    The crossing mass of a single linear segment from the origin has the
    closed form used everywhere else (no quadrature, no sampling), so
    this is a deterministic scalar root.
    """
    if alpha1 <= 0:
        raise DomainError(f"first knot level must be positive, got {alpha1}")
    if k1 >= 1.0:
        raise InfeasibleMass(f"first-interval mass {k1} >= 1")
    if k1 <= 0.0:
        raise NoSignChange(f"first-interval mass {k1} not in (0, 1)")
    est = lambda beta: segment_cross_mass_H(beta, 0.0, alpha1, t1)
    return _bisect_decreasing(est, k1, 0.0, t1, root_tol)


def plmc_step_n(
    paths: WeightedPaths,
    c_n: float,
    beta_n: float,
    k_next: float,
    h: float,
    root_tol: float = 1e-9,
    confidence: float | None = 0.95,
):
    """Slope for the next interval given the ensemble conditioned through
    knot n; returns (beta, (ci_lo, ci_hi), stderr, ess, clipped).

    The confidence interval inverts the same estimator at target +/- z *
    stderr; when an endpoint target leaves the attainable range the
    interval is clipped to the searched bracket and flagged.
    """
    ess = paths.ess()
    if ess < ESS_FLOOR:
        raise DegenerateSample(f"effective sample size {ess:.2f} below {ESS_FLOOR}")
    m = paths.n_paths
    alive = paths.alive
    w_alive = paths.weights[alive]
    x_alive = paths.positions[alive]
    max_mass = w_alive.sum() / m  # estimator limit as beta -> -inf
    if k_next >= max_mass:
        raise InfeasibleMass(
            f"target mass {k_next} exceeds attainable maximum {max_mass:.6g}"
        )
    if k_next <= 0.0:
        raise DomainError(f"target mass must be positive, got {k_next}")

    def est(beta: float) -> float:
        return float(np.sum(w_alive * segment_cross_mass_H(beta, x_alive, c_n, h))) / m

    beta = _bisect_decreasing(est, k_next, beta_n, h, root_tol)

    # stderr of the estimator at the root, zeros of absorbed paths included
    vals = w_alive * segment_cross_mass_H(beta, x_alive, c_n, h)
    s1 = float(vals.sum())
    s2 = float(np.square(vals).sum())
    var = max(s2 - s1 * s1 / m, 0.0) / (m - 1)
    stderr = math.sqrt(var / m)

    if confidence is None:
        return beta, (beta, beta), stderr, ess, False

    z = survival_inv((1.0 - confidence) / 2.0)
    delta = z * stderr
    clipped = False
    try:
        hi_target = k_next + delta
        if hi_target >= max_mass:
            raise InfeasibleMass("upper mass target unattainable")
        ci_lo = _bisect_decreasing(est, hi_target, beta_n, h, root_tol)
    except (InfeasibleMass, NoSignChange):
        ci_lo, clipped = -math.inf, True
    try:
        lo_target = k_next - delta
        if lo_target <= 0.0:
            raise InfeasibleMass("lower mass target unattainable")
        ci_hi = _bisect_decreasing(est, lo_target, beta_n, h, root_tol)
    except (InfeasibleMass, NoSignChange):
        ci_hi, clipped = math.inf, True
    return beta, (ci_lo, ci_hi), stderr, ess, clipped


def _bracket_start(beta_prev: float, h: float) -> float:
    return max(5.0, 5.0 / math.sqrt(h)) * (1.0 + abs(beta_prev))


def _bisect_decreasing(est, target: float, beta_prev: float, h: float, root_tol: float) -> float:
    """Bisection for est(beta) = target with est strictly decreasing.

    Symmetric start bracket scaled by the previous slope, doubled until
    the target is enclosed.
    """
    b = _bracket_start(beta_prev, h)
    lo, hi = -b, b
    for _ in range(MAX_BRACKET_DOUBLINGS):
        if est(lo) > target > est(hi):
            break
        b *= 2.0
        lo, hi = -b, b
    else:
        raise NoSignChange(f"no slope bracket encloses target mass {target}")
    flo = est(lo) - target
    while hi - lo > root_tol:
        mid = 0.5 * (lo + hi)
        fmid = est(mid) - target
        if flo * fmid <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def plmc_solve(density: FptDensity, cfg: PlmcConfig) -> PlmcResult:
    """Reconstruct the boundary of ``density`` on the grid t_i = i h.

    Standard startup anchors the first knot at b0; the positive-f(0+)
    startup anchors it on the square-root boundary matched to kappa.
    Steps stop early (``truncated``) once the cumulative target mass is
    within 1e-9 of the whole distribution: the remaining equations would
    be infeasible.
    """
    startup = cfg.startup
    if startup == "auto":
        klass = density.small_time_class()
        if klass.kind == "finite":
            startup = "peskir_g"
        elif klass.kind == "zero":
            if cfg.b0 is None:
                raise ConfigError("f(0+) = 0 target requires b0 (known or guessed)")
            startup = "standard"
        else:
            raise ConfigError("f(0+) = +inf targets are not supported")
    if startup == "standard" and cfg.b0 is None:
        raise ConfigError("standard startup requires b0")

    h, n = cfg.h, cfg.n_steps
    grid = np.arange(0, n + 1) * h
    masses = np.array(
        [density.interval_mass(grid[i], grid[i + 1]) for i in range(n)]
    )

    rng = make_rng(cfg.seed)
    paths = WeightedPaths.at_origin(cfg.mc_samples)
    conf = cfg.confidence if cfg.compute_ci else None

    levels: list[float] = []
    slopes: list[float] = []
    cis: list[tuple[float, float]] = []
    stderrs: list[float] = []
    esses: list[float] = []
    clipped_flags: list[bool] = []
    truncated = False

    if startup == "standard":
        levels.append(float(cfg.b0))
        first_step = 0
    elif n == 0:
        levels.append(0.0)
        first_step = 0
    else:
        kappa = density.small_time_class().kappa
        g = PeskirGBoundary(c_from_kappa(kappa))
        if h >= g.domain_end:
            raise ConfigError(
                f"step h={h} must lie inside the square-root startup domain "
                f"(0, {g.domain_end:.4g})"
            )
        c1 = g.value(h)
        levels.extend([0.0, c1])
        slopes.append(c1 / h)
        cis.append((c1 / h, c1 / h))
        stderrs.append(0.0)
        esses.append(float(cfg.mc_samples))
        clipped_flags.append(False)
        # interior crossings on (0, t_1) are disregarded: indicator only
        paths = extend_paths(paths, 0.0, c1, h, rng, skip_bridge=True)
        first_step = 1

    cum_mass = masses[:first_step].sum()
    for step in range(first_step, n):
        k_next = masses[step]
        if cum_mass + k_next > 1.0 - MASS_EXHAUSTION:
            truncated = True
            break
        cum_mass += k_next
        c_n = levels[-1]
        beta_prev = slopes[-1] if slopes else 0.0
        try:
            if step == 0:
                beta = plmc_step1(k_next, c_n, h, cfg.root_tol)
                ci, stderr, ess, clip = (beta, beta), 0.0, float(cfg.mc_samples), False
            else:
                beta, ci, stderr, ess, clip = plmc_step_n(
                    paths, c_n, beta_prev, k_next, h, cfg.root_tol, conf
                )
        except (DegenerateSample, InfeasibleMass, NoSignChange, DomainError) as exc:
            raise type(exc)(f"knot {step + 1} (t={grid[step + 1]:.6g}): {exc}") from exc
        c_new = c_n + beta * h
        paths = extend_paths(paths, c_n, c_new, h, rng)
        levels.append(c_new)
        slopes.append(beta)
        cis.append(ci)
        stderrs.append(stderr)
        esses.append(ess)
        clipped_flags.append(clip)

    n_knots = len(levels)
    return PlmcResult(
        times=grid[:n_knots],
        levels=np.array(levels),
        slopes=np.array(slopes),
        ci=np.array(cis).reshape(-1, 2),
        stderr_per_step=np.array(stderrs),
        ess_per_step=np.array(esses),
        target_masses=masses[: len(slopes)],
        ci_clipped=np.array(clipped_flags, dtype=bool),
        startup=startup,
        truncated=truncated,
    )
