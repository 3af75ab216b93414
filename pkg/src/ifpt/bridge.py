"""Absorbed-path machinery for piecewise-linear boundaries.

A path ensemble carries, for every Monte Carlo sample, the current
Wiener position and the running product of per-segment survival factors
(indicator times Brownian-bridge non-crossing weight).  Extending the
ensemble by one knot costs O(M); the weighted average of the one-step
crossing mass over the ensemble is the Monte Carlo estimator the
piecewise-linear inverse solver drives to its target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr, ndtr

from .errors import DegenerateSample, DomainError

ESS_FLOOR = 10.0


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; a fixed seed fixes every draw order-independently."""
    return np.random.Generator(np.random.Philox(key=seed))


def bridge_weight(y0, y1, c0, c1, dt: float):
    """Probability that a Brownian bridge from y0 to y1 over dt stays below
    the chord from c0 to c1.

    1 - exp(-2 (c0 - y0)(c1 - y1) / dt) when both gaps are positive, and 0
    otherwise (a path at or above the chord endpoint is absorbed).
    Vectorized over any mix of scalars and arrays.
    """
    if dt <= 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    g0 = np.asarray(c0, dtype=float) - np.asarray(y0, dtype=float)
    g1 = np.asarray(c1, dtype=float) - np.asarray(y1, dtype=float)
    scalar = g0.ndim == 0 and g1.ndim == 0
    g0, g1 = np.broadcast_arrays(np.atleast_1d(g0), np.atleast_1d(g1))
    out = np.where((g0 > 0) & (g1 > 0), -np.expm1(-2.0 * g0 * g1 / dt), 0.0)
    return float(out[0]) if scalar else out


def segment_cross_mass_H(beta, x_n, c_n, dt: float):
    """Probability of crossing the line through (t_n, c_n) with slope beta
    within the next dt, starting from x_n at t_n.

    With d = c_n - x_n:  1 - Phi((beta dt + d)/sqrt(dt))
                         + exp(-2 beta d) Phi((beta dt - d)/sqrt(dt)).
    The product term is evaluated as exp(-2 beta d + log Phi) so that
    steeply negative slopes cannot overflow.  d <= 0 returns 1.
    Vectorized over x_n.
    """
    if dt <= 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    d = np.asarray(c_n, dtype=float) - np.asarray(x_n, dtype=float)
    scalar = d.ndim == 0
    d = np.atleast_1d(d)
    sdt = math.sqrt(dt)
    first = ndtr(-(beta * dt + d) / sdt)
    second = np.exp(-2.0 * beta * d + log_ndtr((beta * dt - d) / sdt))
    out = np.where(d <= 0.0, 1.0, np.minimum(first + second, 1.0))
    return float(out[0]) if scalar else out


@dataclass
class WeightedPaths:
    """Ensemble state after some number of knots: positions and weights.

    ``weights`` live in [0, 1] and stay 0 once a path is absorbed; a
    path is alive exactly when its weight is positive.
    """

    positions: np.ndarray
    weights: np.ndarray

    @classmethod
    def at_origin(cls, n_paths: int) -> "WeightedPaths":
        return cls(np.zeros(n_paths), np.ones(n_paths))

    @property
    def n_paths(self) -> int:
        return self.positions.size

    @property
    def alive(self) -> np.ndarray:
        return self.weights > 0.0

    def ess(self) -> float:
        """Effective sample size (sum w)^2 / sum w^2 of the current weights."""
        total = self.weights.sum()
        if total == 0.0:
            return 0.0
        return float(total * total / np.square(self.weights).sum())


def extend_paths(
    paths: WeightedPaths,
    c_prev: float,
    c_new: float,
    dt: float,
    rng: np.random.Generator,
    skip_bridge: bool = False,
) -> WeightedPaths:
    """Advance every path by one Gaussian increment and fold in the survival
    factor for the chord from c_prev to c_new.

    ``skip_bridge`` keeps only the endpoint indicator; the positive-f(0+)
    startup needs it on the first interval, where the chord starts on the
    process itself and the bridge factor degenerates to zero.
    """
    if dt <= 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    x_new = paths.positions + math.sqrt(dt) * rng.standard_normal(paths.n_paths)
    if skip_bridge:
        factor = (x_new <= c_new).astype(float)
    else:
        factor = np.where(x_new <= c_new, bridge_weight(paths.positions, x_new, c_prev, c_new, dt), 0.0)
    return WeightedPaths(x_new, paths.weights * factor)


@dataclass(frozen=True)
class McEstimate:
    """Weighted-sample mean with its standard error and diagnostics."""

    mean: float
    std_error: float
    samples: int
    ess: float


def estimate_lhs(paths: WeightedPaths, beta: float, c_n: float, dt: float) -> McEstimate:
    """Monte Carlo estimate of E[weight * H(beta; X_n)] over the ensemble.

    Raises DegenerateSample when the effective sample size is below the
    floor: the root solves on a depleted ensemble would return noise.
    """
    ess = paths.ess()
    if ess < ESS_FLOOR:
        raise DegenerateSample(f"effective sample size {ess:.2f} below {ESS_FLOOR}")
    vals = weighted_cross_values(paths, beta, c_n, dt)
    m = paths.n_paths
    mean = float(vals.sum() / m)
    std_error = float(vals.std(ddof=1) / math.sqrt(m))
    return McEstimate(mean, std_error, m, ess)


def weighted_cross_values(paths: WeightedPaths, beta: float, c_n: float, dt: float) -> np.ndarray:
    """Per-path weight * H values (zeros for absorbed paths)."""
    vals = np.zeros(paths.n_paths)
    alive = paths.alive
    if alive.any():
        vals[alive] = paths.weights[alive] * segment_cross_mass_H(
            beta, paths.positions[alive], c_n, dt
        )
    return vals
