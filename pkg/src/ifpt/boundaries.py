"""Boundary families: linear, Daniels, oscillating, the small-time
square-root boundary, and piecewise-linear.

All boundaries evaluate on scalars or numpy arrays and are immutable
after construction.  ``value_at_zero`` is the right-hand limit b(0+),
which the Monte Carlo direct solver and the inverse solvers use as the
chord anchor at t = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


@dataclass(frozen=True)
class LinearBoundary:
    """c(t) = alpha + beta * t."""

    alpha: float
    beta: float

    def value(self, t):
        arr, scalar = _as_array(t)
        out = self.alpha + self.beta * arr
        return float(out) if scalar else out

    def derivative(self, t):
        arr, scalar = _as_array(t)
        out = np.full_like(arr, self.beta)
        return float(out) if scalar else out

    def value_at_zero(self) -> float:
        return self.alpha


@dataclass(frozen=True)
class DanielsBoundary:
    """The curved boundary alpha/2 - (t/alpha) * log(beta/2 + sqrt(beta^2/4 + gamma e^{-alpha^2/t})).

    Evaluation branches on beta: for beta = 0 the inner logarithm has the
    closed form log(gamma)/2 - alpha^2/(2t), which must be used because
    the exponential underflows for small t.  For beta > 0 the underflow
    is benign (the inner expression degrades gracefully to beta).
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise DomainError(f"Daniels boundary requires alpha > 0, got {self.alpha}")
        if self.beta < 0:
            raise DomainError(f"Daniels boundary requires beta >= 0, got {self.beta}")
        if self.gamma <= -self.beta**2 / 4.0:
            raise DomainError(
                f"Daniels boundary requires gamma > -beta^2/4, got gamma={self.gamma}"
            )

    def value(self, t):
        arr, scalar = _as_array(t)
        if np.any(arr <= 0):
            raise DomainError("Daniels boundary is defined for t > 0")
        a, b, g = self.alpha, self.beta, self.gamma
        if b == 0.0:
            # log(sqrt(g) * e^{-a^2/(2t)}) evaluated in log space
            out = a - arr * math.log(g) / (2.0 * a)
        else:
            inner = b / 2.0 + np.sqrt(b * b / 4.0 + g * np.exp(-a * a / arr))
            out = a / 2.0 - (arr / a) * np.log(inner)
        return float(out) if scalar else out

    def derivative(self, t):
        arr, scalar = _as_array(t)
        step = 1e-6 * np.maximum(1.0, arr)
        lo = np.maximum(arr - step, arr / 2.0)
        out = (self.value(arr + step) - self.value(lo)) / (arr + step - lo)
        return float(out) if scalar else out

    def value_at_zero(self) -> float:
        # t -> 0+: the log term tends to log(beta) for beta > 0 (limit alpha/2),
        # and to log(gamma)/2 - alpha^2/(2t) for beta = 0 (limit alpha).
        return self.alpha / 2.0 if self.beta > 0 else self.alpha


@dataclass(frozen=True)
class OscillatingBoundary:
    """b(t) = alpha + beta * cos(gamma * t)."""

    alpha: float
    beta: float
    gamma: float

    def value(self, t):
        arr, scalar = _as_array(t)
        out = self.alpha + self.beta * np.cos(self.gamma * arr)
        return float(out) if scalar else out

    def derivative(self, t):
        arr, scalar = _as_array(t)
        out = -self.beta * self.gamma * np.sin(self.gamma * arr)
        return float(out) if scalar else out

    def value_at_zero(self) -> float:
        return self.alpha + self.beta


def _sqrt_log_arg(t, c):
    """Argument under the square root: t*(2 log(1/t) + log log(1/t) + c)."""
    logs = np.log(1.0 / t)
    return t * (2.0 * logs + np.log(logs) + c)


@dataclass(frozen=True)
class PeskirGBoundary:
    """Small-time boundary g(t) = sqrt(2t log(1/t) + t log log(1/t) + c t).

    Defined on (0, delta_c) with delta_c < 1/e.  When delta_c is not
    given it defaults to min(0.1, last point where the square-root
    argument stays positive), found by a numeric scan.
    """

    c: float
    delta_c: float | None = None
    _delta: float = field(init=False, repr=False)

    def __post_init__(self):
        if self.delta_c is None:
            delta = self._scan_domain_end()
        else:
            delta = self.delta_c
        if not 0.0 < delta < 1.0 / math.e:
            raise DomainError(f"delta_c must lie in (0, 1/e), got {delta}")
        object.__setattr__(self, "_delta", delta)

    def _scan_domain_end(self) -> float:
        grid = np.geomspace(1e-12, 1.0 / math.e - 1e-9, 4096)
        positive = _sqrt_log_arg(grid, self.c) > 0.0
        if not positive.any():
            raise DomainError(f"square-root argument never positive for c={self.c}")
        return min(0.1, float(grid[positive][-1]))

    @property
    def domain_end(self) -> float:
        return self._delta

    def value(self, t):
        arr, scalar = _as_array(t)
        if np.any(arr <= 0) or np.any(arr >= self._delta):
            raise DomainError(f"g(t) is defined on (0, {self._delta}), got t={t}")
        arg = _sqrt_log_arg(arr, self.c)
        if np.any(arg < 0):
            raise DomainError(f"square-root argument negative at t={t}")
        out = np.sqrt(arg)
        return float(out) if scalar else out

    def derivative(self, t):
        arr, scalar = _as_array(t)
        step = np.minimum(1e-6 * np.maximum(1.0, arr), arr / 2.0)
        hi = np.minimum(arr + step, (arr + self._delta) / 2.0)
        out = (self.value(hi) - self.value(arr - step)) / (hi - (arr - step))
        return float(out) if scalar else out

    def value_at_zero(self) -> float:
        return 0.0


@dataclass(frozen=True)
class PiecewiseLinearBoundary:
    """Continuous piecewise-linear boundary through knots (t_i, c_i).

    Segment i (1-based) joins knot i-1 to knot i; its coefficients
    (alpha_i, beta_i) satisfy the continuity recursion
    alpha_{i+1} = alpha_i + (beta_i - beta_{i+1}) t_i.
    """

    knots: tuple[tuple[float, float], ...]

    def __init__(self, knots):
        pts = tuple((float(t), float(c)) for t, c in knots)
        if len(pts) < 2:
            raise DomainError("piecewise-linear boundary needs at least two knots")
        ts = [t for t, _ in pts]
        if ts[0] < 0:
            raise DomainError("knot times must satisfy t_0 >= 0")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("knot times must be strictly increasing")
        object.__setattr__(self, "knots", pts)

    @classmethod
    def from_sampling(cls, boundary, grid) -> "PiecewiseLinearBoundary":
        """Chord interpolant of another boundary on the given time grid."""
        grid = np.asarray(grid, dtype=float)
        return cls([(t, float(boundary.value(t))) for t in grid])

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.knots])

    @property
    def levels(self) -> np.ndarray:
        return np.array([c for _, c in self.knots])

    def segment_coeffs(self, i: int) -> tuple[float, float]:
        """(alpha_i, beta_i) of segment i, 1 <= i <= number of segments."""
        if not 1 <= i <= len(self.knots) - 1:
            raise DomainError(f"segment index {i} out of range")
        (t0, c0), (t1, c1) = self.knots[i - 1], self.knots[i]
        beta = (c1 - c0) / (t1 - t0)
        alpha = c0 - beta * t0
        return alpha, beta

    def value(self, t):
        arr, scalar = _as_array(t)
        ts, cs = self.times, self.levels
        if np.any(arr < ts[0]) or np.any(arr > ts[-1]):
            raise DomainError(
                f"t outside piecewise-linear domain [{ts[0]}, {ts[-1]}]: {t}"
            )
        out = np.interp(arr, ts, cs)
        return float(out) if scalar else out

    def derivative(self, t):
        """Slope of the containing segment (right-continuous at knots)."""
        arr, scalar = _as_array(t)
        ts = self.times
        idx = np.clip(np.searchsorted(ts, arr, side="right"), 1, len(ts) - 1)
        betas = np.array([self.segment_coeffs(i)[1] for i in range(1, len(ts))])
        out = betas[idx - 1]
        return float(out) if scalar else out

    def value_at_zero(self) -> float:
        if self.knots[0][0] != 0.0:
            raise DomainError("boundary has no knot at t = 0")
        return self.knots[0][1]
