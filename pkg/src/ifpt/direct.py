"""Direct first-passage solvers, used as oracles for the inverse methods.

Two routes with independent error structure:

* ``direct_fpt_mc`` replaces the boundary by its chords on the grid and
  accumulates per-interval crossing mass from weighted paths; exact up
  to Monte Carlo noise and the O(h^2) chord bias.
* ``direct_fpt_vie`` steps a second-kind Volterra equation with a
  nonsingular kernel for smooth boundaries.  The kernel is verified on
  construction: on linear boundaries it vanishes identically and the
  recursion must reproduce the closed-form density to round-off, else
  the solver refuses to run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cache

import numpy as np

from .bridge import WeightedPaths, extend_paths, make_rng
from .errors import DomainError, NumericalFailure
from .numerics import SQRT_2PI

NEGATIVE_CLAMP = -1e-10


@dataclass(frozen=True)
class DirectResult:
    """Per-interval crossing masses and/or pointwise density estimates."""

    grid: np.ndarray
    interval_masses: np.ndarray
    std_errors: np.ndarray | None = None
    density_values: np.ndarray | None = None
    survivor_weight_mean: float | None = None


def direct_fpt_mc(boundary, grid, n_paths: int, seed: int = 0) -> DirectResult:
    """Crossing mass of each grid interval for the chord approximation of
    ``boundary``, estimated from ``n_paths`` weighted paths.

    The per-interval mass is the mean drop of the survival weight, so the
    masses plus the mean surviving weight telescope to 1 exactly.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or grid[0] <= 0 or np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be strictly increasing positive times")
    if n_paths < 1000:
        raise DomainError(f"need at least 10^3 paths, got {n_paths}")
    levels = np.concatenate([[boundary.value_at_zero()], [boundary.value(t) for t in grid]])
    rng = make_rng(seed)
    paths = WeightedPaths.at_origin(n_paths)
    masses = np.zeros(grid.size)
    errs = np.zeros(grid.size)
    t_prev = 0.0
    for i, t in enumerate(grid):
        new = extend_paths(paths, levels[i], levels[i + 1], t - t_prev, rng)
        drop = paths.weights - new.weights
        masses[i] = drop.mean()
        errs[i] = drop.std(ddof=1) / math.sqrt(n_paths)
        paths, t_prev = new, t
    return DirectResult(
        grid=grid,
        interval_masses=masses,
        std_errors=errs,
        survivor_weight_mean=float(paths.weights.mean()),
    )


def _kernel(t, b_t, bprime_t, y, tau):
    """Nonsingular kernel (1/2)[b'(t) - (b(t)-y)/(t-tau)] phi((b(t)-y)/sqrt(t-tau)) / sqrt(t-tau)."""
    dt = t - tau
    sdt = np.sqrt(dt)
    z = (b_t - y) / sdt
    phi = np.exp(-0.5 * z * z) / SQRT_2PI
    return 0.5 * (bprime_t - (b_t - y) / dt) * phi / sdt


@cache
def _kernel_verified() -> bool:
    """Linear-boundary exactness gate: the kernel must vanish on chords.

    With b(t) = alpha + beta t the chord slope equals b' everywhere, the
    history term drops out, and the recursion must return the
    Bachelier-Levy density exactly.  Run once per process.
    """
    alpha, beta = 1.0, 0.3
    ts = np.arange(1, 51) * 0.02
    bv = alpha + beta * ts
    f = _vie_recursion(ts, bv, np.full_like(ts, beta))
    z = (alpha + beta * ts) / np.sqrt(ts)
    exact = alpha / ts**1.5 * np.exp(-0.5 * z * z) / SQRT_2PI
    return bool(np.max(np.abs(f - exact)) <= 1e-10)


def _vie_recursion(ts: np.ndarray, b_vals: np.ndarray, bprime_vals: np.ndarray) -> np.ndarray:
    """Forward trapezoidal stepping of the second-kind equation.

    f(t_i) = -2 k(t_i | 0, 0) + 2h sum_{j<i} f(t_j) k(t_i | b(t_j), t_j).
    The j = 0 endpoint carries f(0+) = 0 (the solver requires b(0+) > 0)
    and the diagonal kernel limit is 0 for C^2 boundaries, so both
    trapezoid end weights drop out.
    """
    h = ts[0]
    n = ts.size
    f = np.zeros(n)
    for i in range(n):
        inhom = -2.0 * _kernel(ts[i], b_vals[i], bprime_vals[i], 0.0, 0.0)
        hist = 0.0
        if i > 0:
            k = _kernel(ts[i], b_vals[i], bprime_vals[i], b_vals[:i], ts[:i])
            hist = 2.0 * h * float(np.dot(f[:i], k))
        f[i] = inhom + hist
    return f


def direct_fpt_vie(boundary, grid) -> DirectResult:
    """Density of the first-passage time through a C^1 boundary with
    b(0+) > 0, on a uniform grid, by the nonsingular second-kind recursion.

    Interval masses are filled by trapezoid integration of the density
    (anchored at f(0+) = 0).  Tiny negative round-off is clamped to zero;
    anything below the clamp threshold raises.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or grid[0] <= 0:
        raise DomainError("grid must be positive times")
    h = grid[0]
    if not np.allclose(np.diff(grid), h, rtol=1e-9, atol=1e-12):
        raise DomainError("direct_fpt_vie requires a uniform grid starting at h")
    if boundary.value_at_zero() <= 0.0:
        raise DomainError("direct_fpt_vie requires b(0+) > 0")
    if not _kernel_verified():
        raise NumericalFailure(
            "kernel failed the linear-boundary exactness check; refusing to run"
        )
    b_vals = np.array([boundary.value(t) for t in grid])
    bprime_vals = np.array([boundary.derivative(t) for t in grid])
    f = _vie_recursion(grid, b_vals, bprime_vals)
    if np.any(f < NEGATIVE_CLAMP):
        raise NumericalFailure(f"density went negative beyond clamp: min {f.min()}")
    f = np.maximum(f, 0.0)
    padded = np.concatenate([[0.0], f])
    widths = np.diff(np.concatenate([[0.0], grid]))
    masses = 0.5 * widths * (padded[:-1] + padded[1:])
    return DirectResult(grid=grid, interval_masses=masses, density_values=f)
