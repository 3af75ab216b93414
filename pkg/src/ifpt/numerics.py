"""Standard normal helpers and the shared bisection root finder.

Every solver in this package reduces its nonlinear equations to scalar
root finding against combinations of the normal density, distribution
and survival functions, so these live here with no other dependencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, MaxIterations, NoSignChange

SQRT_2PI = math.sqrt(2.0 * math.pi)

DEFAULT_ROOT_TOL = 1e-10


@dataclass(frozen=True)
class Bracket:
    """An interval [lo, hi] with a sign change of the target function inside."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")


def std_normal_pdf(x: float) -> float:
    """Standard normal density phi(x) = exp(-x^2/2) / sqrt(2 pi)."""
    return math.exp(-0.5 * x * x) / SQRT_2PI


def std_normal_cdf(x: float) -> float:
    """Standard normal distribution Phi(x), accurate over the full double range."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def survival(x: float) -> float:
    """Normal survival Psi(x) = 1 - Phi(x), computed in complementary form.

    Using erfc directly keeps the tail accurate: a literal 1 - Phi(x)
    cancels for x around 8 and beyond, and the solvers routinely push
    arguments that far.
    """
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def survival_inv(p: float, tol: float = 1e-13) -> float:
    """Inverse of the normal survival function.

    Bisection on a dynamically expanded bracket starting at [-10, 10];
    slower than a rational approximation but trivially correct, and the
    root solves elsewhere dominate runtime anyway.

    Raises DomainError for p outside (0, 1): the discretized boundary
    equations funnel infeasible data here, and the caller needs a signal
    rather than an infinity.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"survival_inv requires p in (0, 1), got {p}")
    lo, hi = -10.0, 10.0
    # survival is decreasing: expand until survival(hi) < p < survival(lo)
    while survival(hi) >= p:
        hi *= 2.0
    while survival(lo) <= p:
        lo *= 2.0
    return find_root_midpoint(lambda x: survival(x) - p, Bracket(lo, hi), tol)


def find_root_midpoint(
    f: Callable[[float], float],
    bracket: Bracket,
    tol: float = DEFAULT_ROOT_TOL,
    max_iter: int = 200,
) -> float:
    """Bisection ("iterative middle point method") on a sign-change bracket.

    Returns a point of the final interval of width <= tol, picking
    whichever of its endpoints or midpoint has the smallest |f|.
    Deterministic for deterministic f.
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    lo, hi = bracket.lo, bracket.hi
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NoSignChange(
            f"f has the same sign at both bracket ends: f({lo})={flo}, f({hi})={fhi}"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if flo * fmid <= 0.0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
        if hi - lo <= tol:
            mid = 0.5 * (lo + hi)
            fmid = f(mid)
            # hand back the best of the three candidate points
            best = min((abs(flo), lo), (abs(fhi), hi), (abs(fmid), mid))
            return best[1]
    raise MaxIterations(f"bisection did not reach tol={tol} in {max_iter} iterations")
