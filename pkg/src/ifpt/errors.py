"""Exception hierarchy shared by all ifpt modules."""


class IfptError(Exception):
    """Base class for every error raised by this package."""


class DomainError(IfptError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NoSignChange(IfptError):
    """A root bracket could not be established (f has the same sign at both ends)."""


class MaxIterations(IfptError):
    """An iteration did not converge within its iteration budget."""


class QuadratureFailure(IfptError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class NoSolution(IfptError):
    """A nonlinear scalar equation has no solution for the given data."""


class DegenerateSample(IfptError):
    """The weighted Monte Carlo sample is too depleted to be usable (ESS below floor)."""


class InfeasibleMass(IfptError):
    """A target crossing mass is outside the attainable range of the current step."""


class MassOverflow(IfptError):
    """The discretized total crossing mass reached 1, leaving the knot equation rootless."""


class NumericalFailure(IfptError):
    """A computed quantity violated a sanity bound beyond round-off tolerance."""


class ConfigError(IfptError, ValueError):
    """A run configuration is malformed or violates a validation invariant."""
