"""Exception types shared across the package.

Every failure mode that callers are expected to branch on gets its own
class; the CLI maps them onto exit codes.
"""


class FrontlabError(Exception):
    """Base class for all frontlab failures."""


class ConfigError(FrontlabError):
    """A parameter violates an operation's preconditions."""


class NoConnection(FrontlabError):
    """Shooting trajectory failed to connect the two rest states."""


class NonFiniteState(FrontlabError):
    """An integrator produced NaN or Inf."""


class BracketError(FrontlabError):
    """Bisection endpoints do not bracket the target."""


class DomainError(FrontlabError):
    """Closed-form expression evaluated at a pole of its domain."""


class ResolutionError(FrontlabError):
    """Grid too coarse for the potential it must resolve."""


class ResolventError(FrontlabError):
    """Resolvent requested too close to a discrete eigenvalue."""


class CFLViolation(FrontlabError):
    """Explicit stage of the time stepper exceeds its stability limit."""


class InadmissibleMultiplier(FrontlabError):
    """Fourier symbol violates the dissipativity or kernel conditions."""


class GoldenMismatch(FrontlabError):
    """Computed quantity disagrees with a checked-in reference value."""
