"""Exception hierarchy shared by all superosc modules.

The CLI maps these onto process exit codes; see superosc.cli.
"""


class SuperoscError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SuperoscError):
    """A configuration or input file failed validation."""


class DegenerateNodes(ConfigError):
    """Node set has coincident or nearly coincident points; the coefficient
    denominators would destroy all significand bits."""


class OutOfRange(ConfigError):
    """A node lies outside [-1, 1]."""


class NoConvergenceAtMaxBits(SuperoscError):
    """Two-precision agreement was never reached before the precision cap;
    signals ill-conditioned input such as near-coincident nodes."""


class TailNotBounded(SuperoscError):
    """A truncation tail could not be driven below tolerance at the maximum
    allowed order."""


class OutsideRadius(SuperoscError):
    """A series was evaluated at or beyond its radius of convergence."""


class NormNotCertifiable(SuperoscError):
    """The weight decay B does not dominate the certified growth rate b, so
    the weighted supremum may be unbounded or attained off-grid."""


class NotExponentialType(SuperoscError):
    """Taylor coefficients grow faster than C * b^j / j! for every b."""
