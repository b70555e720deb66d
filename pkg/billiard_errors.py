"""
Error types shared by the billiard toolkit.

Library code raises these; the command line catches BilliardError at the
boundary and turns it into an exit code.
"""


class BilliardError(Exception):
    """Base class for every error raised by the toolkit"""


class ConfigError(BilliardError):
    """Malformed body, settings or experiment definition"""


class NonConvexBody(ConfigError):
    """Sampled convexity or smoothness check failed for an implicit body"""


class BadInput(BilliardError):
    """Arguments outside the documented range of an operation"""


class BadClause(BadInput):
    """Bound clause requested for (m, n) where it does not apply"""


class Unsupported(BilliardError):
    """Ring or coefficient domain that is not available"""


class NoConvergence(BilliardError):
    """Iterative method hit its cap without meeting its tolerance"""


class OffSurface(BilliardError):
    """Point is farther from the surface than the body tolerance"""


class Inadmissible(BilliardError):
    """Two consecutive points of a configuration coincide"""


class WrongKind(BilliardError):
    """Operation needs the other configuration kind"""


class NotCritical(BilliardError):
    """Classification requested at a point with non-vanishing gradient"""
