"""Exception types shared across the package."""


class BourEdgeError(Exception):
    """Base class for all library errors."""


class ExprSyntaxError(BourEdgeError):
    """Malformed expression text; carries the character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (offset {position})")
        self.position = position


class DomainError(BourEdgeError):
    """Evaluation left the domain of a node (division by ~0, sqrt of <= 0)."""


class NotDivisible(BourEdgeError):
    """A jet could not be divided by s^k: low-order coefficients do not vanish."""


class QuadratureFailure(BourEdgeError):
    """Adaptive quadrature did not reach the requested tolerance in budget."""


class NegativeRadicand(BourEdgeError):
    """A square-root argument went non-positive; signals an invalid datum."""

    def __init__(self, message, location=None, value=None):
        super().__init__(message)
        self.location = location
        self.value = value


class NonPositiveU(BourEdgeError):
    """The metric function U is not strictly positive on the domain."""


class NonVanishingLowDerivative(BourEdgeError):
    """U^(i)(0) != 0 for some 1 <= i <= k, so the datum is not k-admissible."""


class StarViolation(BourEdgeError):
    """The admissibility radicand m^2 U^2 - h^2 - m^4 U^2 V^2 fails to stay positive."""

    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)


class LadderViolated(BourEdgeError):
    """Higher cuspidal curvature requested while a lower one is nonzero."""


class WrongMultiplicity(BourEdgeError):
    """Curve does not have the stated multiplicity at the base point."""


class NotDiffeo(BourEdgeError):
    """Reparametrization has vanishing derivative at the base point."""


class UnsupportedK(BourEdgeError):
    """Edge classification is only available for k in {1, 2}."""


class NoConvergence(BourEdgeError):
    """Newton iteration failed to converge within the iteration budget."""
