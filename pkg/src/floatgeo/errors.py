"""Exception types raised by floatgeo operations."""


class FloatGeoError(Exception):
    """Base class for all floatgeo errors."""


class DegenerateInput(FloatGeoError):
    """Input point set does not span the requested dimension."""


class UnsupportedDimension(FloatGeoError):
    """Only dimensions 2 and 3 are supported."""


class EmptyCap(FloatGeoError):
    """Clipping plane lies above the body: the cap is empty."""


class FullBody(FloatGeoError):
    """Clipping plane lies below the body: the cap is the whole body."""


class EmptySection(FloatGeoError):
    """Section plane does not meet the interior of the body."""


class NoConvergence(FloatGeoError):
    """Level solver failed to converge (internal error: V(h) is monotone)."""


class TooFewSamples(FloatGeoError):
    """At least three samples are needed for a finite-difference tangent."""


class SingularDirection(FloatGeoError):
    """The liquid chord passes through a vertex; curvature is undefined there."""


class OutOfRange(FloatGeoError):
    """Angle lies outside the arc's angular range."""


class CoincidentChords(FloatGeoError):
    """The two supporting chords through the point coincide (density 1/2)."""


class HalfDensity(FloatGeoError):
    """Reconstruction requires density != 1/2: at half density the two
    supporting chords through any boundary point coincide, so the flotation
    curve no longer determines the polygon."""


class ChaseNonTermination(FloatGeoError):
    """Parallel-side chase exceeded its iteration bound."""


class ConvexityLoss(FloatGeoError):
    """Perturbation too large: the constructed polygon is not convex."""


class NoParallelPair(FloatGeoError):
    """Base polygon lacks a parallel pair of equal-length sides."""


class InsufficientData(FloatGeoError):
    """A crossing cluster has fewer planes than the ambient dimension."""


class DegenerateCluster(FloatGeoError):
    """Cluster planes share a line instead of a point (density-1/2 cylinder)."""

    def __init__(self, message, groups=None):
        super().__init__(message)
        self.groups = groups


class UnboundedRegion(FloatGeoError):
    """Arc asymptotes do not bound the quarter-plane intersection."""
