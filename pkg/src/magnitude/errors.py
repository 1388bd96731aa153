"""Exception types raised across the package.

Every operation that can reject its input does so with one of these, so
callers (and the CLI) can branch on the class rather than parse messages.
"""


class MagnitudeError(Exception):
    """Base class for all package errors."""


# ---------------------------------------------------------------- spaces

class MetricError(MagnitudeError):
    """Invalid finite metric space input."""


class NegativeDistance(MetricError):
    pass


class TriangleViolation(MetricError):
    def __init__(self, a, b, c, via, direct):
        self.points = (a, b, c)
        super().__init__(
            f"triangle inequality fails: d({a},{c})={direct:.6g} > "
            f"d({a},{b})+d({b},{c})={via:.6g}"
        )


class ZeroOffDiagonal(MetricError):
    """Zero distance between distinct points of a non-generalized space."""


class DimensionMismatch(MetricError):
    pass


class CycleDetected(MetricError):
    """Cover relations of a poset contain a cycle."""


class NonpositiveScale(MetricError):
    pass


class GlueDistanceTooSmall(MetricError):
    """Constant-distance gluing needs D >= max(diam A, diam B)/2."""


# ---------------------------------------------------------------- engine

class EngineError(MagnitudeError):
    pass


class SingularSimilarity(EngineError):
    """Similarity matrix not invertible at the requested tolerance."""


class AsymmetricSpace(EngineError):
    """Operation defined only for symmetric spaces."""


class NotScattered(EngineError):
    pass


class SeriesNotConverged(EngineError):
    def __init__(self, max_terms):
        self.max_terms = max_terms
        super().__init__(f"series did not converge within {max_terms} terms")


class NotHomogeneous(EngineError):
    pass


class NotUltrametric(EngineError):
    pass


class NotPositiveDefinite(EngineError):
    pass


class ZeroVector(EngineError):
    pass


class EnumerationTooLarge(EngineError):
    """Codeword enumeration would exceed the configured cap."""


class ProjectionFails(EngineError):
    """Union hypotheses (mutual projection) do not hold."""


class SubmagnitudeUndefined(EngineError):
    """A constituent space has no magnitude."""


class ResonantGlue(EngineError):
    """Gluing closed form undefined: |A||B| = e^{2D}."""


# ------------------------------------------------------------- functions

class EmptyGrid(MagnitudeError):
    pass


class InsufficientSamples(MagnitudeError):
    pass


# --------------------------------------------------------------- regions

class RegionError(MagnitudeError):
    pass


class MalformedRegion(RegionError):
    pass


class NegativeLength(RegionError):
    pass


class NegativeSide(RegionError):
    pass


class UnsupportedRegion(RegionError):
    pass


class UnsupportedShape(RegionError):
    """No intrinsic-volume formula available for this shape."""


class GridTooLarge(RegionError):
    def __init__(self, n_points, cap):
        self.n_points = n_points
        self.cap = cap
        super().__init__(f"grid has {n_points} points, cap is {cap}")


# ------------------------------------------------------------------- cli

class ParseError(MagnitudeError):
    """Malformed input file or CLI value."""
