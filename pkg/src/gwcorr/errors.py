"""Exception hierarchy shared across the package.

Every error carries a stable ``kind`` string so the HTTP layer and the CLI
can report machine-readable categories without inspecting class names.
"""


class GwError(Exception):
    """Base class for all package errors."""

    kind = "Error"


# --- spatial weighting ---

class AllCoincidentError(GwError):
    """Every observation shares one coordinate; no positive distance exists."""

    kind = "AllCoincident"


class NonPositiveBandwidthError(GwError):
    kind = "NonPositiveBandwidth"


# --- engine ---

class ZeroTotalWeightError(GwError):
    kind = "ZeroTotalWeight"


class InvalidSpecError(GwError):
    """An analysis request violates its own invariants (e.g. var_a == var_b)."""

    kind = "InvalidSpec"


class SpecMismatchError(GwError):
    """An analysis request names variables the dataset does not have."""

    kind = "SpecMismatch"


class PairNotInSurfaceError(GwError):
    kind = "PairNotInSurface"


# --- data ingestion and serialization ---

class MalformedInputError(GwError):
    kind = "MalformedInput"


class MixedGeometryError(GwError):
    """Geometry types are inhomogeneous or unsupported."""

    kind = "MixedGeometry"


class EmptyCollectionError(GwError):
    kind = "EmptyCollection"


class FewerThanThreeFeaturesError(GwError):
    kind = "FewerThanThreeFeatures"


class MissingColumnError(GwError):
    kind = "MissingColumn"


class NonNumericCoordinateError(GwError):
    kind = "NonNumericCoordinate"


class TooFewCompleteError(GwError):
    """Listwise completion left fewer than three usable observations."""

    kind = "TooFewComplete"


class IndexMismatchError(GwError):
    kind = "IndexMismatch"
