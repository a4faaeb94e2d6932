"""
Custom exception hierarchy for conley-surf.

Every failure a caller can act on is a subclass of ``ConleySurfError`` with a
stable machine-readable ``code``. The CLI serializes these with ``to_dict``
and exits with status 1.
"""

from datetime import datetime, timezone
from typing import Any, Optional, Sequence


# ============================================================================
# Base Exception
# ============================================================================

class ConleySurfError(Exception):
    """
    Base exception for all toolkit errors.

    Args:
        message: Human readable summary
        code: Stable error code (used by the CLI error JSON)
        details: Optional longer explanation
        **extra_data: Structured context (vertex ids, clause names, ...)
    """

    def __init__(
        self,
        message: str,
        code: str = "CONLEY_SURF_ERROR",
        details: Optional[str] = None,
        **extra_data: Any,
    ):
        self.message = message
        self.code = code
        self.details = details
        self.extra_data = extra_data
        super().__init__(self.message)

    def to_dict(self) -> dict[str, Any]:
        """Convert exception to the error JSON emitted on standard error."""
        error_dict: dict[str, Any] = {
            "code": self.code,
            "message": self.message,
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        }

        if self.details:
            error_dict["details"] = self.details

        if self.extra_data:
            error_dict["extra"] = self.extra_data

        return {"success": False, "error": error_dict}


# ============================================================================
# Surface Complex Errors
# ============================================================================

class ComplexError(ConleySurfError):
    """Base exception for triangulated surface errors."""

    def __init__(self, message: str, code: str = "COMPLEX_ERROR", **kwargs: Any):
        super().__init__(message=message, code=code, **kwargs)


class InvalidComplexError(ComplexError):
    """
    Raised when a triangle table does not describe a surface with boundary.

    Typical causes:
    - degenerate or repeated triangles
    - an edge shared by three or more triangles
    - a vertex whose link is not a single path or cycle
    - an unused vertex id
    """

    def __init__(self, message: str = "Triangle table is not a surface", **kwargs: Any):
        super().__init__(message=message, code="INVALID_COMPLEX", **kwargs)


class DisconnectedError(ComplexError):
    """Raised when an operation needs a connected complex."""

    def __init__(self, message: str = "Complex is not connected", components: Optional[int] = None, **kwargs: Any):
        super().__init__(
            message=message,
            code="DISCONNECTED",
            components=components,
            **kwargs,
        )


class NotProperlyEmbeddedError(ComplexError):
    """
    Raised when a cut path is not a properly embedded arc.

    Endpoints must lie on the boundary, inner vertices in the interior,
    every path edge must be interior and the path must be simple.
    """

    def __init__(self, message: str = "Path is not properly embedded", **kwargs: Any):
        super().__init__(message=message, code="NOT_PROPERLY_EMBEDDED", **kwargs)


class MissingEdgeError(ComplexError):
    """Raised when an edge is not present in the complex."""

    def __init__(self, message: str = "Edge not in complex", edge: Optional[Sequence[int]] = None, **kwargs: Any):
        super().__init__(
            message=message,
            code="MISSING_EDGE",
            edge=list(edge) if edge is not None else None,
            **kwargs,
        )


class NotABoundaryCircleError(ComplexError):
    """Raised when a vertex cycle is not one of the boundary circles."""

    def __init__(self, message: str = "Not a boundary circle of the complex", **kwargs: Any):
        super().__init__(message=message, code="NOT_A_BOUNDARY_CIRCLE", **kwargs)


# ============================================================================
# Homology Errors
# ============================================================================

class HomologyError(ConleySurfError):
    """Base exception for Z2 (co)homology errors."""

    def __init__(self, message: str, code: str = "HOMOLOGY_ERROR", **kwargs: Any):
        super().__init__(message=message, code=code, **kwargs)


class NotASubcomplexError(HomologyError):
    """Raised when a selector is not a closed subcomplex of the complex."""

    def __init__(self, message: str = "Selection is not a closed subcomplex", **kwargs: Any):
        super().__init__(message=message, code="NOT_A_SUBCOMPLEX", **kwargs)


class NotACocycleError(HomologyError):
    """Raised when a cochain is not a relative cocycle."""

    def __init__(self, message: str = "Cochain is not a relative cocycle", **kwargs: Any):
        super().__init__(message=message, code="NOT_A_COCYCLE", **kwargs)


# ============================================================================
# Block Errors
# ============================================================================

class BlockError(ConleySurfError):
    """Base exception for isolating block errors."""

    def __init__(self, message: str, code: str = "BLOCK_ERROR", **kwargs: Any):
        super().__init__(message=message, code=code, **kwargs)


class InvalidBlockError(BlockError):
    """
    Raised when an operation requires a valid block.

    The violation list from ``validate`` is attached as ``violations``.
    """

    def __init__(
        self,
        message: str = "Isolating block is invalid",
        violations: Optional[list[str]] = None,
        **kwargs: Any,
    ):
        self.violations = violations or []
        super().__init__(
            message=message,
            code="INVALID_BLOCK",
            details="; ".join(self.violations) if self.violations else None,
            violations=self.violations,
            **kwargs,
        )


class BlockFormatError(BlockError):
    """Raised when a block file cannot be parsed against the schema."""

    def __init__(self, message: str = "Malformed block file", path: Optional[str] = None, **kwargs: Any):
        super().__init__(message=message, code="BLOCK_FORMAT_ERROR", path=path, **kwargs)


# ============================================================================
# Surgery Errors
# ============================================================================

class SurgeryError(ConleySurfError):
    """Base exception for regularization surgery errors."""

    def __init__(self, message: str, code: str = "SURGERY_ERROR", **kwargs: Any):
        super().__init__(message=message, code=code, **kwargs)


class InsufficientTransitDataError(SurgeryError):
    """
    Raised when regularization needs a transit spine that the block lacks.

    The block is still valid; it just does not carry enough flow data to
    cut the required flow rectangle.
    """

    def __init__(self, message: str = "No transit spine available for a required gap", **kwargs: Any):
        super().__init__(
            message=message,
            code="INSUFFICIENT_TRANSIT_DATA",
            details="Add a spine starting in the reported exit gap",
            **kwargs,
        )


class DisconnectingCutError(SurgeryError):
    """
    Raised when cutting along a spine disconnects the block.

    Genuine flow data never does this; the spine set is flow-inconsistent.
    """

    def __init__(self, message: str = "Cut along spine disconnects the block", **kwargs: Any):
        super().__init__(message=message, code="DISCONNECTING_CUT", **kwargs)


class SurgeryInvariantError(SurgeryError):
    """Raised when a cut does not lower the obstruction by exactly one."""

    def __init__(self, message: str = "Cut did not remove exactly one obstruction generator", **kwargs: Any):
        super().__init__(message=message, code="SURGERY_INVARIANT", **kwargs)


# ============================================================================
# Classification Errors
# ============================================================================

class ClassificationError(ConleySurfError):
    """Base exception for index classification errors."""

    def __init__(self, message: str, code: str = "CLASSIFICATION_ERROR", **kwargs: Any):
        super().__init__(message=message, code=code, **kwargs)


class InconsistentDataError(ClassificationError):
    """
    Raised when block or summary data cannot come from a surface flow.

    Examples: negative circle count, odd orientable genus numerator,
    a cohomology index with both CH0 and CH2 nonzero.
    """

    def __init__(self, message: str = "Data is inconsistent with a surface flow", **kwargs: Any):
        super().__init__(message=message, code="INCONSISTENT_DATA", **kwargs)


class FixedPointForcedError(ClassificationError):
    """Raised when a fixed-point-free assertion contradicts the index."""

    def __init__(
        self,
        message: str = "Block data forces a fixed point",
        fp_index: Optional[int] = None,
        **kwargs: Any,
    ):
        super().__init__(
            message=message,
            code="FIXED_POINT_FORCED",
            fp_index=fp_index,
            **kwargs,
        )


class NotAContinuationError(ClassificationError):
    """Raised when a family of summaries cannot continue the base set."""

    def __init__(self, message: str = "Summaries do not form a continuation", clause: Optional[str] = None, **kwargs: Any):
        super().__init__(message=message, code="NOT_A_CONTINUATION", clause=clause, **kwargs)


# ============================================================================
# Builder Errors
# ============================================================================

class RecipeError(ConleySurfError):
    """Base exception for block recipe errors."""

    def __init__(self, message: str, code: str = "RECIPE_ERROR", **kwargs: Any):
        super().__init__(message=message, code=code, **kwargs)


class UnknownRecipeError(RecipeError):
    """Raised when a standard recipe name is not registered."""

    def __init__(self, name: str, available: Optional[Sequence[str]] = None, **kwargs: Any):
        super().__init__(
            message=f"Unknown recipe '{name}'",
            code="UNKNOWN_RECIPE",
            details=f"Available: {', '.join(available)}" if available else None,
            name=name,
            **kwargs,
        )
