"""
Pydantic schemas for Conley index classification.

These schemas provide:
- The index descriptor normal form (wedge of circles and closed surfaces,
  plus disjoint clusters)
- Classification, ring, fixed-point, duality and shape reports
- Component summaries and continuation reports
"""

from __future__ import annotations

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from conley_surf.models.homology_schemas import CohomologyIndex, IntersectionForm


# ============================================================================
# ENUMS
# ============================================================================

class DynamicsType(str, Enum):
    """Attractor (no exit), repeller (all exit) or mixed."""
    ATTRACTOR = "Attractor"
    REPELLER = "Repeller"
    MIXED = "Mixed"


# ============================================================================
# INDEX DESCRIPTOR
# ============================================================================

class SurfaceSummand(BaseModel):
    """Closed surface wedge summand; (orientable, 0) is the 2-sphere."""

    model_config = ConfigDict(frozen=True)

    orientable: bool
    genus: int = Field(..., ge=0)

    @model_validator(mode="after")
    def validate_genus(self) -> "SurfaceSummand":
        if not self.orientable and self.genus < 1:
            raise ValueError("nonorientable summand needs genus >= 1")
        return self

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus if self.orientable else 2 - self.genus

    @property
    def beta1(self) -> int:
        """Z2 first Betti number."""
        return 2 * self.genus if self.orientable else self.genus

    @property
    def label(self) -> str:
        if self.orientable:
            return {0: "S²", 1: "S¹×S¹"}.get(self.genus, f"Σ_{self.genus}")
        return "RP²" if self.genus == 1 else f"N_{self.genus}"

    def sort_key(self) -> tuple[int, int]:
        return (0 if self.orientable else 1, self.genus)


class Cluster(BaseModel):
    """Wedge of circles and closed surfaces (one connected piece)."""

    model_config = ConfigDict(frozen=True)

    circles: int = Field(0, ge=0)
    surfaces: tuple[SurfaceSummand, ...] = ()

    @field_validator("surfaces")
    @classmethod
    def sort_surfaces(cls, v: tuple[SurfaceSummand, ...]) -> tuple[SurfaceSummand, ...]:
        return tuple(sorted(v, key=SurfaceSummand.sort_key))

    def __add__(self, other: "Cluster") -> "Cluster":
        return Cluster(circles=self.circles + other.circles, surfaces=self.surfaces + other.surfaces)

    @property
    def is_point(self) -> bool:
        return self.circles == 0 and not self.surfaces

    def reduced_euler(self) -> int:
        """chi of the cluster minus one."""
        return -self.circles + sum(s.euler - 1 for s in self.surfaces)

    def label(self) -> str:
        parts = [s.label for s in self.surfaces] + ["S¹"] * self.circles
        return " ∨ ".join(parts) if parts else "•"

    def sort_key(self) -> tuple:
        return (self.circles, tuple(s.sort_key() for s in self.surfaces))


class IndexDescriptor(BaseModel):
    """
    Pointed homotopy type of a surface Conley index, in normal form.

    ``base`` is the wedge cluster containing the basepoint; ``detached`` are
    disjoint clusters (an attractor index is its block plus a separate
    basepoint, recorded as one detached cluster and a point base).
    """

    model_config = ConfigDict(frozen=True)

    base: Cluster = Field(default_factory=Cluster)
    detached: tuple[Cluster, ...] = ()

    @field_validator("detached")
    @classmethod
    def sort_detached(cls, v: tuple[Cluster, ...]) -> tuple[Cluster, ...]:
        return tuple(sorted(v, key=Cluster.sort_key))

    @classmethod
    def trivial(cls) -> "IndexDescriptor":
        return cls()

    @classmethod
    def wedge_of_circles(cls, k: int) -> "IndexDescriptor":
        return cls(base=Cluster(circles=k))

    @property
    def circles(self) -> int:
        return self.base.circles + sum(c.circles for c in self.detached)

    @property
    def surfaces(self) -> tuple[SurfaceSummand, ...]:
        found = list(self.base.surfaces)
        for cluster in self.detached:
            found.extend(cluster.surfaces)
        return tuple(sorted(found, key=SurfaceSummand.sort_key))

    @property
    def extra_components(self) -> int:
        return len(self.detached)

    @property
    def is_trivial(self) -> bool:
        return self.base.is_point and not self.detached

    def euler_characteristic(self) -> int:
        """Euler characteristic relative to the basepoint (the fixed-point index)."""
        return sum(1 + c.reduced_euler() for c in self.detached) + self.base.reduced_euler()

    def reduced_betti(self) -> tuple[int, int, int]:
        """Reduced Z2 cohomology dims, equal to the cohomology index."""
        return (
            self.extra_components,
            self.circles + sum(s.beta1 for s in self.surfaces),
            len(self.surfaces),
        )

    def label(self) -> str:
        if not self.detached:
            return self.base.label()
        pieces = [f"({c.label()})" for c in self.detached]
        pieces.append("{•}" if self.base.is_point else f"({self.base.label()})")
        return " ⊔ ".join(pieces)


# ============================================================================
# REPORTS
# ============================================================================

class FixedPointFreeReport(BaseModel):
    """Admissible invariant sets when the flow has no fixed points in the block."""

    orientable: bool
    block_surface: str
    admissible: list[str]


class ClassificationReport(BaseModel):
    """
    Full classification of a block.

    Invariants: fp_index equals the reduced Euler characteristic of the
    index; a mixed index has no surfaces and no detached clusters.
    """

    name: str
    dynamics_type: DynamicsType
    case: str = Field(..., description="Which classification case applied")
    beta1_K: int = Field(..., ge=0)
    u: int = Field(..., ge=0)
    u_c: int = Field(..., ge=0)
    orientable: bool
    index: IndexDescriptor
    index_label: str
    shape: str
    fp_index: int
    forces_fixed_point: bool
    non_saddle: bool
    regularization_cuts: int = Field(0, ge=0)
    notes: list[str] = Field(default_factory=list)
    fixed_point_free_classification: Optional[FixedPointFreeReport] = None

    @model_validator(mode="after")
    def validate_consistency(self) -> "ClassificationReport":
        if self.fp_index != self.index.euler_characteristic():
            raise ValueError("fp_index must equal the Euler characteristic of the index")
        if self.dynamics_type == DynamicsType.MIXED and (self.index.surfaces or self.index.detached):
            raise ValueError("mixed index is a wedge of circles")
        return self


class RingReport(BaseModel):
    """Cohomology index, intersection form and the index they determine."""

    name: str
    cohomology: CohomologyIndex
    form: IntersectionForm
    dynamics_type: DynamicsType
    index: IndexDescriptor
    index_label: str
    orientable: Optional[bool] = Field(None, description="Surface summand orientability (repellers)")
    implied_u: Optional[int] = Field(None, description="Initial-section components implied for repellers")
    implied_beta1_K: int


class FixedPointReport(BaseModel):
    fp_index: int
    forces_fixed_point: bool


class MinimalReport(BaseModel):
    """Statement for a minimal invariant set, refined by its shape."""

    statement: str = "fixed point or limit cycle"
    refined: str
    beta1_K: int


class DualityReport(BaseModel):
    name: str
    u_c: int
    s_c: int
    forward: Optional[DynamicsType] = None
    reverse: Optional[DynamicsType] = None
    forward_index: Optional[str] = None
    reverse_index: Optional[str] = None
    violations: list[str] = Field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations


class ShapeReport(BaseModel):
    """Shape of K from the regular block, with the disk rule."""

    name: str
    beta1_K: int
    beta1_N: int
    bound_holds: bool
    shape: str
    trivial_shape: bool
    forced_fixed_point: bool
    note: Optional[str] = None


# ============================================================================
# CONTINUATION
# ============================================================================

class ComponentSummary(BaseModel):
    """Shape and section data of one isolated invariant set."""

    model_config = ConfigDict(extra="forbid")

    beta1: int = Field(..., ge=0)
    u: int = Field(..., ge=0)
    u_c: int = Field(..., ge=0)
    dynamics_type: DynamicsType
    orientable: bool = True

    @model_validator(mode="after")
    def validate_counts(self) -> "ComponentSummary":
        if self.u_c > self.u:
            raise ValueError("u_c cannot exceed u")
        return self

    @classmethod
    def from_report(cls, report: ClassificationReport) -> "ComponentSummary":
        return cls(
            beta1=report.beta1_K,
            u=report.u,
            u_c=report.u_c,
            dynamics_type=report.dynamics_type,
            orientable=report.orientable,
        )


class ContinuationFile(BaseModel):
    """File holding the components of K_lambda."""

    model_config = ConfigDict(extra="forbid")

    components: list[ComponentSummary]


class ClauseViolation(BaseModel):
    clause: str
    message: str


class ContinuationReport(BaseModel):
    """All violated clauses, in evaluation order."""

    k0: ComponentSummary
    components: list[ComponentSummary]
    shares_block: bool
    violations: list[ClauseViolation] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> Optional[str]:
        return self.violations[0].clause if self.violations else None

