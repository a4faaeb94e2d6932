"""
Isolating block schemas and the JSON block file format.

An ``IsolatingBlock`` is a triangulated surface whose boundary edges are
labeled exit or entrance, with closed markings for the points that leave
immediately (``n_minus``, on the exit side) and arrive immediately
(``n_plus``, on the entrance side), plus optional transit spines.

The block file is flat JSON; unknown keys are rejected and edges are written
with the smaller vertex id first.
"""

from __future__ import annotations

import json
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, ValidationInfo, field_validator

from conley_surf.core.config import get_settings
from conley_surf.core.exceptions import BlockFormatError
from conley_surf.models.surface import Edge, SurfaceComplex, TopSignature, edge_key


def _normalize_edges(edges: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
    return tuple(sorted({edge_key(int(a), int(b)) for a, b in edges}))


# ============================================================================
# ENUMS
# ============================================================================

class ComponentKind(str, Enum):
    """Shape of a boundary piece."""
    POINT = "point"
    ARC = "arc"
    INTERVAL = "interval"
    CIRCLE = "circle"


class SectionKind(str, Enum):
    """Piece of the initial part swept by a component of n_minus."""
    HALF_OPEN_RAY = "half-open ray"
    STRIP = "strip"
    CYLINDER = "cylinder"


# ============================================================================
# BLOCK DATA
# ============================================================================

class Marking(BaseModel):
    """Closed subcomplex of the boundary (vertices plus edges)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    vertices: tuple[int, ...] = ()
    edges: tuple[Edge, ...] = ()

    @field_validator("vertices", mode="before")
    @classmethod
    def sort_vertices(cls, v: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted({int(x) for x in v}))

    @field_validator("edges", mode="before")
    @classmethod
    def sort_edges(cls, v: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
        return _normalize_edges(v)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @property
    def is_empty(self) -> bool:
        return not self.vertices and not self.edges

    @classmethod
    def closure(cls, edges: Iterable[Sequence[int]] = (), vertices: Iterable[int] = ()) -> "Marking":
        """Marking containing the given edges, their endpoints and extra vertices."""
        keyed = _normalize_edges(edges)
        return cls(vertices=set(vertices) | {v for e in keyed for v in e}, edges=keyed)


class TransitSpine(BaseModel):
    """
    Interior path from an exit point to its entrance-time image.

    ``path[0]`` lies on the exit set, ``path[-1]`` on the entrance set.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    path: tuple[int, ...] = Field(..., min_length=2)

    @property
    def start(self) -> int:
        return self.path[0]

    @property
    def end(self) -> int:
        return self.path[-1]

    @property
    def edge_count(self) -> int:
        return len(self.path) - 1

    def reversed(self) -> "TransitSpine":
        return TransitSpine(path=tuple(reversed(self.path)))


class IsolatingBlock(BaseModel):
    """
    Combinatorial isolating block.

    Structural normalization happens here; the block invariants are checked
    by ``block_service.validate`` so that invalid blocks can still be loaded
    and reported on.
    """

    model_config = ConfigDict(frozen=True)

    name: str = "block"
    complex: SurfaceComplex
    exit_edges: tuple[Edge, ...] = ()
    n_minus: Marking = Field(default_factory=Marking)
    n_plus: Marking = Field(default_factory=Marking)
    spines: tuple[TransitSpine, ...] = ()
    asserts_no_fixed_points: bool = False

    @field_validator("exit_edges", mode="before")
    @classmethod
    def sort_exit_edges(cls, v: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
        return _normalize_edges(v)

    # ==================== Derived Labels ====================

    @cached_property
    def exit_set(self) -> frozenset[Edge]:
        return frozenset(self.exit_edges)

    @cached_property
    def entrance_edges(self) -> tuple[Edge, ...]:
        """Boundary edges not labeled exit."""
        return tuple(sorted(self.complex.boundary_edges - self.exit_set))

    @cached_property
    def exit_vertices(self) -> frozenset[int]:
        return frozenset(v for e in self.exit_edges for v in e)

    @cached_property
    def entrance_vertices(self) -> frozenset[int]:
        return frozenset(v for e in self.entrance_edges for v in e)

    @cached_property
    def corners(self) -> frozenset[int]:
        """Boundary vertices where the exit and entrance labels meet."""
        return self.exit_vertices & self.entrance_vertices

    def is_exit_edge(self, a: int, b: int) -> bool:
        return edge_key(a, b) in self.exit_set

    def with_updates(self, **changes: Any) -> "IsolatingBlock":
        """Copy with fields replaced and re-normalized."""
        data = {
            "name": self.name,
            "complex": self.complex,
            "exit_edges": self.exit_edges,
            "n_minus": self.n_minus,
            "n_plus": self.n_plus,
            "spines": self.spines,
            "asserts_no_fixed_points": self.asserts_no_fixed_points,
        }
        data.update(changes)
        return IsolatingBlock(**data)


# ============================================================================
# REPORTS
# ============================================================================

class Violation(BaseModel):
    """One broken block invariant."""

    code: str = Field(..., description="Stable violation identifier")
    message: str
    location: list[int] = Field(default_factory=list, description="Vertex ids involved")


class ValidationReport(BaseModel):
    """Result of ``validate``; never raised, always returned."""

    name: str
    violations: list[Violation] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def messages(self) -> list[str]:
        return [f"{v.code}: {v.message}" for v in self.violations]


class BoundaryComponent(BaseModel):
    """
    Connected piece of the exit (or entrance) set.

    An interval lists its vertices from its lower-id corner to the other
    corner; a circle lists the whole boundary circle.
    """

    model_config = ConfigDict(frozen=True)

    kind: ComponentKind
    vertices: tuple[int, ...]

    @property
    def edges(self) -> tuple[Edge, ...]:
        vs = self.vertices
        pairs = list(zip(vs, vs[1:]))
        if self.kind == ComponentKind.CIRCLE:
            pairs.append((vs[-1], vs[0]))
        return tuple(edge_key(a, b) for a, b in pairs)

    @property
    def is_interval(self) -> bool:
        return self.kind == ComponentKind.INTERVAL


class MarkingComponent(BaseModel):
    """Connected piece of n_minus or n_plus: a point, an arc, or a whole circle."""

    model_config = ConfigDict(frozen=True)

    kind: ComponentKind
    vertices: tuple[int, ...]


class ExitCensus(BaseModel):
    """
    Counts driving every classification formula.

    Attributes:
        u: Exit components
        u_c: Exit components that are intervals
        s: Entrance components
        s_c: Entrance components that are intervals
        beta1_N: First Z2 Betti number of the block surface
        obstruction: Gap components of (exit set - n_minus) touching no corner
    """

    model_config = ConfigDict(frozen=True)

    u: int = Field(..., ge=0)
    u_c: int = Field(..., ge=0)
    s: int = Field(..., ge=0)
    s_c: int = Field(..., ge=0)
    beta1_N: int = Field(..., ge=0)
    obstruction: int = Field(..., ge=0)

    @field_validator("u_c")
    @classmethod
    def check_u_c(cls, v: int, info: ValidationInfo) -> int:
        if "u" in info.data and v > info.data["u"]:
            raise ValueError("u_c cannot exceed u")
        return v

    @property
    def is_regular(self) -> bool:
        return self.obstruction == 0


class SectionPiece(BaseModel):
    component: MarkingComponent
    kind: SectionKind


class SectionCensus(BaseModel):
    """Pieces of the initial part, one per component of n_minus."""

    name: str
    pieces: list[SectionPiece] = Field(default_factory=list)

    def counts(self) -> dict[str, int]:
        tally: dict[str, int] = {}
        for piece in self.pieces:
            tally[piece.kind.value] = tally.get(piece.kind.value, 0) + 1
        return tally


class CircleLabels(BaseModel):
    """Boundary circle with a label per edge: 'o' exit, 'i' entrance."""

    vertices: tuple[int, ...]
    labels: str


class BlockSummary(BaseModel):
    """Human-facing overview shared by the census command and the schematic."""

    name: str
    counts: tuple[int, int, int]
    signature: TopSignature
    census: ExitCensus
    corners: list[int]
    circles: list[CircleLabels]
    spines: int


# ============================================================================
# FILE FORMAT
# ============================================================================

class SpineRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    path: list[int] = Field(..., min_length=2)


class MarkingRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: list[int] = Field(default_factory=list)
    edges: list[tuple[int, int]] = Field(default_factory=list)


class BlockFile(BaseModel):
    """On-disk block schema; field order is the written key order."""

    model_config = ConfigDict(extra="forbid")

    vertex_count: int = Field(..., ge=0)
    triangles: list[tuple[int, int, int]]
    exit_edges: list[tuple[int, int]] = Field(default_factory=list)
    n_minus: MarkingRecord = Field(default_factory=MarkingRecord)
    n_plus: MarkingRecord = Field(default_factory=MarkingRecord)
    spines: list[SpineRecord] = Field(default_factory=list)
    asserts_no_fixed_points: bool = False
    name: str = "block"

    @classmethod
    def from_block(cls, b: IsolatingBlock) -> "BlockFile":
        def marking(m: Marking) -> MarkingRecord:
            return MarkingRecord(vertices=list(m.vertices), edges=[tuple(e) for e in m.edges])

        return cls(
            vertex_count=b.complex.vertex_count,
            triangles=[tuple(t) for t in b.complex.triangles],
            exit_edges=[tuple(e) for e in b.exit_edges],
            n_minus=marking(b.n_minus),
            n_plus=marking(b.n_plus),
            spines=[SpineRecord(path=list(s.path)) for s in b.spines],
            asserts_no_fixed_points=b.asserts_no_fixed_points,
            name=b.name,
        )

    def to_block(self) -> IsolatingBlock:
        """
        Raises:
            InvalidComplexError: If the triangle table is not a surface
            BlockFormatError: If the complex exceeds the configured size
        """
        complex_ = SurfaceComplex(vertex_count=self.vertex_count, triangles=self.triangles)
        limit = get_settings().max_simplices
        if complex_.simplex_count > limit:
            raise BlockFormatError(
                f"Complex has {complex_.simplex_count} simplices, limit is {limit}",
                simplices=complex_.simplex_count,
            )
        return IsolatingBlock(
            name=self.name,
            complex=complex_,
            exit_edges=self.exit_edges,
            n_minus=Marking(vertices=self.n_minus.vertices, edges=self.n_minus.edges),
            n_plus=Marking(vertices=self.n_plus.vertices, edges=self.n_plus.edges),
            spines=tuple(TransitSpine(path=tuple(s.path)) for s in self.spines),
            asserts_no_fixed_points=self.asserts_no_fixed_points,
        )


def block_to_json(b: IsolatingBlock, indent: Optional[int] = None) -> str:
    """Serialize a block to the file format."""
    indent = get_settings().report_indent if indent is None else indent
    return json.dumps(BlockFile.from_block(b).model_dump(mode="json"), indent=indent or None) + "\n"


def block_from_json(text: Union[str, bytes], source: Optional[str] = None) -> IsolatingBlock:
    """
    Parse a block from JSON text.

    Raises:
        BlockFormatError: On malformed JSON, unknown keys or wrong types
        InvalidComplexError: If the triangle table is not a surface
    """
    try:
        record = BlockFile.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise BlockFormatError(
            f"Malformed block file: {where}: {first['msg']}",
            path=source,
            details=str(e),
        ) from e
    return record.to_block()


def load_block(path: Union[str, Path]) -> IsolatingBlock:
    """Read a block file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise BlockFormatError(f"Cannot read {path}: {e.strerror}", path=str(path)) from e
    return block_from_json(text, source=str(path))


def save_block(b: IsolatingBlock, path: Union[str, Path]) -> Path:
    """Write a block file, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(block_to_json(b), encoding="utf-8")
    return path
