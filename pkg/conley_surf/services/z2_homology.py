"""
Z2 simplicial cohomology of pairs, cup products and the intersection form.

Cochains live on the simplices of the complex that are not in the
subcomplex; a face lying in the subcomplex contributes nothing to a
coboundary. With ``D_k`` the coboundary matrix from k-cochains to
(k+1)-cochains:

    dim H^k = dim C^k - rank D_k - rank D_{k-1}

Representatives are chosen by elimination pivot order on the vertex-id
order, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from loguru import logger
from pydantic import BaseModel, ConfigDict

from conley_surf.core.exceptions import HomologyError, NotACocycleError, NotASubcomplexError
from conley_surf.models.homology_schemas import CohomologyIndex, IntersectionForm
from conley_surf.models.surface import Edge, SurfaceComplex, Triangle, edge_key, triangle_edges
from conley_surf.utils.gf2 import EchelonForm, Gf2Matrix


# ============================================================================
# Subcomplex Selector
# ============================================================================

class Subcomplex(BaseModel):
    """
    Closed subcomplex of a surface, given by its simplices.

    Triangles are stored with sorted vertices.
    """

    model_config = ConfigDict(frozen=True)

    vertices: frozenset[int] = frozenset()
    edges: frozenset[Edge] = frozenset()
    triangles: frozenset[Triangle] = frozenset()

    @classmethod
    def empty(cls) -> "Subcomplex":
        return cls()

    @classmethod
    def closure_of_edges(cls, edges: Iterable[Sequence[int]], vertices: Iterable[int] = ()) -> "Subcomplex":
        """Edges plus their endpoints plus any extra vertices."""
        keyed = frozenset(edge_key(a, b) for a, b in edges)
        return cls(vertices=frozenset(vertices) | {v for e in keyed for v in e}, edges=keyed)

    @classmethod
    def boundary_of(cls, c: SurfaceComplex) -> "Subcomplex":
        return cls(vertices=c.boundary_vertices, edges=c.boundary_edges)

    @classmethod
    def whole(cls, c: SurfaceComplex) -> "Subcomplex":
        return cls(
            vertices=frozenset(range(c.vertex_count)),
            edges=frozenset(c.edges),
            triangles=frozenset(c.sorted_triangles),
        )

    def check_in(self, c: SurfaceComplex) -> None:
        """
        Raises:
            NotASubcomplexError: If a simplex is missing from ``c`` or a face is missing here
        """
        for v in self.vertices:
            if v < 0 or v >= c.vertex_count:
                raise NotASubcomplexError(f"Vertex {v} not in complex", vertex=v)
        for a, b in self.edges:
            if not c.has_edge(a, b):
                raise NotASubcomplexError(f"Edge {[a, b]} not in complex", edge=[a, b])
            if a not in self.vertices or b not in self.vertices:
                raise NotASubcomplexError(f"Edge {[a, b]} lacks an endpoint", edge=[a, b])
        known = set(c.sorted_triangles)
        for tri in self.triangles:
            if tri not in known:
                raise NotASubcomplexError(f"Triangle {list(tri)} not in complex", triangle=list(tri))
            if any(e not in self.edges for e in triangle_edges(tri)):
                raise NotASubcomplexError(f"Triangle {list(tri)} lacks an edge", triangle=list(tri))


# ============================================================================
# Cochain Complex
# ============================================================================

@dataclass
class CochainComplex:
    """
    Z2 cochains on an explicit list of simplices.

    Faces absent from the lists are treated as zero, which gives relative
    cochains when the lists omit a subcomplex.
    """

    vertices: list[int]
    edges: list[Edge]
    triangles: list[Triangle]
    _vertex_index: dict[int, int] = field(init=False, repr=False)
    _edge_index: dict[Edge, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self._edge_index = {e: i for i, e in enumerate(self.edges)}

    @classmethod
    def relative(cls, c: SurfaceComplex, sub: Subcomplex) -> "CochainComplex":
        return cls(
            vertices=[v for v in range(c.vertex_count) if v not in sub.vertices],
            edges=[e for e in c.edges if e not in sub.edges],
            triangles=sorted(t for t in c.sorted_triangles if t not in sub.triangles),
        )

    @classmethod
    def of_subcomplex(cls, sub: Subcomplex) -> "CochainComplex":
        return cls(vertices=sorted(sub.vertices), edges=sorted(sub.edges), triangles=sorted(sub.triangles))

    def dims(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.triangles)

    @cached_property
    def d0(self) -> Gf2Matrix:
        """Coboundary C^0 -> C^1 (rows: edges, cols: vertices)."""
        supports = [[self._vertex_index[v] for v in e if v in self._vertex_index] for e in self.edges]
        return Gf2Matrix.from_supports(supports, cols=len(self.vertices))

    @cached_property
    def d1(self) -> Gf2Matrix:
        """Coboundary C^1 -> C^2 (rows: triangles, cols: edges)."""
        supports = [
            [self._edge_index[e] for e in triangle_edges(t) if e in self._edge_index]
            for t in self.triangles
        ]
        return Gf2Matrix.from_supports(supports, cols=len(self.edges))

    @cached_property
    def coboundaries1(self) -> EchelonForm:
        """Row space B^1 = image of d0."""
        return self.d0.transpose().echelon()

    @cached_property
    def coboundaries2(self) -> EchelonForm:
        """Row space B^2 = image of d1."""
        return self.d1.transpose().echelon()

    @cached_property
    def ranks(self) -> tuple[int, int]:
        return self.d0.rank(), self.d1.rank()

    def betti(self) -> tuple[int, int, int]:
        n0, n1, n2 = self.dims()
        r0, r1 = self.ranks
        return n0 - r0, n1 - r1 - r0, n2 - r1

    def cocycles(self, k: int) -> Gf2Matrix:
        """Basis of Z^k as rows."""
        if k == 0:
            return self.d0.nullspace()
        if k == 1:
            return self.d1.nullspace()
        return Gf2Matrix.identity(len(self.triangles))

    def coboundary_space(self, k: int) -> Optional[EchelonForm]:
        if k == 1:
            return self.coboundaries1
        if k == 2:
            return self.coboundaries2
        return None

    def edge_position(self, e: Edge) -> Optional[int]:
        return self._edge_index.get(e)


# ============================================================================
# Relative Cohomology
# ============================================================================

@dataclass
class RelativeCohomology:
    """
    Cohomology of a pair with explicit bases.

    Attributes:
        index: The three dimensions
        h1_basis: Rows are relative 1-cocycles whose classes form a basis,
            in reduced echelon form against the coboundaries
        h2_basis: Rows are unit 2-cochains whose classes form a basis
        cochains: The underlying relative cochain complex
    """

    complex: SurfaceComplex
    sub: Subcomplex
    index: CohomologyIndex
    h1_basis: Gf2Matrix
    h2_basis: Gf2Matrix
    cochains: CochainComplex
    _h1_echelon: EchelonForm = field(repr=False)

    @property
    def edges(self) -> list[Edge]:
        return self.cochains.edges

    @property
    def triangles(self) -> list[Triangle]:
        return self.cochains.triangles

    def cochain(self, edges: Iterable[Sequence[int]]) -> Gf2Matrix:
        """
        1-cochain with value 1 on the given edges.

        Raises:
            NotACocycleError: If an edge lies in the subcomplex
        """
        support = []
        for a, b in edges:
            position = self.cochains.edge_position(edge_key(a, b))
            if position is None:
                raise NotACocycleError(f"Edge {[a, b]} is in the subcomplex", edge=[a, b])
            support.append(position)
        return Gf2Matrix.from_supports([support], cols=len(self.edges))

    def check_cocycle(self, alpha: Gf2Matrix) -> None:
        if alpha.cols != len(self.edges) or alpha.rows != 1:
            raise NotACocycleError(f"Expected a 1x{len(self.edges)} cochain, got {alpha.rows}x{alpha.cols}")
        if not (self.cochains.d1 @ alpha.transpose()).is_zero():
            raise NotACocycleError("Cochain is not a relative cocycle")

    def h1_coordinates(self, alpha: Gf2Matrix) -> tuple[int, ...]:
        """Coordinates of the class of a 1-cocycle in ``h1_basis``."""
        self.check_cocycle(alpha)
        residue = self.cochains.coboundaries1.reduce(alpha)
        return tuple(residue[0, p] for p in self._h1_echelon.pivots)

    def h2_coordinates(self, gamma: Gf2Matrix) -> tuple[int, ...]:
        """Coordinates of the class of a 2-cochain in ``h2_basis``."""
        ech = self.cochains.coboundaries2
        residue = ech.reduce(gamma)
        return tuple(residue[0, f] for f in ech.free_columns())

    def cup_cochain(self, alpha: Gf2Matrix, beta: Gf2Matrix) -> Gf2Matrix:
        """
        Simplicial cup product of two 1-cocycles.

        Value on [v0 < v1 < v2] is alpha([v0, v1]) * beta([v1, v2]).
        """
        self.check_cocycle(alpha)
        self.check_cocycle(beta)
        a = alpha.to_dense()[0]
        b = beta.to_dense()[0]
        values = []
        for v0, v1, v2 in self.triangles:
            first = self.cochains.edge_position((v0, v1))
            second = self.cochains.edge_position((v1, v2))
            x = a[first] if first is not None else 0
            y = b[second] if second is not None else 0
            values.append(int(x) & int(y))
        return Gf2Matrix.from_dense([values], cols=len(self.triangles))

    def cup(self, alpha: Gf2Matrix, beta: Gf2Matrix) -> tuple[int, ...]:
        """H^2 coordinates of the class of alpha cup beta."""
        return self.h2_coordinates(self.cup_cochain(alpha, beta))


def relative_cohomology(c: SurfaceComplex, sub: Optional[Subcomplex] = None) -> RelativeCohomology:
    """
    Compute H^k(c, sub; Z2) for k = 0, 1, 2 with cocycle bases.

    Args:
        c: Surface complex
        sub: Closed subcomplex, empty when omitted

    Raises:
        NotASubcomplexError: If ``sub`` is not a closed subcomplex of ``c``
    """
    sub = sub or Subcomplex.empty()
    sub.check_in(c)
    cochains = CochainComplex.relative(c, sub)
    dim0, dim1, dim2 = cochains.betti()

    z1 = cochains.cocycles(1)
    residues = cochains.coboundaries1.reduce(z1)
    h1_echelon = residues.echelon()
    h1_basis = h1_echelon.matrix
    if h1_basis.rows != dim1:
        raise HomologyError(f"H^1 basis has {h1_basis.rows} classes, expected {dim1}")

    free = cochains.coboundaries2.free_columns()
    h2_basis = Gf2Matrix.from_supports([[f] for f in free], cols=len(cochains.triangles))
    if h2_basis.rows != dim2:
        raise HomologyError(f"H^2 basis has {h2_basis.rows} classes, expected {dim2}")

    logger.debug(
        f"H*(c, sub): cochain dims {cochains.dims()}, ranks {cochains.ranks}, result {(dim0, dim1, dim2)}"
    )
    return RelativeCohomology(
        complex=c,
        sub=sub,
        index=CohomologyIndex(dim0=dim0, dim1=dim1, dim2=dim2),
        h1_basis=h1_basis,
        h2_basis=h2_basis,
        cochains=cochains,
        _h1_echelon=h1_echelon,
    )


def cup_product(
    c: SurfaceComplex,
    sub: Optional[Subcomplex],
    alpha: Gf2Matrix,
    beta: Gf2Matrix,
) -> tuple[int, ...]:
    """
    Class of alpha cup beta in H^2(c, sub), as coordinates.

    Raises:
        NotACocycleError: If alpha or beta is not a relative 1-cocycle
    """
    return relative_cohomology(c, sub).cup(alpha, beta)


def form_of(rc: RelativeCohomology) -> IntersectionForm:
    """
    Intersection form on an already computed cohomology.

    Raises:
        HomologyError: If the cup product is not symmetric on the H^1 basis
    """
    n = rc.h1_basis.rows
    rows = [rc.h1_basis.row(i) for i in range(n)]
    matrix = [[0] * n for _ in range(n)]
    if rc.index.dim2 > 0:
        for i in range(n):
            for j in range(n):
                # Evaluated against the sum of H^2 coordinates (the fundamental class when connected)
                matrix[i][j] = sum(rc.cup(rows[i], rows[j])) % 2
    asymmetric = [(i, j) for i in range(n) for j in range(i + 1, n) if matrix[i][j] != matrix[j][i]]
    if asymmetric:
        raise HomologyError(
            f"Cup product is not symmetric on basis pairs {asymmetric}",
            code="ASYMMETRIC_CUP_PRODUCT",
            pairs=asymmetric,
        )
    gf2 = Gf2Matrix.from_dense(matrix, cols=n)
    return IntersectionForm(
        basis_size=n,
        matrix=tuple(tuple(row) for row in matrix),
        rank=gf2.rank(),
        has_self_square=any(matrix[i][i] for i in range(n)),
    )


def intersection_form(c: SurfaceComplex, sub: Optional[Subcomplex] = None) -> IntersectionForm:
    """
    Cup-product form on H^1(c, sub).

    Squaring is linear over Z2, so a nonzero self-square exists exactly
    when some basis class squares to a nonzero class.
    """
    return form_of(relative_cohomology(c, sub))


def betti_z2(c: SurfaceComplex) -> tuple[int, int, int]:
    """Absolute Z2 Betti numbers (b0, b1, b2)."""
    return CochainComplex.relative(c, Subcomplex.empty()).betti()


def _restriction_ranks(c: SurfaceComplex, sub: Subcomplex) -> tuple[int, int, int]:
    """Ranks of H^k(c) -> H^k(sub) for k = 0, 1, 2."""
    whole = CochainComplex.relative(c, Subcomplex.empty())
    part = CochainComplex.of_subcomplex(sub)
    triangle_at = {t: i for i, t in enumerate(whole.triangles)}
    positions = [
        [whole._vertex_index[v] for v in part.vertices],
        [whole._edge_index[e] for e in part.edges],
        [triangle_at[t] for t in part.triangles],
    ]
    ranks = []
    for k in range(3):
        restricted = whole.cocycles(k).take_columns(positions[k])
        boundaries = part.coboundary_space(k)
        if boundaries is None:
            ranks.append(restricted.rank())
            continue
        stacked = Gf2Matrix.vstack([restricted, boundaries.matrix], cols=restricted.cols)
        ranks.append(stacked.rank() - boundaries.rank)
    return ranks[0], ranks[1], ranks[2]


def relative_dims_via_exact_sequence(c: SurfaceComplex, sub: Subcomplex) -> CohomologyIndex:
    """
    dim H^k(c, sub) from the long exact sequence of the pair.

    dim H^k(c, sub) = (dim H^{k-1}(sub) - rank r_{k-1}) + (dim H^k(c) - rank r_k)
    where r_k is restriction H^k(c) -> H^k(sub).
    """
    sub.check_in(c)
    absolute = betti_z2(c)
    partial = CochainComplex.of_subcomplex(sub).betti()
    r = _restriction_ranks(c, sub)
    dims = []
    for k in range(3):
        cokernel = partial[k - 1] - r[k - 1] if k > 0 else 0
        dims.append(cokernel + absolute[k] - r[k])
    return CohomologyIndex(dim0=dims[0], dim1=dims[1], dim2=dims[2])
