"""
Topological operations on triangulated surfaces.

Provides:
- Euler characteristic, boundary circles, connectivity and orientability
- Topological signature (classification of compact surfaces)
- Surgery: cutting along a properly embedded arc, capping boundary circles,
  edge subdivision

Every operation is a pure function of immutable ``SurfaceComplex`` values.
"""

from collections import deque
from typing import Optional, Sequence

import networkx as nx
from loguru import logger
from pydantic import BaseModel, ConfigDict

from conley_surf.core.exceptions import (
    DisconnectedError,
    InconsistentDataError,
    MissingEdgeError,
    NotABoundaryCircleError,
    NotProperlyEmbeddedError,
)
from conley_surf.models.surface import (
    BoundaryCircle,
    Edge,
    SurfaceComplex,
    TopSignature,
    edge_key,
)


# ============================================================================
# Counting and Connectivity
# ============================================================================

def euler_characteristic(c: SurfaceComplex) -> int:
    """V - E + F."""
    v, e, f = c.counts
    return v - e + f


def boundary_circles(c: SurfaceComplex) -> list[BoundaryCircle]:
    """
    Extract the boundary circles of a complex.

    Each boundary vertex has exactly two boundary edges (its link is a path),
    so the boundary graph is a disjoint union of cycles. Circles are returned
    in ascending order of their smallest vertex; each starts at that vertex and
    proceeds toward its smaller boundary neighbour.

    Args:
        c: Valid surface complex

    Returns:
        Boundary circles, empty for a closed surface
    """
    graph = nx.Graph()
    graph.add_edges_from(c.boundary_edges)

    circles: list[BoundaryCircle] = []
    for component in nx.connected_components(graph):
        start = min(component)
        previous, current = start, min(graph.neighbors(start))
        walk = [start]
        while current != start:
            walk.append(current)
            previous, current = current, next(w for w in graph.neighbors(current) if w != previous)
        circles.append(BoundaryCircle(vertices=tuple(walk)))

    circles.sort(key=lambda circle: circle.vertices[0])
    return circles


def connected_components(c: SurfaceComplex) -> list[set[int]]:
    """Vertex sets of the connected components."""
    return [set(comp) for comp in nx.connected_components(c.skeleton())]


def is_connected(c: SurfaceComplex) -> bool:
    if c.vertex_count == 0:
        return False
    return nx.is_connected(c.skeleton())


# ============================================================================
# Orientability
# ============================================================================

def _edge_direction(tri: Sequence[int], a: int, b: int) -> int:
    """+1 if a->b follows the cyclic order of ``tri``, else -1."""
    i = tri.index(a)
    return 1 if tri[(i + 1) % 3] == b else -1


def orientation_assignment(c: SurfaceComplex) -> Optional[list[int]]:
    """
    Propagate triangle orientations across interior edges.

    A sign ``+1`` keeps the stored vertex order of a triangle, ``-1`` reverses
    it. Two triangles sharing an edge must induce opposite directions on it.

    Returns:
        A consistent sign per triangle, or None when the surface is nonorientable
    """
    signs: list[Optional[int]] = [None] * len(c.triangles)

    for seed in range(len(c.triangles)):
        if signs[seed] is not None:
            continue
        signs[seed] = 1
        queue = deque([seed])
        while queue:
            t = queue.popleft()
            tri = c.triangles[t]
            for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                for other in c.edge_triangles[edge_key(a, b)]:
                    if other == t:
                        continue
                    wanted = -signs[t] * _edge_direction(tri, a, b) * _edge_direction(c.triangles[other], a, b)  # type: ignore[operator]
                    if signs[other] is None:
                        signs[other] = wanted
                        queue.append(other)
                    elif signs[other] != wanted:
                        return None
    return [s for s in signs if s is not None]


def is_orientable(c: SurfaceComplex) -> bool:
    return orientation_assignment(c) is not None


# ============================================================================
# Signature
# ============================================================================

def signature(c: SurfaceComplex) -> TopSignature:
    """
    Topological type of a connected surface.

    Genus is derived from chi, the boundary count and orientability.

    Raises:
        DisconnectedError: If the complex is not connected
    """
    if not is_connected(c):
        raise DisconnectedError(
            "Signature needs a connected complex",
            components=len(connected_components(c)),
        )

    chi = euler_characteristic(c)
    b = len(boundary_circles(c))
    orientable = is_orientable(c)
    genus = (2 - chi - b) // 2 if orientable else 2 - chi - b

    return TopSignature(euler=chi, orientable=orientable, genus=genus, boundary_circles=b)


# ============================================================================
# Surgery
# ============================================================================

class PathCut(BaseModel):
    """
    Result of cutting along a properly embedded arc.

    Triangle ``i`` of ``complex`` is the image of triangle ``i`` of the source.
    ``right_path`` keeps the original vertex ids; ``left_path`` holds the new
    copies, which are numbered ``n, n+1, ...`` in path order.
    """

    model_config = ConfigDict(frozen=True)

    source: SurfaceComplex
    complex: SurfaceComplex
    right_path: tuple[int, ...]
    left_path: tuple[int, ...]

    def edge_image(self, edge: Edge) -> Edge:
        """
        Image of a source edge that is not a path edge.

        Raises:
            MissingEdgeError: If the edge is not in the source complex
        """
        owners = self.source.edge_triangles.get(edge_key(*edge))
        if not owners:
            raise MissingEdgeError(f"Edge {list(edge)} not in complex", edge=edge)
        old = self.source.triangles[owners[0]]
        new = self.complex.triangles[owners[0]]
        a, b = edge
        return edge_key(new[old.index(a)], new[old.index(b)])

    def vertex_copies(self, v: int) -> tuple[int, int]:
        """(right, left) copies of a path vertex."""
        i = self.right_path.index(v)
        return self.right_path[i], self.left_path[i]


def _check_properly_embedded(c: SurfaceComplex, path: Sequence[int]) -> None:
    if len(path) < 2:
        raise NotProperlyEmbeddedError("Path needs at least one edge", path=list(path))
    if len(set(path)) != len(path):
        raise NotProperlyEmbeddedError("Path is not simple", path=list(path))
    if any(v < 0 or v >= c.vertex_count for v in path):
        raise NotProperlyEmbeddedError("Path uses an unknown vertex", path=list(path))
    for end in (path[0], path[-1]):
        if not c.is_boundary_vertex(end):
            raise NotProperlyEmbeddedError(f"Endpoint {end} is interior", path=list(path), vertex=end)
    for v in path[1:-1]:
        if c.is_boundary_vertex(v):
            raise NotProperlyEmbeddedError(f"Inner vertex {v} lies on the boundary", path=list(path), vertex=v)
    for a, b in zip(path, path[1:]):
        if not c.has_edge(a, b):
            raise MissingEdgeError(f"Path edge {[a, b]} not in complex", edge=(a, b))
        if not c.is_interior_edge(a, b):
            raise NotProperlyEmbeddedError(
                f"Path edge {[a, b]} lies on the boundary", path=list(path), edge=[a, b]
            )


def _fan_groups(c: SurfaceComplex, v: int, cut_edges: set[Edge]) -> list[set[int]]:
    """Split the fan of ``v`` into groups joined across non-cut edges."""
    graph = nx.Graph()
    graph.add_nodes_from(c.vertex_triangles[v])
    for t in c.vertex_triangles[v]:
        for w in c.triangles[t]:
            if w == v or edge_key(v, w) in cut_edges:
                continue
            for other in c.edge_triangles[edge_key(v, w)]:
                if other != t:
                    graph.add_edge(t, other)
    return [set(group) for group in nx.connected_components(graph)]


def cut_path(c: SurfaceComplex, path: Sequence[int]) -> PathCut:
    """
    Cut along a properly embedded arc and keep the vertex correspondence.

    Every path vertex and path edge is duplicated: the counts change by
    (k+1, k, 0) for a path with k edges and chi rises by one.

    Raises:
        NotProperlyEmbeddedError: If the path is not a properly embedded arc
        MissingEdgeError: If a path edge is missing
    """
    path = tuple(path)
    _check_properly_embedded(c, path)

    cut_edges = {edge_key(a, b) for a, b in zip(path, path[1:])}
    groups = {v: _fan_groups(c, v, cut_edges) for v in path}
    for v, fan in groups.items():
        if len(fan) != 2:
            raise NotProperlyEmbeddedError(
                f"Fan of {v} splits into {len(fan)} pieces", path=list(path), vertex=v
            )

    # Left group per path vertex, propagated along the path edges
    left: dict[int, set[int]] = {}
    seed = c.edge_triangles[edge_key(path[0], path[1])][0]
    left_triangle = seed
    for i, v in enumerate(path):
        left[v] = next(g for g in groups[v] if left_triangle in g)
        if i + 1 < len(path):
            pair = c.edge_triangles[edge_key(v, path[i + 1])]
            left_triangle = next(t for t in pair if t in left[v])

    n = c.vertex_count
    copy = {v: n + i for i, v in enumerate(path)}
    triangles = []
    for index, tri in enumerate(c.triangles):
        triangles.append(tuple(copy[w] if w in left and index in left[w] else w for w in tri))

    result = SurfaceComplex(vertex_count=n + len(path), triangles=triangles)
    logger.debug(f"cut along {list(path)}: counts {c.counts} -> {result.counts}")

    return PathCut(
        source=c,
        complex=result,
        right_path=path,
        left_path=tuple(copy[v] for v in path),
    )


def cut_along_path(c: SurfaceComplex, path: Sequence[int]) -> SurfaceComplex:
    """
    Cut a surface along a properly embedded arc v0..vk.

    Both copies of the path lie on the boundary of the result.
    """
    return cut_path(c, path).complex


def _find_boundary_circle(c: SurfaceComplex, circle: BoundaryCircle) -> BoundaryCircle:
    wanted = set(circle.edges)
    for candidate in boundary_circles(c):
        if set(candidate.edges) == wanted:
            return candidate
    raise NotABoundaryCircleError(
        f"{list(circle.vertices)} is not a boundary circle", circle=list(circle.vertices)
    )


def cap_boundary_circle(c: SurfaceComplex, circle: BoundaryCircle) -> SurfaceComplex:
    """
    Cone off a boundary circle with one new vertex.

    Raises:
        NotABoundaryCircleError: If ``circle`` is not a boundary circle of ``c``
    """
    found = _find_boundary_circle(c, circle)
    apex = c.vertex_count
    vs = found.vertices
    cone = [(apex, vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]
    return SurfaceComplex(vertex_count=apex + 1, triangles=list(c.triangles) + cone)


def cap_all(c: SurfaceComplex) -> SurfaceComplex:
    """Cap every boundary circle, producing a closed surface."""
    capped = c
    for circle in boundary_circles(c):
        capped = cap_boundary_circle(capped, circle)
    return capped


def capped_signature(c: SurfaceComplex) -> TopSignature:
    """
    Signature of the closed surface obtained by capping all boundary circles.

    The capped Euler characteristic equals chi(c) plus the number of circles.

    Raises:
        InconsistentDataError: If capping does not add one to chi per circle
    """
    b = len(boundary_circles(c))
    closed = cap_all(c)
    sig = signature(closed)
    if sig.euler != euler_characteristic(c) + b:
        raise InconsistentDataError(
            f"Capping {b} circle(s) gave chi {sig.euler}, expected {euler_characteristic(c) + b}",
            circles=b,
        )
    return sig


def subdivide_edge(c: SurfaceComplex, edge: Sequence[int]) -> SurfaceComplex:
    """
    Split an edge through a fresh vertex.

    Each incident triangle (a, b, x) becomes (a, m, x) and (m, b, x) with the
    vertex order otherwise preserved.

    Raises:
        MissingEdgeError: If the edge is not present
    """
    a, b = edge
    if not c.has_edge(a, b):
        raise MissingEdgeError(f"Edge {[a, b]} not in complex", edge=(a, b))

    m = c.vertex_count
    triangles: list[tuple[int, ...]] = []
    for tri in c.triangles:
        if a in tri and b in tri:
            triangles.append(tuple(m if w == b else w for w in tri))
            triangles.append(tuple(m if w == a else w for w in tri))
        else:
            triangles.append(tri)
    return SurfaceComplex(vertex_count=m + 1, triangles=triangles)
