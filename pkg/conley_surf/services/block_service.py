"""
Isolating block service: validation, census, time reversal and summaries.

Provides:
- Report-valued validation of every block invariant
- Exit/entrance component extraction and the regularity obstruction
- Exit census (u, u_c, s, s_c, beta1, obstruction)
- Reversal of the flow direction
- Initial-section census
"""

from typing import Iterable, Optional

import networkx as nx
from loguru import logger

from conley_surf.core.exceptions import InvalidBlockError
from conley_surf.models.block import (
    BlockSummary,
    BoundaryComponent,
    CircleLabels,
    ComponentKind,
    ExitCensus,
    IsolatingBlock,
    Marking,
    MarkingComponent,
    SectionCensus,
    SectionKind,
    SectionPiece,
    ValidationReport,
    Violation,
)
from conley_surf.models.surface import BoundaryCircle, Edge
from conley_surf.services.surface_complex import boundary_circles, is_connected, signature
from conley_surf.services.z2_homology import betti_z2


# ============================================================================
# Boundary Components
# ============================================================================

def _components_on_side(b: IsolatingBlock, labeled: frozenset[Edge]) -> list[BoundaryComponent]:
    """Maximal runs of ``labeled`` edges along each boundary circle."""
    components: list[BoundaryComponent] = []
    for circle in boundary_circles(b.complex):
        vs = circle.vertices
        n = len(vs)
        flags = [edge in labeled for edge in circle.edges]
        if all(flags):
            components.append(BoundaryComponent(kind=ComponentKind.CIRCLE, vertices=vs))
            continue
        if not any(flags):
            continue
        # Rotate so the walk starts right after an unlabeled edge
        start = next(i for i in range(n) if not flags[i - 1] and flags[i])
        run: list[int] = []
        for step in range(n + 1):
            i = (start + step) % n
            if step < n and flags[i]:
                if not run:
                    run.append(vs[i])
                run.append(vs[(i + 1) % n])
            elif run:
                if run[-1] < run[0]:
                    run.reverse()
                components.append(BoundaryComponent(kind=ComponentKind.INTERVAL, vertices=tuple(run)))
                run = []
    components.sort(key=lambda comp: (min(comp.vertices), comp.kind.value))
    return components


def exit_components(b: IsolatingBlock) -> list[BoundaryComponent]:
    """Components of the exit set, ordered by smallest vertex id."""
    return _components_on_side(b, b.exit_set)


def entrance_components(b: IsolatingBlock) -> list[BoundaryComponent]:
    """Components of the entrance set, ordered by smallest vertex id."""
    return _components_on_side(b, frozenset(b.entrance_edges))


def marking_components(b: IsolatingBlock, marking: Marking) -> list[MarkingComponent]:
    """Points, arcs and whole circles of a marking, ordered by smallest vertex."""
    graph = nx.Graph()
    graph.add_nodes_from(marking.vertices)
    graph.add_edges_from(marking.edges)
    circles = {frozenset(c.vertices): c for c in boundary_circles(b.complex)}

    pieces: list[MarkingComponent] = []
    for nodes in nx.connected_components(graph):
        sub = graph.subgraph(nodes)
        if len(nodes) == 1:
            pieces.append(MarkingComponent(kind=ComponentKind.POINT, vertices=tuple(nodes)))
        elif frozenset(nodes) in circles and sub.number_of_edges() == len(nodes):
            pieces.append(MarkingComponent(kind=ComponentKind.CIRCLE, vertices=circles[frozenset(nodes)].vertices))
        else:
            ends = sorted(v for v in nodes if sub.degree(v) == 1)
            order = nx.shortest_path(sub, ends[0], ends[-1]) if len(ends) >= 2 else sorted(nodes)
            pieces.append(MarkingComponent(kind=ComponentKind.ARC, vertices=tuple(order)))
    pieces.sort(key=lambda p: min(p.vertices))
    return pieces


def gap_components(b: IsolatingBlock) -> list[tuple[frozenset[Edge], bool]]:
    """
    Components of (exit set - n_minus).

    Gap edges are exit edges outside n_minus; two of them are joined when they
    share a vertex outside n_minus.

    Returns:
        (edges, touches_corner) per component
    """
    removed = b.n_minus.vertex_set
    gap_edges = [e for e in b.exit_edges if e not in b.n_minus.edge_set]
    graph = nx.Graph()
    graph.add_nodes_from(gap_edges)
    by_vertex: dict[int, list[Edge]] = {}
    for e in gap_edges:
        for v in e:
            if v not in removed:
                by_vertex.setdefault(v, []).append(e)
    for incident in by_vertex.values():
        for other in incident[1:]:
            graph.add_edge(incident[0], other)

    result = []
    for comp in nx.connected_components(graph):
        open_vertices = {v for e in comp for v in e if v not in removed}
        result.append((frozenset(comp), bool(open_vertices & b.corners)))
    result.sort(key=lambda item: min(item[0]))
    return result


def obstruction(b: IsolatingBlock) -> int:
    """Gap components of (exit set - n_minus) that touch no corner."""
    return sum(1 for _, touches in gap_components(b) if not touches)


def circle_of(b: IsolatingBlock, v: int) -> Optional[BoundaryCircle]:
    """Boundary circle through a vertex."""
    return next((c for c in boundary_circles(b.complex) if v in c), None)


# ============================================================================
# Validation
# ============================================================================

def _check_marking(
    b: IsolatingBlock,
    marking: Marking,
    label: str,
    side_edges: frozenset[Edge],
    side_vertices: frozenset[int],
) -> Iterable[Violation]:
    c = b.complex
    for v in marking.vertices:
        if v < 0 or v >= c.vertex_count:
            yield Violation(code=f"{label}_unknown_vertex", message=f"{label} vertex {v} not in complex", location=[v])
        elif v not in side_vertices:
            yield Violation(code=f"{label}_wrong_side", message=f"{label} vertex {v} is not on the {'exit' if label == 'n_minus' else 'entrance'} set", location=[v])
    for a, w in marking.edges:
        if (a, w) not in side_edges:
            yield Violation(code=f"{label}_wrong_side", message=f"{label} edge {[a, w]} is not on the {'exit' if label == 'n_minus' else 'entrance'} set", location=[a, w])
        for v in (a, w):
            if v not in marking.vertex_set:
                yield Violation(code=f"{label}_not_closed", message=f"{label} edge {[a, w]} lacks endpoint {v}", location=[v])


def _check_spines(b: IsolatingBlock) -> Iterable[Violation]:
    c = b.complex
    used: dict[int, int] = {}
    for index, spine in enumerate(b.spines):
        path = spine.path
        tag = f"spine {index} {list(path)}"
        if any(v < 0 or v >= c.vertex_count for v in path):
            yield Violation(code="spine_unknown_vertex", message=f"{tag} uses an unknown vertex", location=list(path))
            continue
        if len(set(path)) != len(path):
            yield Violation(code="spine_not_simple", message=f"{tag} is not simple", location=list(path))
        start, end = path[0], path[-1]
        if start not in b.exit_vertices or start in b.n_minus.vertex_set or start in b.corners:
            yield Violation(code="spine_bad_start", message=f"{tag} must start on exit - n_minus away from corners", location=[start])
        if end not in b.entrance_vertices or end in b.n_plus.vertex_set or end in b.corners:
            yield Violation(code="spine_bad_end", message=f"{tag} must end on entrance - n_plus away from corners", location=[end])
        for v in path[1:-1]:
            if c.is_boundary_vertex(v):
                yield Violation(code="spine_touches_boundary", message=f"{tag} inner vertex {v} is on the boundary", location=[v])
        for a, w in zip(path, path[1:]):
            if not c.has_edge(a, w):
                yield Violation(code="spine_missing_edge", message=f"{tag} edge {[a, w]} not in complex", location=[a, w])
            elif not c.is_interior_edge(a, w):
                yield Violation(code="spine_boundary_edge", message=f"{tag} edge {[a, w]} lies on the boundary", location=[a, w])
        for v in set(path):
            if v in used:
                yield Violation(code="spines_not_disjoint", message=f"{tag} meets spine {used[v]} at {v}", location=[v])
            used[v] = index


def validate(b: IsolatingBlock) -> ValidationReport:
    """
    Check every block invariant.

    Never raises for block content; each violation carries the vertex ids
    involved.
    """
    c = b.complex
    violations: list[Violation] = []

    if not is_connected(c):
        violations.append(Violation(code="disconnected", message="Block surface is not connected"))
    if not c.boundary_edges:
        violations.append(Violation(code="empty_boundary", message="Block surface has no boundary"))

    for a, w in b.exit_edges:
        if (a, w) not in c.boundary_edges:
            violations.append(Violation(code="exit_not_boundary", message=f"Exit edge {[a, w]} is not a boundary edge", location=[a, w]))

    entrance = frozenset(b.entrance_edges)
    violations.extend(_check_marking(b, b.n_minus, "n_minus", b.exit_set, b.exit_vertices))
    violations.extend(_check_marking(b, b.n_plus, "n_plus", entrance, b.entrance_vertices))
    for v in sorted(b.n_minus.vertex_set & b.n_plus.vertex_set):
        violations.append(Violation(code="markings_overlap", message=f"Vertex {v} is in both n_minus and n_plus", location=[v]))

    if c.boundary_edges:
        for comp in exit_components(b):
            if not set(comp.vertices) & b.n_minus.vertex_set:
                violations.append(Violation(code="exit_without_n_minus", message=f"Exit {comp.kind.value} {list(comp.vertices)} contains no n_minus component", location=list(comp.vertices)))
        for comp in entrance_components(b):
            if not set(comp.vertices) & b.n_plus.vertex_set:
                violations.append(Violation(code="entrance_without_n_plus", message=f"Entrance {comp.kind.value} {list(comp.vertices)} contains no n_plus component", location=list(comp.vertices)))
        violations.extend(_check_spines(b))

    report = ValidationReport(name=b.name, violations=violations)
    logger.debug(f"validate '{b.name}': {len(violations)} violation(s)")
    return report


def require_valid(b: IsolatingBlock) -> None:
    """
    Raises:
        InvalidBlockError: With the violation list, if the block is invalid
    """
    report = validate(b)
    if not report.valid:
        raise InvalidBlockError(f"Block '{b.name}' is invalid", violations=report.messages())


# ============================================================================
# Census and Reversal
# ============================================================================

def reverse(b: IsolatingBlock) -> IsolatingBlock:
    """
    Reverse the flow: swap exit/entrance and n_minus/n_plus, reverse spines.

    Raises:
        InvalidBlockError: If the block is invalid
    """
    require_valid(b)
    return _reverse_unchecked(b)


def _reverse_unchecked(b: IsolatingBlock) -> IsolatingBlock:
    return b.with_updates(
        exit_edges=b.entrance_edges,
        n_minus=b.n_plus,
        n_plus=b.n_minus,
        spines=tuple(s.reversed() for s in b.spines),
    )


def census(b: IsolatingBlock) -> ExitCensus:
    """
    Exit census of a valid block.

    Raises:
        InvalidBlockError: If the block is invalid
    """
    require_valid(b)
    exits = exit_components(b)
    entrances = entrance_components(b)
    result = ExitCensus(
        u=len(exits),
        u_c=sum(1 for comp in exits if comp.is_interval),
        s=len(entrances),
        s_c=sum(1 for comp in entrances if comp.is_interval),
        beta1_N=betti_z2(b.complex)[1],
        obstruction=obstruction(b),
    )
    if result.u_c != result.s_c:
        # Exit and entrance intervals alternate on every circle with corners
        raise InvalidBlockError(f"Block '{b.name}' has {result.u_c} exit but {result.s_c} entrance intervals")
    return result


def section_census(b: IsolatingBlock) -> SectionCensus:
    """
    Initial-part pieces swept by n_minus.

    A point sweeps a half-open ray, an arc a strip and a circle a cylinder.

    Raises:
        InvalidBlockError: If the block is invalid
    """
    require_valid(b)
    kinds = {
        ComponentKind.POINT: SectionKind.HALF_OPEN_RAY,
        ComponentKind.ARC: SectionKind.STRIP,
        ComponentKind.CIRCLE: SectionKind.CYLINDER,
    }
    pieces = [SectionPiece(component=comp, kind=kinds[comp.kind]) for comp in marking_components(b, b.n_minus)]
    return SectionCensus(name=b.name, pieces=pieces)


def circle_labels(b: IsolatingBlock) -> list[CircleLabels]:
    """Exit ('o') / entrance ('i') label string per boundary circle."""
    return [
        CircleLabels(
            vertices=circle.vertices,
            labels="".join("o" if edge in b.exit_set else "i" for edge in circle.edges),
        )
        for circle in boundary_circles(b.complex)
    ]


def describe(b: IsolatingBlock) -> BlockSummary:
    """Name, counts, signature, census, corners and circle labels."""
    return BlockSummary(
        name=b.name,
        counts=b.complex.counts,
        signature=signature(b.complex),
        census=census(b),
        corners=sorted(b.corners),
        circles=circle_labels(b),
        spines=len(b.spines),
    )


def spines_starting_in(b: IsolatingBlock, vertices: Iterable[int]) -> list[int]:
    """Indices of spines whose exit endpoint lies in ``vertices``, in file order."""
    wanted = set(vertices)
    return [i for i, s in enumerate(b.spines) if s.start in wanted]
