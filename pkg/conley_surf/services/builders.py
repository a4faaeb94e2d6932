"""
Block builders: named standard blocks and a seeded random generator.

Triangle tables (chi = V - E + F, hand-checked):

- annulus(3): rings 0-1-2 and 3-4-5, 6 triangles, V=6 E=12 F=6, chi 0
- polygon_disk(8): boundary 0..7 and center 8, V=9 E=16 F=8, chi 1
- moebius_strip(): {i, i+1, i+2} mod 5, V=5 E=10 F=5, chi 0
- torus minus {0,1,3}: {i, i+1, i+3} and {i, i+2, i+3} mod 7 less one
  face, V=7 E=21 F=13, chi -1
- pants: 4x4 tube minus one middle triangle, V=16 E=40 F=23, chi -1
- sphere with four holes: 9x4 tube minus two middle triangles,
  V=36 E=90 F=52, chi -2
"""

from typing import Any, Callable, Mapping, Optional, Sequence

import networkx as nx
import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from conley_surf.core.config import get_settings
from conley_surf.core.exceptions import RecipeError, UnknownRecipeError
from conley_surf.models.block import IsolatingBlock, Marking, TransitSpine
from conley_surf.models.surface import BoundaryCircle, Edge, SurfaceComplex, TopSignature, Triangle, edge_key
from conley_surf.services.block_service import require_valid
from conley_surf.services.surface_complex import boundary_circles


# ============================================================================
# Primitive Surfaces
# ============================================================================

def band_triangles(n: int, width: int) -> list[Triangle]:
    """Tube of ``width`` rings with ``n`` vertices each; vertex (r, j) is r*n + j."""
    def v(r: int, j: int) -> int:
        return r * n + j % n

    tris: list[Triangle] = []
    for r in range(width - 1):
        for j in range(n):
            tris.append((v(r, j), v(r, j + 1), v(r + 1, j)))
            tris.append((v(r, j + 1), v(r + 1, j + 1), v(r + 1, j)))
    return tris


def annulus(n: int = 3) -> SurfaceComplex:
    """Two-ring annulus; outer circle 0..n-1, inner circle n..2n-1."""
    return SurfaceComplex(vertex_count=2 * n, triangles=band_triangles(n, 2))


def polygon_disk(sides: int) -> SurfaceComplex:
    """Cone over a polygon; boundary 0..sides-1 in order, center ``sides``."""
    return SurfaceComplex(
        vertex_count=sides + 1,
        triangles=[(i, (i + 1) % sides, sides) for i in range(sides)],
    )


def moebius_strip() -> SurfaceComplex:
    """Five-vertex Moebius strip; the boundary is 0-2-4-1-3."""
    return SurfaceComplex(vertex_count=5, triangles=[(i, (i + 1) % 5, (i + 2) % 5) for i in range(5)])


def torus_triangles() -> list[Triangle]:
    """Seven-vertex torus."""
    tris: list[Triangle] = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return tris


def punctured(vertex_count: int, tris: Sequence[Triangle], removed: Sequence[Sequence[int]]) -> SurfaceComplex:
    """Drop whole triangles; removed triangles must be vertex-disjoint and interior."""
    drop = {frozenset(t) for t in removed}
    return SurfaceComplex(vertex_count=vertex_count, triangles=[t for t in tris if frozenset(t) not in drop])


def punctured_torus(holes: int = 1) -> SurfaceComplex:
    """Torus minus {0,1,3} and, for two holes, {2,4,5}."""
    removed = [(0, 1, 3), (2, 4, 5)][:holes]
    return punctured(7, torus_triangles(), removed)


def holed_tube(n: int, hole_columns: Sequence[int]) -> SurfaceComplex:
    """
    Four-ring tube with middle-band triangles (r=1, j) removed.

    Rings 1 and 2 are interior, so each removal adds one boundary circle.
    """
    def v(r: int, j: int) -> int:
        return r * n + j % n

    removed = [(v(1, j), v(1, j + 1), v(2, j)) for j in hole_columns]
    return punctured(4 * n, band_triangles(n, 4), removed)


def pants() -> SurfaceComplex:
    return holed_tube(4, [0])


# ============================================================================
# Block Assembly
# ============================================================================

def _whole(circle: BoundaryCircle) -> Marking:
    return Marking(vertices=circle.vertices, edges=circle.edges)


def _circle_through(c: SurfaceComplex, v: int) -> BoundaryCircle:
    return next(circle for circle in boundary_circles(c) if v in circle)


def _run(vertices: Sequence[int]) -> Marking:
    """Marking of a boundary run given in order."""
    return Marking(vertices=vertices, edges=[edge_key(a, b) for a, b in zip(vertices, vertices[1:])])


def _merge(*markings: Marking) -> Marking:
    return Marking(
        vertices=[v for m in markings for v in m.vertices],
        edges=[e for m in markings for e in m.edges],
    )


def _all_exit(c: SurfaceComplex, name: str) -> IsolatingBlock:
    circles = boundary_circles(c)
    return IsolatingBlock(
        name=name,
        complex=c,
        exit_edges=[e for circle in circles for e in circle.edges],
        n_minus=_merge(*(_whole(circle) for circle in circles)),
    )


def _all_entrance(c: SurfaceComplex, name: str) -> IsolatingBlock:
    circles = boundary_circles(c)
    return IsolatingBlock(
        name=name,
        complex=c,
        n_plus=_merge(*(_whole(circle) for circle in circles)),
    )


# ============================================================================
# Standard Recipes
# ============================================================================

class BlockRecipe(BaseModel):
    """Named block with its documented surface signature."""

    name: str
    description: str
    signature: TopSignature
    parameters: dict[str, int] = Field(default_factory=dict, description="Integer parameters and defaults")


def pants_repeller() -> IsolatingBlock:
    """Pair of pants, every boundary circle exit; index S² ∨ S¹ ∨ S¹."""
    return _all_exit(pants(), "pants_repeller")


def genus1_repeller() -> IsolatingBlock:
    """Torus with one hole, all exit; index S¹×S¹."""
    return _all_exit(punctured_torus(1), "genus1_repeller")


def moebius_repeller() -> IsolatingBlock:
    """Moebius strip, all exit; index RP²."""
    return _all_exit(moebius_strip(), "moebius_repeller")


def annulus_attractor(ring: int = 3) -> IsolatingBlock:
    """Annulus around an attracting cycle."""
    return _all_entrance(annulus(ring), "annulus_attractor")


def annulus_cycle_mixed(ring: int = 3) -> IsolatingBlock:
    """Outer circle exit, inner circle entrance: a limit cycle with u_c = 0."""
    c = annulus(ring)
    outer = _circle_through(c, 0)
    inner = _circle_through(c, ring)
    return IsolatingBlock(
        name="annulus_cycle_mixed",
        complex=c,
        exit_edges=outer.edges,
        n_minus=_whole(outer),
        n_plus=_whole(inner),
    )


def annulus_nonregular(ring: int = 3) -> IsolatingBlock:
    """Outer exit circle with a one-point n_minus and a spine across the band."""
    c = annulus(ring)
    outer = _circle_through(c, 0)
    return IsolatingBlock(
        name="annulus_nonregular",
        complex=c,
        exit_edges=outer.edges,
        n_minus=Marking(vertices=[0]),
        n_plus=Marking(vertices=[ring]),
        spines=[TransitSpine(path=(1, ring + 1))],
    )


def square_saddle() -> IsolatingBlock:
    """
    Octagon c0 m0 c1 m1 c2 m2 c3 m3 = 0..7 around center 8.

    Exit arcs c0-m0-c1 and c2-m2-c3 with n_minus {m0, m2}; entrance arcs
    carry n_plus {m1, m3}. Corners are c0..c3.
    """
    return IsolatingBlock(
        name="square_saddle",
        complex=polygon_disk(8),
        exit_edges=[(0, 1), (1, 2), (4, 5), (5, 6)],
        n_minus=Marking(vertices=[1, 5]),
        n_plus=Marking(vertices=[3, 7]),
    )


def disk_focus_repeller(sides: int = 8) -> IsolatingBlock:
    """Disk around a repelling focus."""
    return _all_exit(polygon_disk(sides), "disk_focus_repeller")


def saddle_node_disk(sides: int = 8) -> IsolatingBlock:
    """Exit arc 0-1-2 with n_minus {1}; the rest is entrance with n_plus 3..sides-1."""
    return IsolatingBlock(
        name="saddle_node_disk",
        complex=polygon_disk(sides),
        exit_edges=[(0, 1), (1, 2)],
        n_minus=Marking(vertices=[1]),
        n_plus=_run(list(range(3, sides))),
    )


def three_arc_circle_nonregular() -> IsolatingBlock:
    """
    Sphere with four holes; circle 0..8 is exit with n_minus arcs 0-1, 3-4, 6-7.

    The gaps at 2, 5 and 8 each have a spine to a different entrance circle
    (holes 10-11-19 and 14-15-23, outer ring 27..35), so regularizing takes
    one opening cut and two separating cuts.
    """
    c = holed_tube(9, [1, 5])
    exit_circle = _circle_through(c, 0)
    return IsolatingBlock(
        name="three_arc_circle_nonregular",
        complex=c,
        exit_edges=exit_circle.edges,
        n_minus=_merge(_run([0, 1]), _run([3, 4]), _run([6, 7])),
        n_plus=Marking(vertices=[10, 15, 27]),
        spines=[
            TransitSpine(path=(2, 11)),
            TransitSpine(path=(5, 14)),
            TransitSpine(path=(8, 17, 26, 35)),
        ],
    )


def _sig(euler: int, orientable: bool, genus: int, circles: int) -> TopSignature:
    return TopSignature(euler=euler, orientable=orientable, genus=genus, boundary_circles=circles)


_RECIPES: dict[str, tuple[BlockRecipe, Callable[..., IsolatingBlock]]] = {
    recipe.name: (recipe, factory)
    for recipe, factory in [
        (BlockRecipe(name="pants_repeller", description="pair of pants, all exit", signature=_sig(-1, True, 0, 3)), pants_repeller),
        (BlockRecipe(name="genus1_repeller", description="one-holed torus, all exit", signature=_sig(-1, True, 1, 1)), genus1_repeller),
        (BlockRecipe(name="moebius_repeller", description="Moebius strip, all exit", signature=_sig(0, False, 1, 1)), moebius_repeller),
        (BlockRecipe(name="annulus_attractor", description="annulus, all entrance", signature=_sig(0, True, 0, 2), parameters={"ring": 3}), annulus_attractor),
        (BlockRecipe(name="annulus_cycle_mixed", description="annulus, one exit and one entrance circle", signature=_sig(0, True, 0, 2), parameters={"ring": 3}), annulus_cycle_mixed),
        (BlockRecipe(name="square_saddle", description="octagon with two exit and two entrance arcs", signature=_sig(1, True, 0, 1)), square_saddle),
        (BlockRecipe(name="disk_focus_repeller", description="disk, all exit", signature=_sig(1, True, 0, 1), parameters={"sides": 8}), disk_focus_repeller),
        (BlockRecipe(name="annulus_nonregular", description="annulus with a one-point n_minus and a spine", signature=_sig(0, True, 0, 2), parameters={"ring": 3}), annulus_nonregular),
        (BlockRecipe(name="saddle_node_disk", description="disk with one exit and one entrance arc", signature=_sig(1, True, 0, 1), parameters={"sides": 8}), saddle_node_disk),
        (BlockRecipe(name="three_arc_circle_nonregular", description="four-holed sphere, exit circle with three n_minus arcs", signature=_sig(-2, True, 0, 4)), three_arc_circle_nonregular),
    ]
}

_MINIMUMS = {"ring": 3, "sides": 4}


def recipe_names() -> list[str]:
    return list(_RECIPES)


def recipe(name: str) -> BlockRecipe:
    """
    Raises:
        UnknownRecipeError: If the name is not registered
    """
    if name not in _RECIPES:
        raise UnknownRecipeError(name, available=recipe_names())
    return _RECIPES[name][0]


def standard(name: str, params: Optional[Mapping[str, Any]] = None) -> IsolatingBlock:
    """
    Build a named standard block.

    Args:
        name: Recipe name (see ``recipe_names``)
        params: Integer overrides of the recipe's parameters

    Raises:
        UnknownRecipeError: If the name is not registered
        RecipeError: On an unknown or out-of-range parameter
    """
    entry = recipe(name)
    factory = _RECIPES[name][1]
    kwargs: dict[str, int] = {}
    for key, value in (params or {}).items():
        if key not in entry.parameters:
            raise RecipeError(f"Recipe '{name}' has no parameter '{key}'", parameter=key)
        try:
            number = int(value)
        except (TypeError, ValueError) as e:
            raise RecipeError(f"Parameter '{key}' must be an integer, got {value!r}", parameter=key) from e
        if number < _MINIMUMS.get(key, 0):
            raise RecipeError(f"Parameter '{key}' must be at least {_MINIMUMS[key]}", parameter=key)
        kwargs[key] = number

    block = factory(**kwargs)
    logger.debug(f"built standard block '{name}' with {block.complex.counts}")
    return block


# ============================================================================
# Random Blocks
# ============================================================================

def _random_base(rng: np.random.Generator, budget: int) -> SurfaceComplex:
    options: list[Callable[[], SurfaceComplex]] = [
        lambda: polygon_disk(int(rng.integers(4, 9))),
        lambda: _band(rng),
        lambda: holed_tube(int(rng.integers(6, 9)), [1, 4][: int(rng.integers(1, 3))]),
        lambda: punctured_torus(int(rng.integers(1, 3))),
        moebius_strip,
    ]
    order = rng.permutation(len(options))
    for index in order:
        base = options[int(index)]()
        if len(base.triangles) <= budget:
            return base
    return moebius_strip()


def _band(rng: np.random.Generator) -> SurfaceComplex:
    n, width = int(rng.integers(3, 6)), int(rng.integers(2, 4))
    return SurfaceComplex(vertex_count=n * width, triangles=band_triangles(n, width))


def _subdivide_raw(tris: list[Triangle], vertex_count: int, edge: Edge) -> list[Triangle]:
    a, b = edge
    m = vertex_count
    out: list[Triangle] = []
    for t in tris:
        if a in t and b in t:
            out.append(tuple(m if v == b else v for v in t))  # type: ignore[arg-type]
            out.append(tuple(m if v == a else v for v in t))  # type: ignore[arg-type]
        else:
            out.append(t)
    return out


def _refine(base: SurfaceComplex, rng: np.random.Generator, budget: int) -> SurfaceComplex:
    """Random edge subdivisions up to a random triangle count within the budget."""
    tris = list(base.triangles)
    vertex_count = base.vertex_count
    target = int(rng.integers(len(tris), budget + 1))
    while len(tris) < target:
        edges = sorted({edge_key(t[i], t[(i + 1) % 3]) for t in tris for i in range(3)})
        edge = edges[int(rng.integers(len(edges)))]
        refined = _subdivide_raw(tris, vertex_count, edge)
        if len(refined) > budget:
            break
        tris, vertex_count = refined, vertex_count + 1
    return SurfaceComplex(vertex_count=vertex_count, triangles=tris)


def _shortest_spine(
    c: SurfaceComplex,
    starts: Sequence[int],
    targets: Sequence[int],
    blocked: set[int],
) -> Optional[list[int]]:
    """Shortest interior path from ``starts`` to ``targets`` avoiding ``blocked``."""
    source, sink = -1, -2
    inner = set(range(c.vertex_count)) - c.boundary_vertices - blocked
    start_set, target_set = set(starts), set(targets)

    graph = nx.Graph()
    graph.add_nodes_from([source, sink])
    for a, b in c.edges:
        if not c.is_interior_edge(a, b):
            continue
        for x, y in ((a, b), (b, a)):
            if x in start_set and (y in inner or y in target_set):
                graph.add_edge(x, y)
            elif x in inner and (y in inner or y in target_set):
                graph.add_edge(x, y)
    graph.add_edges_from((source, v) for v in starts if v in graph)
    graph.add_edges_from((v, sink) for v in targets if v in graph)
    try:
        return nx.shortest_path(graph, source, sink)[1:-1]
    except nx.NetworkXNoPath:
        return None


def _mixed_circle(
    circle: BoundaryCircle,
    rng: np.random.Generator,
) -> tuple[list[Edge], Marking, Marking]:
    """Alternating exit/entrance arcs of two or more edges, one marking run each."""
    size = circle.length
    pairs = int(rng.integers(1, size // 4 + 1))
    lengths = 2 + rng.multinomial(size - 4 * pairs, [1 / (2 * pairs)] * (2 * pairs))
    offset = int(rng.integers(size))
    ring = [circle.vertices[(offset + i) % size] for i in range(size + 1)]

    exit_edges: list[Edge] = []
    n_minus: list[Marking] = []
    n_plus: list[Marking] = []
    position = 0
    for arc_index, length in enumerate(int(x) for x in lengths):
        arc = ring[position : position + length + 1]
        i = int(rng.integers(1, length))
        j = int(rng.integers(i, length))
        run = _run(arc[i : j + 1])
        if arc_index % 2 == 0:
            exit_edges.extend(edge_key(a, b) for a, b in zip(arc, arc[1:]))
            n_minus.append(run)
        else:
            n_plus.append(run)
        position += length
    return exit_edges, _merge(*n_minus), _merge(*n_plus)


def _crowded_circle(circle: BoundaryCircle, rng: np.random.Generator) -> list[int]:
    """Circle walk from a random offset; ring[0..4] is the exit arc, ring[2] its gap."""
    offset = int(rng.integers(circle.length))
    return [circle.vertices[(offset + i) % circle.length] for i in range(circle.length + 1)]


def _target_plus(target_circle: Sequence[int], end: int) -> Marking:
    """One-point n_plus next to the spine end on a whole entrance circle."""
    at = list(target_circle).index(end)
    return Marking(vertices=[target_circle[(at + 1) % len(target_circle)]])


def random_block(seed: int, budget: Optional[int] = None) -> IsolatingBlock:
    """
    Seeded random valid block.

    Each boundary circle gets one role: whole exit, whole entrance,
    alternating arcs, an exit circle with a partial n_minus paired by a
    spine with a whole entrance circle whose n_plus is one point, or a
    crowded circle. A crowded circle has one exit arc of four edges holding
    two one-point n_minus runs, and a spine from the vertex between them to
    a whole entrance circle. Pairs whose spine cannot be found fall back to
    whole exit.

    Raises:
        RecipeError: If the budget is below eight triangles
    """
    budget = budget if budget is not None else get_settings().random_budget
    if budget < 8:
        raise RecipeError(f"Triangle budget must be at least 8, got {budget}", budget=budget)
    rng = np.random.default_rng(seed)
    c = _refine(_random_base(rng, budget), rng, budget)
    circles = boundary_circles(c)

    roles: dict[int, str] = {}
    spines: list[TransitSpine] = []
    blocked: set[int] = set()
    exit_edges: list[Edge] = []
    markings_minus: list[Marking] = []
    markings_plus: list[Marking] = []

    for index in (int(i) for i in rng.permutation(len(circles))):
        if index in roles:
            continue
        circle = circles[index]
        role = str(rng.choice(["exit", "entrance", "mixed", "paired", "crowded"]))
        if role == "mixed" and circle.length < 4:
            role = "exit"
        if role == "crowded":
            free = [i for i in range(len(circles)) if i not in roles and i != index]
            path = None
            if free and circle.length >= 6:
                target = free[int(rng.integers(len(free)))]
                ring = _crowded_circle(circle, rng)
                path = _shortest_spine(c, [ring[2]], circles[target].vertices, blocked)
            if path is None:
                role = "exit"
            else:
                roles[target] = "target"
                spines.append(TransitSpine(path=tuple(path)))
                blocked.update(path)
                exit_edges.extend(edge_key(a, b) for a, b in zip(ring[:4], ring[1:5]))
                markings_minus.append(Marking(vertices=[ring[1], ring[3]]))
                markings_plus.append(Marking(vertices=[ring[5]]))
                markings_plus.append(_target_plus(circles[target].vertices, path[-1]))
        if role == "paired":
            free = [i for i in range(len(circles)) if i not in roles and i != index]
            if not free:
                role = "exit"
            else:
                target = free[int(rng.integers(len(free)))]
                first = int(rng.integers(circle.length))
                held = [circle.vertices[first]]
                if rng.random() < 0.5:
                    held.append(circle.vertices[(first + 1) % circle.length])
                starts = [v for v in circle.vertices if v not in held]
                path = _shortest_spine(c, starts, circles[target].vertices, blocked)
                if path is None:
                    role = "exit"
                else:
                    roles[target] = "target"
                    spines.append(TransitSpine(path=tuple(path)))
                    blocked.update(path)
                    exit_edges.extend(circle.edges)
                    markings_minus.append(_run(held))
                    markings_plus.append(_target_plus(circles[target].vertices, path[-1]))
        roles[index] = role

        if role == "exit":
            exit_edges.extend(circle.edges)
            markings_minus.append(_whole(circle))
        elif role == "entrance":
            markings_plus.append(_whole(circle))
        elif role == "mixed":
            arcs, minus, plus = _mixed_circle(circle, rng)
            exit_edges.extend(arcs)
            markings_minus.append(minus)
            markings_plus.append(plus)

    block = IsolatingBlock(
        name=f"random-{seed}",
        complex=c,
        exit_edges=exit_edges,
        n_minus=_merge(*markings_minus),
        n_plus=_merge(*markings_plus),
        spines=spines,
    )
    require_valid(block)
    logger.debug(f"random block {seed}: counts {c.counts}, roles {sorted(roles.values())}")
    return block
