"""
Regularization surgery for isolating blocks.

Cutting the block along a transit spine removes a flow rectangle. On both
copies of the spine, edges from the exit endpoint up to the split vertex
(the ceil(k/2)-th path vertex) become exit edges and the rest entrance
edges; the two split-vertex copies become corners.

Phase 1 opens every exit circle that is not entirely in n_minus. Phase 2
separates exit intervals holding two or more n_minus components. Each cut
removes exactly one obstruction generator, so the run ends after
``census(b).obstruction`` cuts with a regular block.
"""

from typing import Optional

from loguru import logger

from conley_surf.core.exceptions import (
    DisconnectingCutError,
    InsufficientTransitDataError,
    InvalidBlockError,
    SurgeryInvariantError,
)
from conley_surf.core.logger import log_surgery_step
from conley_surf.models.block import BoundaryComponent, ComponentKind, IsolatingBlock, TransitSpine
from conley_surf.models.regularize_schemas import SurgerySide, SurgeryStep, SurgeryTrace
from conley_surf.models.surface import edge_key
from conley_surf.services.block_service import (
    exit_components,
    obstruction,
    require_valid,
    reverse,
    spines_starting_in,
    validate,
)
from conley_surf.services.surface_complex import (
    cut_path,
    euler_characteristic,
    is_connected,
    subdivide_edge,
)


# ============================================================================
# Single Cut
# ============================================================================

def _split_index(k: int) -> int:
    return -(-k // 2)


def cut_once(b: IsolatingBlock, spine: TransitSpine) -> IsolatingBlock:
    """
    Cut a valid block along one of its spines.

    A one-edge spine is subdivided first so the split vertex is interior.

    Raises:
        InvalidBlockError: If the block is invalid or the spine is not one of its spines
        DisconnectingCutError: If the cut disconnects the surface
        NotProperlyEmbeddedError: If the spine is not a properly embedded arc
        SurgeryInvariantError: If the cut block breaks a block invariant
    """
    require_valid(b)
    if spine not in b.spines:
        raise InvalidBlockError(f"Spine {list(spine.path)} does not belong to block '{b.name}'")

    complex_ = b.complex
    path = spine.path
    if spine.edge_count == 1:
        complex_ = subdivide_edge(complex_, path)
        path = (path[0], complex_.vertex_count - 1, path[1])
        logger.debug(f"[{b.name}] subdivided one-edge spine into {list(path)}")

    cut = cut_path(complex_, path)
    if not is_connected(cut.complex):
        raise DisconnectingCutError(
            f"Cutting '{b.name}' along {list(path)} disconnects it", spine=list(path)
        )

    k = len(path) - 1
    split = _split_index(k)
    exit_edges = {cut.edge_image(e) for e in b.exit_edges}
    for copy in (cut.right_path, cut.left_path):
        exit_edges.update(edge_key(copy[i], copy[i + 1]) for i in range(split))

    result = b.with_updates(
        complex=cut.complex,
        exit_edges=exit_edges,
        spines=tuple(s for s in b.spines if s != spine),
    )

    report = validate(result)
    if not report.valid:
        raise SurgeryInvariantError(
            f"Cut along {list(path)} left '{b.name}' invalid",
            details="; ".join(report.messages()),
            spine=list(path),
        )
    return result


# ============================================================================
# Phase Selection
# ============================================================================

def _marking_runs(b: IsolatingBlock, comp: BoundaryComponent) -> list[list[int]]:
    """n_minus components inside an exit interval, in interval order."""
    runs: list[list[int]] = []
    previous: Optional[int] = None
    for v in comp.vertices:
        if v not in b.n_minus.vertex_set:
            previous = None
            continue
        if previous is not None and edge_key(previous, v) in b.n_minus.edge_set:
            runs[-1].append(v)
        else:
            runs.append([v])
        previous = v
    return runs


def _open_exit_circle(b: IsolatingBlock) -> Optional[BoundaryComponent]:
    for comp in exit_components(b):
        if comp.kind == ComponentKind.CIRCLE and not set(comp.edges) <= b.n_minus.edge_set:
            return comp
    return None


def _crowded_interval(b: IsolatingBlock) -> Optional[tuple[BoundaryComponent, list[int]]]:
    """First exit interval with two or more n_minus components, and its first gap."""
    for comp in exit_components(b):
        if comp.kind != ComponentKind.INTERVAL:
            continue
        runs = _marking_runs(b, comp)
        if len(runs) >= 2:
            vs = comp.vertices
            gap = list(vs[vs.index(runs[0][-1]) + 1 : vs.index(runs[1][0])])
            return comp, gap
    return None


def _next_cut(b: IsolatingBlock) -> Optional[tuple[int, TransitSpine]]:
    """
    (phase, spine) of the next surgery, or None when the block is regular.

    Raises:
        InsufficientTransitDataError: If the required gap has no spine
    """
    circle = _open_exit_circle(b)
    if circle is not None:
        candidates = spines_starting_in(b, circle.vertices)
        if not candidates:
            raise InsufficientTransitDataError(
                f"Exit circle {list(circle.vertices)} of '{b.name}' has no spine",
                phase=1,
                gap=list(circle.vertices),
            )
        return 1, b.spines[candidates[0]]

    crowded = _crowded_interval(b)
    if crowded is not None:
        interval, gap = crowded
        candidates = spines_starting_in(b, gap)
        if not candidates:
            raise InsufficientTransitDataError(
                f"Gap {gap} of exit interval {list(interval.vertices)} of '{b.name}' has no spine",
                phase=2,
                gap=gap,
            )
        return 2, b.spines[candidates[0]]
    return None


# ============================================================================
# Regularization
# ============================================================================

def regularize(b: IsolatingBlock, side: SurgerySide = SurgerySide.EXIT) -> tuple[IsolatingBlock, SurgeryTrace]:
    """
    Cut a valid block until its exit-side obstruction vanishes.

    Args:
        b: Valid block
        side: Recorded on each step (``ENTRANCE`` when run on a reversed block)

    Returns:
        (regular block, trace); the trace is empty for a regular input

    Raises:
        InvalidBlockError: If the block is invalid
        InsufficientTransitDataError: If a required gap has no spine
        DisconnectingCutError: If a cut disconnects the block
        SurgeryInvariantError: If a cut does not remove exactly one generator
    """
    require_valid(b)
    current = b
    trace = SurgeryTrace(block_name=b.name)

    while True:
        chosen = _next_cut(current)
        if chosen is None:
            break
        phase, spine = chosen
        before = obstruction(current)
        chi_before = euler_characteristic(current.complex)

        after_block = cut_once(current, spine)
        after = obstruction(after_block)
        if after != before - 1:
            raise SurgeryInvariantError(
                f"Cut along {list(spine.path)} changed the obstruction {before}->{after}",
                spine=list(spine.path),
            )

        cut_path_vertices = spine.path
        if spine.edge_count == 1:
            cut_path_vertices = (spine.path[0], current.complex.vertex_count, spine.path[1])
        step = SurgeryStep(
            phase=phase,
            spine=cut_path_vertices,
            obstruction_before=before,
            obstruction_after=after,
            euler_before=chi_before,
            euler_after=euler_characteristic(after_block.complex),
            side=side,
        )
        log_surgery_step(b.name, step)
        trace.steps.append(step)
        current = after_block

    logger.info(f"regularized block '{b.name}' in {trace.cuts} cut(s)")
    return current, trace


def regularize_both(b: IsolatingBlock) -> tuple[IsolatingBlock, SurgeryTrace]:
    """
    Regularize the exit side, then the entrance side via the reversed block.

    Raises:
        Same as ``regularize``
    """
    exit_regular, exit_trace = regularize(b)
    reversed_regular, entrance_trace = regularize(reverse(exit_regular), side=SurgerySide.ENTRANCE)
    return reverse(reversed_regular), exit_trace.extended(entrance_trace)
