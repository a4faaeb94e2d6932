"""
Conley index classification for isolating blocks of surface flows.

Provides:
- classify: dynamics type, index descriptor, shape and fixed-point index
  from the census and signature of the regular block
- cohomology_index / ring_classify: the index recovered from the Z2
  cohomology ring of the pair (N, exit set)
- Consequence checkers: fixed-point forcing, fixed-point-free trichotomy,
  minimal sets, time duality and the shape report

With (beta1, u, u_c) from the regular block:
- no exit:        attractor, index = (wedge of beta1 circles) plus a point
- all exit:       repeller, index = closed surface wedge (u - 1) circles
- otherwise:      mixed, index = wedge of (beta1 + u_c - 1) circles
and the fixed-point index is 1 - beta1 - u_c.
"""

from typing import Optional

from loguru import logger

from conley_surf.core.exceptions import (
    ConleySurfError,
    FixedPointForcedError,
    InconsistentDataError,
)
from conley_surf.models.block import ExitCensus, IsolatingBlock
from conley_surf.models.conley_schemas import (
    ClassificationReport,
    Cluster,
    ComponentSummary,
    DualityReport,
    DynamicsType,
    FixedPointFreeReport,
    FixedPointReport,
    IndexDescriptor,
    MinimalReport,
    RingReport,
    ShapeReport,
    SurfaceSummand,
)
from conley_surf.models.homology_schemas import CohomologyIndex, IntersectionForm
from conley_surf.models.surface import TopSignature
from conley_surf.services.block_service import census, require_valid, reverse
from conley_surf.services.regularizer import regularize
from conley_surf.services.surface_complex import euler_characteristic, signature
from conley_surf.services.z2_homology import Subcomplex, form_of, relative_cohomology

ADMISSIBLE_ORIENTABLE = ["limit cycle", "annulus bounded by two limit cycles"]
ADMISSIBLE_NONORIENTABLE = ["limit cycle", "Möbius strip bounded by a limit cycle"]

CASE_LABELS = {
    "i": "i: neither attractor nor repeller",
    "ii": "ii: attractor, empty exit set",
    "iii-a": "iii-a: orientable repeller, exit set is the whole boundary",
    "iii-b": "iii-b: nonorientable repeller, exit set is the whole boundary",
}


def case_label(kind: DynamicsType, orientable: bool) -> str:
    """Classification case: i mixed, ii attractor, iii-a and iii-b repellers by orientability."""
    if kind == DynamicsType.ATTRACTOR:
        return CASE_LABELS["ii"]
    if kind == DynamicsType.REPELLER:
        return CASE_LABELS["iii-a" if orientable else "iii-b"]
    return CASE_LABELS["i"]


# ============================================================================
# Descriptors
# ============================================================================

def attractor_descriptor(beta1: int) -> IndexDescriptor:
    """Block with a disjoint basepoint."""
    return IndexDescriptor(detached=(Cluster(circles=beta1),))


def repeller_descriptor(beta1: int, u: int, orientable: bool) -> IndexDescriptor:
    """
    Closed surface from capping the u exit circles, wedge u - 1 circles.

    Raises:
        InconsistentDataError: On odd orientable genus numerator or negative genus
    """
    if u < 1:
        raise InconsistentDataError(f"Repeller needs at least one exit circle, got u={u}")
    if orientable:
        numerator = 1 + beta1 - u
        if numerator % 2 or numerator < 0:
            raise InconsistentDataError(
                f"Orientable repeller needs 1 + beta1 - u even and non-negative, got {numerator}",
                beta1=beta1,
                u=u,
            )
        genus = numerator // 2
    else:
        genus = 1 + beta1 - u
        if genus < 1:
            raise InconsistentDataError(
                f"Nonorientable repeller needs 1 + beta1 - u >= 1, got {genus}", beta1=beta1, u=u
            )
    return IndexDescriptor(base=Cluster(circles=u - 1, surfaces=(SurfaceSummand(orientable=orientable, genus=genus),)))


def mixed_descriptor(beta1: int, u_c: int) -> IndexDescriptor:
    """
    Raises:
        InconsistentDataError: If beta1 + u_c - 1 is negative
    """
    k = beta1 + u_c - 1
    if k < 0:
        raise InconsistentDataError(
            f"Mixed set needs beta1 + u_c >= 1, got beta1={beta1}, u_c={u_c}", beta1=beta1, u_c=u_c
        )
    return IndexDescriptor.wedge_of_circles(k)


def descriptor_for_summary(summary: ComponentSummary) -> IndexDescriptor:
    """Index determined by a component summary."""
    if summary.dynamics_type == DynamicsType.ATTRACTOR:
        if summary.u:
            raise InconsistentDataError(f"Attractor has u=0, got u={summary.u}")
        return attractor_descriptor(summary.beta1)
    if summary.dynamics_type == DynamicsType.REPELLER:
        if summary.u_c:
            raise InconsistentDataError(f"Repeller exit set is circles only, got u_c={summary.u_c}")
        return repeller_descriptor(summary.beta1, summary.u, summary.orientable)
    return mixed_descriptor(summary.beta1, summary.u_c)


def wedge(descriptors: list[IndexDescriptor]) -> IndexDescriptor:
    """
    Pointed wedge: base clusters merge, detached clusters accumulate.

    The trivial index is the identity.
    """
    base = Cluster()
    detached: list[Cluster] = []
    for d in descriptors:
        base = base + d.base
        detached.extend(d.detached)
    return IndexDescriptor(base=base, detached=tuple(detached))


# ============================================================================
# Classification
# ============================================================================

def dynamics_type_of(b: IsolatingBlock) -> DynamicsType:
    if not b.exit_edges:
        return DynamicsType.ATTRACTOR
    if not b.entrance_edges:
        return DynamicsType.REPELLER
    return DynamicsType.MIXED


def _regular(b: IsolatingBlock) -> tuple[IsolatingBlock, int]:
    """Regular version of a valid block and the number of cuts used."""
    require_valid(b)
    regular, trace = regularize(b)
    return regular, trace.cuts


def _fixed_point_free(regular: IsolatingBlock, counts: ExitCensus, sig: TopSignature) -> FixedPointFreeReport:
    fp = 1 - counts.beta1_N - counts.u_c
    if fp != 0:
        raise FixedPointForcedError(
            f"Fixed-point index {fp} is nonzero, so '{regular.name}' contains a fixed point",
            fp_index=fp,
        )
    if sig.is_disk:
        raise FixedPointForcedError(
            f"Block '{regular.name}' is a disk, so it contains a fixed point", fp_index=fp
        )
    if counts.u_c:
        raise InconsistentDataError(f"Fixed-point-free set must be non-saddle, got u_c={counts.u_c}")
    if sig.is_annulus:
        return FixedPointFreeReport(orientable=True, block_surface=sig.name, admissible=list(ADMISSIBLE_ORIENTABLE))
    if sig.is_moebius:
        return FixedPointFreeReport(orientable=False, block_surface=sig.name, admissible=list(ADMISSIBLE_NONORIENTABLE))
    raise InconsistentDataError(
        f"Fixed-point-free block must be an annulus or a Moebius strip, got {sig.name}",
        signature=sig.model_dump(),
    )


def classify(b: IsolatingBlock, ambient_genus: Optional[int] = None) -> ClassificationReport:
    """
    Classify the Conley index of a block.

    Non-regular blocks are regularized first, which needs their spines.

    Args:
        b: Valid block
        ambient_genus: Genus of the phase space, for the surface summand note

    Raises:
        InvalidBlockError: If the block is invalid
        InsufficientTransitDataError: If regularization lacks a spine
        InconsistentDataError: If the counts cannot come from a surface flow
        FixedPointForcedError: If the block asserts no fixed points but forces one
    """
    regular, cuts = _regular(b)
    counts = census(regular)
    sig = signature(regular.complex)
    kind = dynamics_type_of(regular)
    beta1 = counts.beta1_N

    if kind == DynamicsType.ATTRACTOR:
        index = attractor_descriptor(beta1)
    elif kind == DynamicsType.REPELLER:
        index = repeller_descriptor(beta1, counts.u, sig.orientable)
    else:
        index = mixed_descriptor(beta1, counts.u_c)

    fp = 1 - beta1 - counts.u_c
    exit_euler = counts.u_c
    if not fp == index.euler_characteristic() == euler_characteristic(regular.complex) - exit_euler:
        raise InconsistentDataError(
            f"Euler chain broken for '{b.name}': {fp}, {index.euler_characteristic()}, "
            f"{euler_characteristic(regular.complex) - exit_euler}"
        )

    notes: list[str] = []
    if sig.is_disk:
        notes.append("K has trivial shape and contains a fixed point")
    if ambient_genus is not None and index.surfaces:
        genus = index.surfaces[0].genus
        if genus > ambient_genus:
            notes.append(f"surface summand genus {genus} exceeds the ambient genus {ambient_genus}")

    fixed_point_free = _fixed_point_free(regular, counts, sig) if b.asserts_no_fixed_points else None

    report = ClassificationReport(
        name=b.name,
        dynamics_type=kind,
        case=case_label(kind, sig.orientable),
        beta1_K=beta1,
        u=counts.u,
        u_c=counts.u_c,
        orientable=sig.orientable,
        index=index,
        index_label=index.label(),
        shape=shape_text(beta1),
        fp_index=fp,
        forces_fixed_point=fp != 0,
        non_saddle=counts.u_c == 0,
        regularization_cuts=cuts,
        notes=notes,
        fixed_point_free_classification=fixed_point_free,
    )
    logger.info(f"classified '{b.name}': {kind.value} {report.index_label}")
    return report


def shape_text(beta1: int) -> str:
    if beta1 == 0:
        return "trivial shape (wedge of 0 circumferences)"
    return f"wedge of {beta1} circumference{'s' if beta1 != 1 else ''}"


# ============================================================================
# Cohomology Ring
# ============================================================================

def exit_subcomplex(b: IsolatingBlock) -> Subcomplex:
    return Subcomplex.closure_of_edges(b.exit_edges)


def cohomology_index(b: IsolatingBlock) -> CohomologyIndex:
    """H*(N, exit set; Z2). The block need not be regular."""
    require_valid(b)
    return relative_cohomology(b.complex, exit_subcomplex(b)).index


def block_intersection_form(b: IsolatingBlock) -> IntersectionForm:
    require_valid(b)
    return form_of(relative_cohomology(b.complex, exit_subcomplex(b)))


def ring_classify(ch: CohomologyIndex, form: IntersectionForm) -> IndexDescriptor:
    """
    Index determined by the cohomology ring.

    Raises:
        InconsistentDataError: If the dimensions or form cannot come from one block
    """
    if ch.dim0 and ch.dim2:
        raise InconsistentDataError(f"CH^0 and CH^2 both nonzero: {ch.as_tuple()}")
    if form.basis_size != ch.dim1:
        raise InconsistentDataError(f"Form size {form.basis_size} differs from dim CH^1 = {ch.dim1}")
    if ch.dim0:
        if ch.dim0 != 1:
            raise InconsistentDataError(f"Connected block has dim CH^0 <= 1, got {ch.dim0}")
        return attractor_descriptor(ch.dim1)
    if ch.dim2:
        if ch.dim2 != 1:
            raise InconsistentDataError(f"Connected block has dim CH^2 <= 1, got {ch.dim2}")
        if form.has_self_square:
            genus, orientable = form.rank, False
        else:
            if form.rank % 2:
                raise InconsistentDataError(f"Alternating form with odd rank {form.rank}")
            genus, orientable = form.rank // 2, True
        circles = ch.dim1 - (genus if not orientable else 2 * genus)
        if circles < 0:
            raise InconsistentDataError(f"Form rank {form.rank} exceeds dim CH^1 = {ch.dim1}")
        return IndexDescriptor(base=Cluster(circles=circles, surfaces=(SurfaceSummand(orientable=orientable, genus=genus),)))
    if not form.gf2.is_zero():
        raise InconsistentDataError("Cup product is nonzero although CH^2 vanishes")
    return IndexDescriptor.wedge_of_circles(ch.dim1)


def ring_report(b: IsolatingBlock) -> RingReport:
    """Cohomology index, form and ring classification of a block."""
    require_valid(b)
    rc = relative_cohomology(b.complex, exit_subcomplex(b))
    form = form_of(rc)
    index = ring_classify(rc.index, form)

    if rc.index.dim0:
        kind, orientable, implied_u, beta1 = DynamicsType.ATTRACTOR, None, None, rc.index.dim1
    elif rc.index.dim2:
        summand = index.base.surfaces[0]
        kind, orientable = DynamicsType.REPELLER, summand.orientable
        implied_u, beta1 = index.base.circles + 1, rc.index.dim1
    else:
        kind, orientable, implied_u, beta1 = DynamicsType.MIXED, None, None, rc.index.dim1

    return RingReport(
        name=b.name,
        cohomology=rc.index,
        form=form,
        dynamics_type=kind,
        index=index,
        index_label=index.label(),
        orientable=orientable,
        implied_u=implied_u,
        implied_beta1_K=beta1,
    )


# ============================================================================
# Consequence Checkers
# ============================================================================

def fp_report(b: IsolatingBlock) -> FixedPointReport:
    """Fixed-point index 1 - beta1 - u_c; nonzero forces a fixed point."""
    report = classify(b.with_updates(asserts_no_fixed_points=False))
    return FixedPointReport(fp_index=report.fp_index, forces_fixed_point=report.forces_fixed_point)


def classify_fixed_point_free(b: IsolatingBlock) -> FixedPointFreeReport:
    """
    Admissible invariant sets for a block asserted free of fixed points.

    Raises:
        FixedPointForcedError: If the index is nonzero or the block is a disk
        InconsistentDataError: If the regular block is neither annulus nor Moebius strip
    """
    regular, _ = _regular(b)
    return _fixed_point_free(regular, census(regular), signature(regular.complex))


def minimal_report(b: IsolatingBlock) -> MinimalReport:
    """
    Statement for a minimal invariant set.

    Raises:
        InconsistentDataError: If beta1(K) >= 2
    """
    report = classify(b.with_updates(asserts_no_fixed_points=False))
    if report.beta1_K >= 2:
        raise InconsistentDataError(
            f"A minimal set has the shape of a point or a circle, got {report.shape}",
            beta1=report.beta1_K,
        )
    return MinimalReport(
        refined="fixed point" if report.beta1_K == 0 else "limit cycle",
        beta1_K=report.beta1_K,
    )


def duality_check(b: IsolatingBlock) -> DualityReport:
    """
    Compare the block with its time reversal. Report-valued.
    """
    counts = census(b)
    report = DualityReport(name=b.name, u_c=counts.u_c, s_c=counts.s_c)
    if counts.u_c != counts.s_c:
        report.violations.append(f"u_c={counts.u_c} differs from s_c={counts.s_c}")

    try:
        forward = classify(b.with_updates(asserts_no_fixed_points=False))
        backward = classify(reverse(b).with_updates(asserts_no_fixed_points=False))
    except ConleySurfError as e:
        report.violations.append(f"{e.code}: {e.message}")
        return report

    report.forward, report.reverse = forward.dynamics_type, backward.dynamics_type
    report.forward_index, report.reverse_index = forward.index_label, backward.index_label

    swapped = {
        DynamicsType.ATTRACTOR: DynamicsType.REPELLER,
        DynamicsType.REPELLER: DynamicsType.ATTRACTOR,
        DynamicsType.MIXED: DynamicsType.MIXED,
    }
    if backward.dynamics_type != swapped[forward.dynamics_type]:
        report.violations.append(
            f"reverse of {forward.dynamics_type.value} classified as {backward.dynamics_type.value}"
        )
    elif forward.dynamics_type == DynamicsType.MIXED and forward.index != backward.index:
        report.violations.append(f"mixed indices differ: {forward.index_label} vs {backward.index_label}")
    elif forward.dynamics_type != DynamicsType.MIXED and forward.beta1_K != backward.beta1_K:
        report.violations.append(f"beta1 differs: {forward.beta1_K} vs {backward.beta1_K}")
    return report


def shape_report(b: IsolatingBlock) -> ShapeReport:
    """
    Shape of K: a wedge of beta1(K) circles, with beta1(K) <= beta1(N).

    A disk block means trivial shape and a forced fixed point.
    """
    beta1_n = census(b).beta1_N
    regular, _ = _regular(b)
    beta1_k = census(regular).beta1_N
    is_disk = signature(regular.complex).is_disk
    return ShapeReport(
        name=b.name,
        beta1_K=beta1_k,
        beta1_N=beta1_n,
        bound_holds=beta1_k <= beta1_n,
        shape=shape_text(beta1_k),
        trivial_shape=beta1_k == 0,
        forced_fixed_point=is_disk,
        note="K has trivial shape and contains a fixed point" if is_disk else None,
    )
