"""
Tests for Conley index classification and its consequence checkers.
"""

import pytest

from conley_surf.core.exceptions import (
    FixedPointForcedError,
    InconsistentDataError,
    InsufficientTransitDataError,
    InvalidBlockError,
)
from conley_surf.models.block import IsolatingBlock
from conley_surf.models.conley_schemas import (
    ClassificationReport,
    Cluster,
    ComponentSummary,
    DynamicsType,
    IndexDescriptor,
    SurfaceSummand,
)
from conley_surf.models.homology_schemas import CohomologyIndex, IntersectionForm
from conley_surf.services.block_service import reverse
from conley_surf.services.conley_classifier import (
    attractor_descriptor,
    classify,
    classify_fixed_point_free,
    cohomology_index,
    descriptor_for_summary,
    duality_check,
    fp_report,
    minimal_report,
    mixed_descriptor,
    repeller_descriptor,
    ring_classify,
    ring_report,
    shape_report,
    wedge,
)

# name -> (type, index label, fp index, beta1(K), cuts)
EXPECTED = {
    "pants_repeller": (DynamicsType.REPELLER, "S² ∨ S¹ ∨ S¹", -1, 2, 0),
    "genus1_repeller": (DynamicsType.REPELLER, "S¹×S¹", -1, 2, 0),
    "moebius_repeller": (DynamicsType.REPELLER, "RP²", 0, 1, 0),
    "disk_focus_repeller": (DynamicsType.REPELLER, "S²", 1, 0, 0),
    "annulus_attractor": (DynamicsType.ATTRACTOR, "(S¹) ⊔ {•}", 0, 1, 0),
    "annulus_cycle_mixed": (DynamicsType.MIXED, "•", 0, 1, 0),
    "square_saddle": (DynamicsType.MIXED, "S¹", -1, 0, 0),
    "saddle_node_disk": (DynamicsType.MIXED, "•", 0, 0, 0),
    "annulus_nonregular": (DynamicsType.MIXED, "•", 0, 0, 1),
    "three_arc_circle_nonregular": (DynamicsType.MIXED, "S¹ ∨ S¹", -2, 0, 3),
}


@pytest.mark.unit
class TestDescriptors:
    """Test the index descriptor normal form"""

    def test_repeller_orientable(self):
        """Test genus from the orientable repeller formula"""
        d = repeller_descriptor(beta1=4, u=1, orientable=True)
        assert d.surfaces == (SurfaceSummand(orientable=True, genus=2),)
        assert d.label() == "Σ_2"

    def test_repeller_odd_numerator(self):
        """Test that an odd orientable genus numerator is rejected"""
        with pytest.raises(InconsistentDataError):
            repeller_descriptor(beta1=1, u=1, orientable=True)

    def test_repeller_nonorientable_genus(self):
        """Test that a nonorientable repeller needs genus at least one"""
        with pytest.raises(InconsistentDataError):
            repeller_descriptor(beta1=0, u=1, orientable=False)
        assert repeller_descriptor(beta1=2, u=1, orientable=False).label() == "N_2"

    def test_mixed_needs_nonnegative_wedge(self):
        """Test beta1 + u_c >= 1"""
        with pytest.raises(InconsistentDataError):
            mixed_descriptor(0, 0)

    def test_attractor_point(self):
        """Test an attractor of trivial shape"""
        d = attractor_descriptor(0)
        assert d.label() == "(•) ⊔ {•}"
        assert d.euler_characteristic() == 1

    def test_wedge_identity(self):
        """Test that the trivial index is the wedge identity"""
        circle = IndexDescriptor.wedge_of_circles(1)
        assert wedge([IndexDescriptor.trivial(), circle]) == circle
        assert wedge([circle, circle]) == IndexDescriptor.wedge_of_circles(2)

    def test_wedge_keeps_detached(self):
        """Test that detached clusters accumulate"""
        d = wedge([attractor_descriptor(1), IndexDescriptor.wedge_of_circles(1)])
        assert d.extra_components == 1
        assert d.base == Cluster(circles=1)

    def test_reduced_betti(self):
        """Test the cohomology implied by a descriptor"""
        d = IndexDescriptor(base=Cluster(circles=1, surfaces=(SurfaceSummand(orientable=False, genus=1),)))
        assert d.reduced_betti() == (0, 2, 1)

    def test_surface_summand_schema(self):
        """Test that a nonorientable summand needs genus at least one"""
        with pytest.raises(ValueError):
            SurfaceSummand(orientable=False, genus=0)


@pytest.mark.unit
class TestClassify:
    """Test classification of the standard blocks"""

    @pytest.mark.parametrize("name", list(EXPECTED))
    def test_standard_blocks(self, block, name):
        """Test type, index, fixed-point index, shape and cuts"""
        kind, label, fp, beta1, cuts = EXPECTED[name]
        report = classify(block(name))
        assert report.dynamics_type == kind
        assert report.index_label == label
        assert report.fp_index == fp
        assert report.beta1_K == beta1
        assert report.regularization_cuts == cuts
        assert report.forces_fixed_point == (fp != 0)

    def test_euler_chain(self, corpus_block):
        """Test that the fixed-point index is the index Euler characteristic"""
        report = classify(corpus_block)
        assert report.fp_index == report.index.euler_characteristic()
        assert report.fp_index == 1 - report.beta1_K - report.u_c

    def test_cohomology_matches_descriptor(self, corpus_block):
        """Test that the block cohomology equals the descriptor's reduced Betti numbers"""
        report = classify(corpus_block)
        assert cohomology_index(corpus_block).as_tuple() == report.index.reduced_betti()

    def test_non_saddle_flag(self, block):
        """Test u_c = 0 marks a non-saddle set"""
        assert classify(block("annulus_cycle_mixed")).non_saddle
        assert not classify(block("square_saddle")).non_saddle

    def test_disk_note(self, block):
        """Test the trivial-shape note on disk blocks"""
        report = classify(block("disk_focus_repeller"))
        assert "K has trivial shape and contains a fixed point" in report.notes

    def test_ambient_genus_note(self, block):
        """Test the note when the surface summand exceeds the phase space genus"""
        report = classify(block("genus1_repeller"), ambient_genus=0)
        assert any("exceeds the ambient genus 0" in note for note in report.notes)
        assert not classify(block("genus1_repeller"), ambient_genus=1).notes

    def test_shape_text(self, block):
        """Test the shape description"""
        assert classify(block("pants_repeller")).shape == "wedge of 2 circumferences"
        assert classify(block("square_saddle")).shape == "trivial shape (wedge of 0 circumferences)"

    def test_invalid_block(self, octagon):
        """Test that classification needs a valid block"""
        with pytest.raises(InvalidBlockError):
            classify(IsolatingBlock(complex=octagon, exit_edges=[(0, 1)]))

    def test_missing_spine(self, block):
        """Test that a non-regular block without spines cannot be classified"""
        with pytest.raises(InsufficientTransitDataError):
            classify(block("annulus_nonregular").with_updates(spines=[]))

    @pytest.mark.parametrize(
        "name, case",
        [
            ("square_saddle", "i"),
            ("annulus_attractor", "ii"),
            ("pants_repeller", "iii-a"),
            ("genus1_repeller", "iii-a"),
            ("moebius_repeller", "iii-b"),
        ],
    )
    def test_case_label(self, block, name, case):
        """Test that the case tag separates the orientable and nonorientable repellers"""
        assert classify(block(name)).case.split(":")[0] == case

    def test_report_consistency_enforced(self):
        """Test the schema check between fp_index and the index"""
        with pytest.raises(ValueError):
            ClassificationReport(
                name="x",
                dynamics_type=DynamicsType.MIXED,
                case="neither attractor nor repeller",
                beta1_K=0,
                u=2,
                u_c=2,
                orientable=True,
                index=IndexDescriptor.wedge_of_circles(1),
                index_label="S¹",
                shape="trivial shape (wedge of 0 circumferences)",
                fp_index=0,
                forces_fixed_point=False,
                non_saddle=False,
            )


@pytest.mark.unit
class TestFixedPointFree:
    """Test the fixed-point-free trichotomy"""

    def test_annulus_limit_cycle(self, block):
        """Test the admissible sets in an annulus block"""
        report = classify_fixed_point_free(block("annulus_cycle_mixed"))
        assert report.orientable
        assert report.block_surface == "annulus"
        assert report.admissible == ["limit cycle", "annulus bounded by two limit cycles"]

    def test_moebius(self, block):
        """Test the admissible sets in a Moebius block"""
        report = classify_fixed_point_free(block("moebius_repeller"))
        assert not report.orientable
        assert "Möbius strip bounded by a limit cycle" in report.admissible

    def test_nonzero_index(self, block):
        """Test that a nonzero index contradicts the assertion"""
        with pytest.raises(FixedPointForcedError) as exc_info:
            classify_fixed_point_free(block("square_saddle"))
        assert exc_info.value.extra_data["fp_index"] == -1

    def test_disk(self, block):
        """Test that a disk block always holds a fixed point"""
        with pytest.raises(FixedPointForcedError, match="disk"):
            classify_fixed_point_free(block("saddle_node_disk"))

    def test_asserted_in_block(self, block):
        """Test that classify runs the check when the block asserts it"""
        b = block("annulus_attractor").with_updates(asserts_no_fixed_points=True)
        report = classify(b)
        assert report.fixed_point_free_classification is not None
        with pytest.raises(FixedPointForcedError):
            classify(block("pants_repeller").with_updates(asserts_no_fixed_points=True))


@pytest.mark.unit
class TestConsequences:
    """Test fixed-point, minimal-set, duality and shape reports"""

    def test_fp_report(self, block):
        """Test the fixed-point index report"""
        report = fp_report(block("square_saddle"))
        assert (report.fp_index, report.forces_fixed_point) == (-1, True)

    def test_fp_report_ignores_assertion(self, block):
        """Test that the assertion flag does not make fp_report raise"""
        b = block("square_saddle").with_updates(asserts_no_fixed_points=True)
        assert fp_report(b).fp_index == -1

    def test_minimal_sets(self, block):
        """Test the refinement by shape"""
        assert minimal_report(block("disk_focus_repeller")).refined == "fixed point"
        assert minimal_report(block("annulus_attractor")).refined == "limit cycle"
        with pytest.raises(InconsistentDataError):
            minimal_report(block("pants_repeller"))

    @pytest.mark.parametrize("name", ["square_saddle", "pants_repeller", "annulus_attractor", "annulus_nonregular"])
    def test_duality(self, block, name):
        """Test that reversal swaps attractor and repeller and keeps mixed indices"""
        report = duality_check(block(name))
        assert report.consistent, report.violations

    def test_duality_types(self, block):
        """Test the recorded forward and reverse types"""
        report = duality_check(block("pants_repeller"))
        assert (report.forward, report.reverse) == (DynamicsType.REPELLER, DynamicsType.ATTRACTOR)

    def test_shape_bound(self, block):
        """Test beta1(K) <= beta1(N) and the disk rule"""
        report = shape_report(block("annulus_nonregular"))
        assert (report.beta1_N, report.beta1_K) == (1, 0)
        assert report.bound_holds
        assert report.trivial_shape
        assert report.forced_fixed_point

    def test_shape_of_repeller(self, block):
        """Test a repeller whose shape is its block"""
        report = shape_report(block("pants_repeller"))
        assert report.beta1_K == report.beta1_N == 2
        assert not report.forced_fixed_point


@pytest.mark.unit
class TestRing:
    """Test the index recovered from the cohomology ring"""

    @pytest.mark.parametrize(
        "name, cohomology, implied_u",
        [
            ("pants_repeller", (0, 2, 1), 3),
            ("genus1_repeller", (0, 2, 1), 1),
            ("moebius_repeller", (0, 1, 1), 1),
            ("disk_focus_repeller", (0, 0, 1), 1),
            ("annulus_attractor", (1, 1, 0), None),
            ("square_saddle", (0, 1, 0), None),
            ("three_arc_circle_nonregular", (0, 2, 0), None),
        ],
    )
    def test_ring_report(self, block, name, cohomology, implied_u):
        """Test cohomology, implied counts and agreement with classify"""
        b = block(name)
        report = ring_report(b)
        assert report.cohomology.as_tuple() == cohomology
        assert report.implied_u == implied_u
        assert report.index_label == classify(b).index_label

    def test_orientability_from_form(self, block):
        """Test that a self-square means a nonorientable summand"""
        assert ring_report(block("moebius_repeller")).orientable is False
        assert ring_report(block("genus1_repeller")).orientable is True

    def test_h0_and_h2(self):
        """Test that CH^0 and CH^2 cannot both be nonzero"""
        form = IntersectionForm(basis_size=0, matrix=(), rank=0, has_self_square=False)
        with pytest.raises(InconsistentDataError):
            ring_classify(CohomologyIndex(dim0=1, dim1=0, dim2=1), form)

    def test_form_size_mismatch(self):
        """Test that the form must be square on CH^1"""
        form = IntersectionForm(basis_size=0, matrix=(), rank=0, has_self_square=False)
        with pytest.raises(InconsistentDataError):
            ring_classify(CohomologyIndex(dim0=0, dim1=1, dim2=0), form)

    def test_cup_product_without_top_class(self):
        """Test that a nonzero form needs CH^2"""
        form = IntersectionForm(basis_size=1, matrix=((1,),), rank=1, has_self_square=True)
        with pytest.raises(InconsistentDataError):
            ring_classify(CohomologyIndex(dim0=0, dim1=1, dim2=0), form)

    def test_alternating_form_with_odd_rank(self):
        """Test that an orientable summand needs an even form rank"""
        form = IntersectionForm(basis_size=1, matrix=((0,),), rank=1, has_self_square=False)
        with pytest.raises(InconsistentDataError, match="odd rank"):
            ring_classify(CohomologyIndex(dim0=0, dim1=1, dim2=1), form)


@pytest.mark.unit
class TestComponentSummary:
    """Test component summaries"""

    def test_from_report(self, block):
        """Test building a summary from a classification"""
        summary = ComponentSummary.from_report(classify(block("square_saddle")))
        assert (summary.beta1, summary.u, summary.u_c) == (0, 2, 2)
        assert descriptor_for_summary(summary).label() == "S¹"

    def test_u_c_bound(self):
        """Test u_c <= u"""
        with pytest.raises(ValueError):
            ComponentSummary(beta1=0, u=1, u_c=2, dynamics_type=DynamicsType.MIXED)

    def test_inconsistent_attractor(self):
        """Test that an attractor summary cannot have exit components"""
        with pytest.raises(InconsistentDataError):
            descriptor_for_summary(ComponentSummary(beta1=1, u=1, u_c=0, dynamics_type=DynamicsType.ATTRACTOR))

    def test_inconsistent_repeller(self):
        """Test that a repeller summary cannot have exit intervals"""
        with pytest.raises(InconsistentDataError):
            descriptor_for_summary(ComponentSummary(beta1=0, u=2, u_c=1, dynamics_type=DynamicsType.REPELLER))


@pytest.mark.unit
def test_reverse_of_attractor_is_repeller(block):
    """Test the reversed all-entrance annulus"""
    report = classify(reverse(block("annulus_attractor")))
    assert report.dynamics_type == DynamicsType.REPELLER
    assert report.index_label == "S² ∨ S¹"
