"""
End-to-end checks of the classification results.

Covers the worked surface examples, the ring oracle against classify, the
Euler chain, surgery invariants, index invariance under regularization,
time duality, repeller constraints, the fixed-point machinery and the
continuation scenarios, over the standard blocks and seeded random blocks.
"""

import pytest

from conley_surf.core.exceptions import FixedPointForcedError
from conley_surf.models.block import IsolatingBlock
from conley_surf.models.conley_schemas import ComponentSummary, DynamicsType
from conley_surf.services.block_service import census, obstruction
from conley_surf.services.builders import random_block, recipe_names, standard
from conley_surf.services.conley_classifier import (
    block_intersection_form,
    classify,
    classify_fixed_point_free,
    cohomology_index,
    duality_check,
    ring_classify,
)
from conley_surf.services.continuation import check_continuation
from conley_surf.services.regularizer import regularize
from conley_surf.services.surface_complex import euler_characteristic, signature
from conley_surf.services.z2_homology import Subcomplex, relative_cohomology
from tests.generators.block_oracles import SEEDS

RANDOM_BUDGET = 120


@pytest.fixture(scope="module")
def random_blocks() -> list[IsolatingBlock]:
    return [random_block(seed, budget=RANDOM_BUDGET) for seed in SEEDS]


def all_blocks(corpus: list[IsolatingBlock], randoms: list[IsolatingBlock]) -> list[IsolatingBlock]:
    return corpus + randoms


@pytest.fixture(scope="module")
def corpus() -> list[IsolatingBlock]:
    return [standard(name) for name in recipe_names()]


@pytest.mark.acceptance
class TestWorkedExamples:
    """Test the pants and holed torus repellers"""

    def test_same_cohomology_different_ring(self, block):
        """Test that equal cohomology is told apart by the cup product"""
        pants, torus = block("pants_repeller"), block("genus1_repeller")

        assert cohomology_index(pants).as_tuple() == (0, 2, 1)
        assert cohomology_index(torus).as_tuple() == (0, 2, 1)
        assert block_intersection_form(pants).rank == 0
        assert block_intersection_form(torus).rank == 2

        pants_index = ring_classify(cohomology_index(pants), block_intersection_form(pants))
        torus_index = ring_classify(cohomology_index(torus), block_intersection_form(torus))
        assert pants_index.label() == "S² ∨ S¹ ∨ S¹"
        assert torus_index.label() == "S¹×S¹"
        assert classify(pants).index == pants_index
        assert classify(torus).index == torus_index


@pytest.mark.acceptance
@pytest.mark.property
class TestRingOracle:
    """Test that the cohomology ring recovers the classified index"""

    def test_corpus(self, corpus_block):
        """Test every standard block"""
        expected = classify(corpus_block).index
        assert ring_classify(cohomology_index(corpus_block), block_intersection_form(corpus_block)) == expected

    def test_random(self, random_blocks):
        """Test every seeded random block"""
        for b in random_blocks:
            expected = classify(b).index
            assert ring_classify(cohomology_index(b), block_intersection_form(b)) == expected, b.name


@pytest.mark.acceptance
@pytest.mark.property
class TestEulerChain:
    """Test chi(index) = chi(N) - chi(exit) = 1 - beta1 - u_c = fp_index"""

    def test_all_blocks(self, corpus, random_blocks):
        """Test the chain on the regular version of every block"""
        for b in all_blocks(corpus, random_blocks):
            report = classify(b)
            regular, _ = regularize(b)
            chain = {
                report.index.euler_characteristic(),
                euler_characteristic(regular.complex) - census(regular).u_c,
                1 - report.beta1_K - report.u_c,
                report.fp_index,
            }
            assert len(chain) == 1, b.name


@pytest.mark.acceptance
@pytest.mark.property
class TestSurgeryInvariants:
    """Test the per-cut and total cut counts"""

    def test_all_blocks(self, corpus, random_blocks):
        """Test obstruction -1 and chi +1 per cut, and cuts = initial obstruction"""
        for b in all_blocks(corpus, random_blocks):
            initial = obstruction(b)
            regular, trace = regularize(b)
            assert trace.cuts == initial, b.name
            for step in trace.steps:
                assert step.obstruction_after == step.obstruction_before - 1
                assert step.euler_after == step.euler_before + 1
            assert obstruction(regular) == 0
            assert euler_characteristic(regular.complex) == euler_characteristic(b.complex) + initial

    def test_beta1_drops_by_cuts(self, corpus, random_blocks):
        """Test that each cut removes one loop from the block surface"""
        for b in all_blocks(corpus, random_blocks):
            regular, trace = regularize(b)
            before, after = census(b).beta1_N, census(regular).beta1_N
            assert after <= before, b.name
            assert after == before - trace.cuts, b.name

    def test_top_class_survives(self, corpus, random_blocks):
        """Test that H2 of the regular block relative to its whole boundary is one-dimensional"""
        for b in all_blocks(corpus, random_blocks):
            regular, _ = regularize(b)
            rc = relative_cohomology(regular.complex, Subcomplex.boundary_of(regular.complex))
            assert rc.index.dim2 == 1, b.name

    def test_random_blocks_reach_both_phases(self, random_blocks):
        """Test that the seeded blocks exercise opening and separating cuts"""
        totals = {1: 0, 2: 0}
        for b in random_blocks:
            for phase, count in regularize(b)[1].phase_counts().items():
                totals[phase] += count
        assert totals[1] > 0
        assert totals[2] > 0

    def test_three_arcs(self, block):
        """Test the three-cut example"""
        _, trace = regularize(block("three_arc_circle_nonregular"))
        assert trace.cuts == 3


@pytest.mark.acceptance
class TestIndexInvariance:
    """Test that regularization keeps the cohomology index"""

    def test_corpus(self, corpus_block):
        """Test each standard block before and after regularization"""
        regular, _ = regularize(corpus_block)
        assert cohomology_index(regular) == cohomology_index(corpus_block)

    def test_annulus_point_marking(self, block):
        """Test the one-cut annulus"""
        b = block("annulus_nonregular")
        assert cohomology_index(b).as_tuple() == (0, 0, 0)
        assert cohomology_index(regularize(b)[0]).as_tuple() == (0, 0, 0)


@pytest.mark.acceptance
@pytest.mark.property
class TestDuality:
    """Test time reversal on every block"""

    def test_all_blocks(self, corpus, random_blocks):
        """Test u_c = s_c and the swapped or equal indices"""
        for b in all_blocks(corpus, random_blocks):
            report = duality_check(b)
            assert report.consistent, (b.name, report.violations)
            assert report.u_c == report.s_c


@pytest.mark.acceptance
@pytest.mark.property
class TestRepellerConstraints:
    """Test parity and self-square rules for repellers"""

    def test_all_repellers(self, corpus, random_blocks):
        """Test every repeller among the corpus and the random blocks"""
        repellers = [b for b in all_blocks(corpus, random_blocks) if classify(b).dynamics_type == DynamicsType.REPELLER]
        assert repellers
        for b in repellers:
            regular, _ = regularize(b)
            counts = census(regular)
            form = block_intersection_form(regular)
            if signature(regular.complex).orientable:
                assert (1 + counts.beta1_N - counts.u) % 2 == 0, b.name
                assert not form.has_self_square, b.name
            else:
                assert form.has_self_square, b.name

    def test_moebius_rank(self, block):
        """Test the rank-one self-square of the Moebius strip"""
        form = block_intersection_form(block("moebius_repeller"))
        assert (form.rank, form.has_self_square) == (1, True)


@pytest.mark.acceptance
class TestFixedPoints:
    """Test fixed-point forcing and the fixed-point-free trichotomy"""

    def test_saddle_forces_fixed_point(self, block):
        """Test the octagon saddle"""
        report = classify(block("square_saddle"))
        assert report.fp_index == -1
        assert report.forces_fixed_point

    def test_attractor_cycle(self, block):
        """Test the annulus attractor"""
        assert classify(block("annulus_attractor")).fp_index == 0

    @pytest.mark.parametrize("name", ["annulus_attractor", "annulus_cycle_mixed", "moebius_repeller"])
    def test_cycle_blocks_accepted(self, block, name):
        """Test annulus and Moebius cycle blocks"""
        assert classify_fixed_point_free(block(name)).admissible

    def test_saddle_rejected(self, block):
        """Test that the saddle cannot be fixed-point free"""
        with pytest.raises(FixedPointForcedError):
            classify_fixed_point_free(block("square_saddle"))


@pytest.mark.acceptance
class TestContinuationScenarios:
    """Test the continuation examples"""

    @pytest.fixture
    def circle(self) -> ComponentSummary:
        return ComponentSummary(beta1=1, u=1, u_c=0, dynamics_type=DynamicsType.MIXED)

    @pytest.fixture
    def saddle_point(self) -> ComponentSummary:
        return ComponentSummary(beta1=0, u=1, u_c=1, dynamics_type=DynamicsType.MIXED)

    def test_circle_splits_into_saddles(self, circle, saddle_point):
        """Test a non-saddle circle continued by two saddle points"""
        assert check_continuation(circle, [saddle_point, saddle_point]).passed

    def test_too_many_exit_intervals(self, circle, saddle_point):
        """Test that three exit intervals in total fail on the equation"""
        heavy = ComponentSummary(beta1=0, u=2, u_c=2, dynamics_type=DynamicsType.MIXED)
        report = check_continuation(circle, [saddle_point, heavy])
        assert report.first_violation == "equation"

    def test_attractor_with_satellite(self, saddle_point):
        """Test an attractor continued with one trivial-index satellite"""
        k0 = ComponentSummary(beta1=1, u=0, u_c=0, dynamics_type=DynamicsType.ATTRACTOR)
        assert check_continuation(k0, [k0, saddle_point]).passed
