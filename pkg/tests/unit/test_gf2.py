"""
Tests for bit-packed GF(2) linear algebra.
"""

import numpy as np
import pytest

from conley_surf.utils.gf2 import Gf2Matrix, gf2_rank
from tests.generators.block_oracles import rank_by_elimination


@pytest.mark.unit
class TestConstruction:
    """Test matrix construction and access"""

    def test_from_dense_reduces_mod_two(self):
        """Test that entries are taken mod 2"""
        m = Gf2Matrix.from_dense([[1, 2, 3], [4, 5, 0]])
        assert m.to_dense().tolist() == [[1, 0, 1], [0, 1, 0]]
        assert m.shape == (2, 3)

    def test_empty_rows(self):
        """Test a matrix with no rows"""
        m = Gf2Matrix.zeros(0, 5)
        assert m.shape == (0, 5)
        assert m.rank() == 0
        assert m.is_zero()

    def test_wide_matrix_spans_words(self):
        """Test columns beyond one 64-bit word"""
        m = Gf2Matrix.from_supports([[0, 70, 129]], cols=130)
        assert m[0, 70] == 1
        assert m[0, 129] == 1
        assert m[0, 1] == 0

    def test_identity(self):
        """Test the identity matrix"""
        eye = Gf2Matrix.identity(4)
        assert eye.rank() == 4
        assert eye.is_symmetric()

    def test_equality_and_hash(self):
        """Test value equality"""
        a = Gf2Matrix.from_dense([[1, 0], [1, 1]])
        b = Gf2Matrix.from_supports([[0], [0, 1]], cols=2)
        assert a == b
        assert hash(a) == hash(b)


@pytest.mark.unit
class TestArithmetic:
    """Test addition, products and transposes"""

    def test_addition_is_xor(self):
        """Test that A + A = 0"""
        a = Gf2Matrix.from_dense([[1, 1, 0], [0, 1, 1]])
        assert (a + a).is_zero()

    def test_shape_mismatch(self):
        """Test that incompatible shapes are rejected"""
        with pytest.raises(ValueError):
            Gf2Matrix.zeros(2, 2) + Gf2Matrix.zeros(2, 3)
        with pytest.raises(ValueError):
            Gf2Matrix.zeros(2, 3) @ Gf2Matrix.zeros(2, 3)

    def test_product(self):
        """Test a product reduced mod 2"""
        a = Gf2Matrix.from_dense([[1, 1], [0, 1]])
        assert (a @ a).to_dense().tolist() == [[1, 0], [0, 1]]

    def test_transpose(self):
        """Test transposition"""
        a = Gf2Matrix.from_dense([[1, 0, 1]])
        assert a.T.to_dense().tolist() == [[1], [0], [1]]


@pytest.mark.unit
class TestElimination:
    """Test echelon forms, ranks and null spaces"""

    def test_rank_of_dependent_rows(self):
        """Test that the sum of two rows adds no rank"""
        assert gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2

    def test_nullspace(self):
        """Test that null space vectors are annihilated"""
        a = Gf2Matrix.from_dense([[1, 1, 0, 0], [0, 1, 1, 0]])
        kernel = a.nullspace()
        assert kernel.rows == 2
        assert (a @ kernel.T).is_zero()

    def test_reduce_and_contains(self):
        """Test residues modulo a row space"""
        ech = Gf2Matrix.from_dense([[1, 1, 0], [0, 1, 1]]).echelon()
        assert ech.contains(Gf2Matrix.from_dense([[1, 0, 1]]))
        assert not ech.contains(Gf2Matrix.from_dense([[0, 0, 1]]))
        residue = ech.reduce(Gf2Matrix.from_dense([[0, 0, 1]]))
        assert all(residue[0, p] == 0 for p in ech.pivots)

    @pytest.mark.property
    @pytest.mark.parametrize("seed", range(20))
    def test_rank_matches_oracle(self, seed):
        """Test packed elimination against integer elimination"""
        rng = np.random.default_rng(seed)
        rows, cols = int(rng.integers(1, 12)), int(rng.integers(1, 90))
        dense = rng.integers(0, 2, size=(rows, cols))
        assert gf2_rank(dense) == rank_by_elimination(dense.tolist())

    @pytest.mark.property
    @pytest.mark.parametrize("seed", range(10))
    def test_rank_nullity(self, seed):
        """Test rank + nullity = column count"""
        rng = np.random.default_rng(100 + seed)
        m = Gf2Matrix.from_dense(rng.integers(0, 2, size=(7, 11)))
        assert m.rank() + m.nullspace().rows == 11
