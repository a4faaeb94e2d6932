"""
Dense GF(2) linear algebra on bit-packed numpy words.

Rows are packed little-endian into ``uint64`` words, so a row XOR is a single
vectorized operation over ``ceil(cols / 64)`` words. Complexes handled by the
toolkit are desk-scale, which keeps dense storage adequate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

WORD = 64


def _pack(dense: np.ndarray) -> np.ndarray:
    rows, cols = dense.shape
    padded = -(-cols // WORD) * WORD
    buf = np.zeros((rows, padded), dtype=np.uint8)
    buf[:, :cols] = dense & 1
    packed = np.packbits(buf, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


class Gf2Matrix:
    """
    Matrix over GF(2).

    Attributes:
        rows: Row count
        cols: Column count
        words: Packed bits, shape ``(rows, ceil(cols / 64))``
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, words: np.ndarray, cols: int):
        self.words = np.ascontiguousarray(words, dtype=np.uint64)
        self.rows = int(self.words.shape[0])
        self.cols = int(cols)

    # ==================== Construction ====================

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]] | np.ndarray, cols: int | None = None) -> "Gf2Matrix":
        """Build from a 0/1 array (entries are reduced mod 2)."""
        arr = np.asarray(dense, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else np.zeros((0, cols or 0), dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((arr.shape[0], cols if cols is not None else arr.shape[1]), dtype=np.int64)
        return cls(_pack((arr % 2).astype(np.uint8)), arr.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(np.zeros((rows, -(-cols // WORD)), dtype=np.uint64), cols)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8), cols=n)

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], cols: int) -> "Gf2Matrix":
        """One row per support set of column indices."""
        supports = [list(s) for s in supports]
        dense = np.zeros((len(supports), cols), dtype=np.uint8)
        for i, support in enumerate(supports):
            for j in support:
                dense[i, j] ^= 1
        return cls.from_dense(dense, cols=cols)

    @classmethod
    def vstack(cls, blocks: Sequence["Gf2Matrix"], cols: int) -> "Gf2Matrix":
        parts = [b.words for b in blocks if b.rows]
        if not parts:
            return cls.zeros(0, cols)
        return cls(np.vstack(parts), cols)

    # ==================== Access ====================

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> np.ndarray:
        """0/1 ``uint8`` array of shape ``(rows, cols)``."""
        if self.rows == 0 or self.cols == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        raw = np.ascontiguousarray(self.words.astype("<u8")).view(np.uint8)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self.cols]

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        w, bit = divmod(j, WORD)
        return int((self.words[i, w] >> np.uint64(bit)) & np.uint64(1))

    def row(self, i: int) -> "Gf2Matrix":
        return Gf2Matrix(self.words[i : i + 1].copy(), self.cols)

    def take_rows(self, indices: Sequence[int]) -> "Gf2Matrix":
        return Gf2Matrix(self.words[list(indices)].copy(), self.cols)

    def take_columns(self, indices: Sequence[int]) -> "Gf2Matrix":
        return Gf2Matrix.from_dense(self.to_dense()[:, list(indices)], cols=len(indices))

    def nonzero_rows(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.words.any(axis=1))[0]]

    def is_zero(self) -> bool:
        return not self.words.any()

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self == self.transpose()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.shape, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.rows}x{self.cols}, rank={self.rank()})"

    # ==================== Arithmetic ====================

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix.from_dense(self.to_dense().T, cols=self.rows)

    @property
    def T(self) -> "Gf2Matrix":
        return self.transpose()

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch {self.shape} vs {other.shape}")
        return Gf2Matrix(self.words ^ other.words, self.cols)

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.shape} by {other.shape}")
        product = self.to_dense().astype(np.int64) @ other.to_dense().astype(np.int64)
        return Gf2Matrix.from_dense(product % 2, cols=other.cols)

    # ==================== Elimination ====================

    def echelon(self) -> "EchelonForm":
        """Reduced row echelon form by XOR elimination over packed rows."""
        work = self.words.copy()
        pivots: list[int] = []
        r = 0
        for col in range(self.cols):
            if r == self.rows:
                break
            w, bit = divmod(col, WORD)
            column = ((work[:, w] >> np.uint64(bit)) & np.uint64(1)).astype(bool)
            candidates = np.nonzero(column[r:])[0]
            if candidates.size == 0:
                continue
            p = r + int(candidates[0])
            if p != r:
                work[[r, p]] = work[[p, r]]
                column[[r, p]] = column[[p, r]]
            column[r] = False
            work[column] ^= work[r]
            pivots.append(col)
            r += 1
        return EchelonForm(Gf2Matrix(work[:r], self.cols), tuple(pivots))

    def rank(self) -> int:
        return len(self.echelon().pivots)

    def nullspace(self) -> "Gf2Matrix":
        """Basis of ``{x : A x = 0}`` as rows, one per free column."""
        ech = self.echelon()
        free = ech.free_columns()
        basis = np.zeros((len(free), self.cols), dtype=np.uint8)
        if free:
            basis[np.arange(len(free)), free] = 1
            if ech.pivots:
                basis[:, list(ech.pivots)] = ech.matrix.to_dense()[:, free].T
        return Gf2Matrix.from_dense(basis, cols=self.cols)


@dataclass(frozen=True)
class EchelonForm:
    """
    Reduced row echelon form.

    ``matrix`` holds only the nonzero rows; ``pivots[i]`` is the leading
    column of row ``i``.
    """

    matrix: Gf2Matrix
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def free_columns(self) -> list[int]:
        pivots = set(self.pivots)
        return [c for c in range(self.matrix.cols) if c not in pivots]

    def reduce(self, vectors: Gf2Matrix) -> Gf2Matrix:
        """
        Residues of row vectors modulo the row space.

        Residues vanish at every pivot column, so two vectors differ by an
        element of the row space exactly when their residues agree.
        """
        work = vectors.words.copy()
        for i, col in enumerate(self.pivots):
            w, bit = divmod(col, WORD)
            mask = ((work[:, w] >> np.uint64(bit)) & np.uint64(1)).astype(bool)
            work[mask] ^= self.matrix.words[i]
        return Gf2Matrix(work, vectors.cols)

    def contains(self, vectors: Gf2Matrix) -> bool:
        """True when every row of ``vectors`` lies in the row space."""
        return self.reduce(vectors).is_zero()


def gf2_rank(dense: Sequence[Sequence[int]] | np.ndarray) -> int:
    """Rank of a dense 0/1 array."""
    return Gf2Matrix.from_dense(dense).rank()
