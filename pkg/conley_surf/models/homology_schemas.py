"""
Pydantic schemas for Z2 cohomology results.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from conley_surf.utils.gf2 import Gf2Matrix


class CohomologyIndex(BaseModel):
    """
    Dimensions over Z2 of H^0, H^1, H^2 of a pair.

    For a block pair (N, exit set) these are the cohomology index CH*(K).
    """

    model_config = ConfigDict(frozen=True)

    dim0: int = Field(..., ge=0)
    dim1: int = Field(..., ge=0)
    dim2: int = Field(..., ge=0)

    def as_tuple(self) -> tuple[int, int, int]:
        return self.dim0, self.dim1, self.dim2

    @property
    def euler(self) -> int:
        return self.dim0 - self.dim1 + self.dim2


class IntersectionForm(BaseModel):
    """
    Cup-product form on H^1 with values in H^2.

    Attributes:
        basis_size: dim H^1
        matrix: Symmetric 0/1 matrix on the computed H^1 basis
        rank: Rank over Z2
        has_self_square: Some class squares to a nonzero class
    """

    model_config = ConfigDict(frozen=True)

    basis_size: int = Field(..., ge=0)
    matrix: tuple[tuple[int, ...], ...]
    rank: int = Field(..., ge=0)
    has_self_square: bool

    @model_validator(mode="after")
    def validate_form(self) -> "IntersectionForm":
        """Square and symmetric"""
        m = self.matrix
        if len(m) != self.basis_size or any(len(row) != self.basis_size for row in m):
            raise ValueError("matrix must be basis_size x basis_size")
        if any(m[i][j] != m[j][i] for i in range(self.basis_size) for j in range(self.basis_size)):
            raise ValueError("intersection matrix must be symmetric")
        return self

    @property
    def gf2(self) -> Gf2Matrix:
        return Gf2Matrix.from_dense(self.matrix, cols=self.basis_size)
