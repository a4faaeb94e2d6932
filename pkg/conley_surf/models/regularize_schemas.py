"""
Schemas for regularization surgery traces.
"""

from enum import Enum

from pydantic import BaseModel, Field, model_validator


class SurgerySide(str, Enum):
    """Which side of the block a cut regularizes."""
    EXIT = "exit"
    ENTRANCE = "entrance"


class SurgeryStep(BaseModel):
    """
    One cut along a transit spine.

    Each cut removes exactly one obstruction generator and raises chi by one.
    """

    phase: int = Field(..., ge=1, le=2)
    spine: tuple[int, ...] = Field(..., min_length=3, description="Path actually cut (after subdivision)")
    obstruction_before: int = Field(..., ge=1)
    obstruction_after: int = Field(..., ge=0)
    euler_before: int
    euler_after: int
    side: SurgerySide = SurgerySide.EXIT

    @model_validator(mode="after")
    def validate_bookkeeping(self) -> "SurgeryStep":
        if self.obstruction_after != self.obstruction_before - 1:
            raise ValueError(
                f"obstruction {self.obstruction_before}->{self.obstruction_after} did not drop by one"
            )
        if self.euler_after != self.euler_before + 1:
            raise ValueError(f"chi {self.euler_before}->{self.euler_after} did not rise by one")
        return self


class SurgeryTrace(BaseModel):
    """Ordered cuts performed by a regularization run."""

    block_name: str
    steps: list[SurgeryStep] = Field(default_factory=list)

    @property
    def cuts(self) -> int:
        return len(self.steps)

    def phase_counts(self) -> dict[int, int]:
        return {phase: sum(1 for s in self.steps if s.phase == phase) for phase in (1, 2)}

    def extended(self, other: "SurgeryTrace") -> "SurgeryTrace":
        return SurgeryTrace(block_name=self.block_name, steps=self.steps + other.steps)
