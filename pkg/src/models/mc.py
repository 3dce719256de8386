# src/models/mc.py
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator


class McConfig(BaseModel):
    """One Monte-Carlo experiment: does p + range(A) meet B_radius(x*)?"""
    trials: int = Field(ge=100)
    D: int = Field(ge=1)
    d: int = Field(ge=1)
    radius: float = Field(gt=0.0)
    p: List[float]
    x_star: List[float]
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _shapes(self) -> "McConfig":
        if self.d > self.D:
            raise ValueError(f"subspace dimension {self.d} exceeds D={self.D}")
        if len(self.p) != self.D or len(self.x_star) != self.D:
            raise ValueError(f"p and x_star must have length {self.D}")
        return self


Verdict = Literal["consistent", "violation"]


class McEstimate(BaseModel):
    """Hit frequency, its Wilson 95% interval and the bound it is checked against"""
    p_hat: float = Field(ge=0.0, le=1.0)
    wilson95: Tuple[float, float]
    trials: int
    hits: int
    bound: float
    bound_kind: str
    verdict: Verdict
    inconclusive: int = 0
    flags: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _verdict_matches_interval(self) -> "McEstimate":
        expected = "violation" if self.wilson95[1] < self.bound else "consistent"
        if self.verdict != expected:
            raise ValueError(f"verdict {self.verdict} inconsistent with interval {self.wilson95} and bound {self.bound}")
        return self

    @property
    def half_width(self) -> float:
        return (self.wilson95[1] - self.wilson95[0]) / 2

    @property
    def bound_inside_interval(self) -> bool:
        return self.wilson95[0] <= self.bound <= self.wilson95[1]


class VerifyRow(BaseModel):
    """One grid point of the bound-consistency suite"""
    D: int
    d: int
    r: float
    tau: float
    p_hat: float
    lower: float
    upper: float
    trials: int
    verdict: Verdict
    exact: Optional[float] = None
