# src/models/bounds.py
import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator


class CircularCone(BaseModel):
    """Circ_D(alpha) = {x : x_1 >= ||x|| cos(alpha)}"""
    D: int = Field(ge=2)
    alpha: float = Field(ge=0.0, le=math.pi / 2)

    model_config = {"frozen": True}


class IntrinsicVolumeVector(BaseModel):
    """Conic intrinsic volumes v_0..v_D, linear and natural-log values"""
    values: List[float]
    log_values: List[float]

    @property
    def total(self) -> float:
        return math.fsum(self.values)

    @property
    def even_sum(self) -> float:
        return math.fsum(self.values[0::2])

    @property
    def odd_sum(self) -> float:
        return math.fsum(self.values[1::2])


BoundKind = Literal["pointwise", "uniform", "led", "uniform-sampling", "raw"]


class BoundReport(BaseModel):
    """A success-probability lower bound with its inputs echoed back"""
    tau: float = Field(ge=0.0, le=1.0)
    log10_tau: float
    kind: BoundKind
    inputs: Dict[str, float] = Field(default_factory=dict)
    flags: List[str] = Field(default_factory=list)

    @field_validator("log10_tau")
    @classmethod
    def _not_positive(cls, value: float) -> float:
        if value > 1e-12:
            raise ValueError(f"log10 of a probability must be <= 0, got {value}")
        return min(value, 0.0)


class CrossoverReport(BaseModel):
    delta0: float
    distance: float
    log10_ratio: float
    regime: Literal["embedding-favored", "uniform-favored"]
    embedding: BoundReport
    uniform_sampling: BoundReport

    @model_validator(mode="after")
    def _regime_matches_sign(self) -> "CrossoverReport":
        expected = "embedding-favored" if self.log10_ratio > 0 else "uniform-favored"
        if self.regime != expected:
            raise ValueError(f"regime {self.regime} inconsistent with log10 ratio {self.log10_ratio}")
        return self


class ConvergenceParams(BaseModel):
    """Number of embeddings K_xi guaranteeing success probability at least xi"""
    xi: float = Field(gt=0.0, lt=1.0)
    tau_lb: float = Field(gt=0.0, le=1.0)
    rho_lb: float = Field(gt=0.0, le=1.0)
    k_xi: int = Field(ge=1)
    guaranteed: Optional[float] = None
