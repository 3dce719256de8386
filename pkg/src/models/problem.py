# src/models/problem.py
from typing import Callable, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.errors import DimensionError, PreconditionError


class BaseFunction(BaseModel):
    """Low-dimensional benchmark function with a known global minimum"""
    name: str
    dim: int = Field(ge=1)
    bounds: List[Tuple[float, float]]
    evaluate: Callable[[np.ndarray], float]
    f_star: float
    minimizers: List[List[float]] = Field(default_factory=list)

    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    @model_validator(mode="after")
    def _bounds_match_dim(self) -> "BaseFunction":
        if len(self.bounds) != self.dim:
            raise ValueError(f"{self.name}: {len(self.bounds)} bounds for dimension {self.dim}")
        return self

    def __call__(self, x: np.ndarray) -> float:
        return float(self.evaluate(np.asarray(x, dtype=float)))

    @property
    def is_unit_box(self) -> bool:
        return all(lo == -1.0 and hi == 1.0 for lo, hi in self.bounds)


FeasibleSet = Literal["unbounded", "box"]


class Objective(BaseModel):
    """Objective over R^D (or the box [-1, 1]^D) with optional problem metadata.

    ``effective_basis`` holds the d_e x D matrix U whose rows span the
    effective subspace; the constant subspace is its orthogonal complement.
    """
    name: str
    D: int = Field(ge=1)
    evaluate: Callable[[np.ndarray], float]
    feasible: FeasibleSet = "unbounded"
    f_star: Optional[float] = None
    effective_dim: Optional[int] = None
    effective_basis: Optional[np.ndarray] = None
    x_star: Optional[np.ndarray] = None
    base: Optional[BaseFunction] = None

    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    def __call__(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.D,):
            raise DimensionError(f"{self.name}: expected a point of shape ({self.D},), got {x.shape}")
        return float(self.evaluate(x))

    def contains(self, x: np.ndarray) -> bool:
        if self.feasible == "unbounded":
            return True
        return bool(np.all(np.abs(np.asarray(x)) <= 1.0))

    def require_feasible(self, x: np.ndarray) -> None:
        if not self.contains(x):
            raise PreconditionError(f"{self.name}: point lies outside the feasible set")

    def lipschitz_estimate(self, rng, n_points: int = 1000, step: float = 1e-6) -> float:
        """Largest central-difference gradient norm over sampled points.

        For generated problems the estimate is taken on the base function:
        f(x) = g(Ux) with orthonormal rows U gives ||grad f|| = ||grad g||.
        """
        from src.problems import estimate_lipschitz

        if self.base is not None:
            return estimate_lipschitz(self.base, rng, n_points=n_points, step=step)
        return estimate_lipschitz(self, rng, n_points=n_points, step=step)


class ProblemManifest(BaseModel):
    """Structured record describing one generated problem"""
    schema_version: int = 1
    name: str
    D: int
    d_e: Optional[int] = None
    f_star: Optional[float] = None
    seed: int
    feasible: FeasibleSet = "unbounded"
    lipschitz: Optional[float] = None


class ReducedTestCase(BaseModel):
    """An objective, an embedding (A, p) and the known optimum of the reduced problem"""
    objective: Objective
    A: np.ndarray
    p: np.ndarray
    f_min: float

    model_config = {"arbitrary_types_allowed": True, "frozen": True}
