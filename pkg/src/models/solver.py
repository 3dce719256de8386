# src/models/solver.py
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

SolverKind = Literal["local", "cheap-multistart", "expensive-multistart"]


class SolverSpec(BaseModel):
    """Subsolver configuration: Nelder-Mead from y = 0 plus uniform starts in the start box"""
    kind: SolverKind = "expensive-multistart"
    start_half_width: float = Field(default=1.0, gt=0.0)
    max_iter_per_dim: int = Field(default=500, ge=1)
    tolerance: float = Field(default=1e-8, gt=0.0)
    initial_edge: float = Field(default=0.1, gt=0.0)
    max_evals: Optional[int] = Field(default=None, ge=1)

    model_config = {"extra": "forbid", "frozen": True}

    def n_starts(self, d: int) -> int:
        if self.kind == "local":
            return 1
        if self.kind == "cheap-multistart":
            return min(100, 2 * d)
        return min(200, 10 * d)


SOLVER_PRESETS = {
    "local": SolverSpec(kind="local"),
    "cheap-multistart": SolverSpec(kind="cheap-multistart"),
    "expensive-multistart": SolverSpec(kind="expensive-multistart"),
}


class SolverOutcome(BaseModel):
    """Best point found on one reduced problem; evals count full-space f calls"""
    y_best: np.ndarray
    f_best: float
    x_best: np.ndarray
    f_anchor: float
    evals: int
    starts_used: int
    truncated: bool = False

    model_config = {"arbitrary_types_allowed": True}


class SolverSuccess(BaseModel):
    """Empirical solver success rate with its Wilson 95% interval"""
    rho_hat: float = Field(ge=0.0, le=1.0)
    interval: Tuple[float, float]
    successes: int
    trials: int
    accuracy: float
    gaps: List[float] = Field(default_factory=list)
