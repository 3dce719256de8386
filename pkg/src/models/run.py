# src/models/run.py
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from src.models.solver import SolverSpec


class PStrategy(BaseModel):
    """How the anchor p^k of the next embedding is chosen.

    fixed: p^k = anchor (or a uniform draw in the resample box made once per run)
    adaptive-best: p^k = x_opt^k
    fixed-then-resample / adaptive-then-resample: as fixed / adaptive-best until
    stagnation, then uniform draws (always, or when the last embedding moved f
    by at most gamma_res).
    """
    kind: Literal["fixed", "adaptive-best", "fixed-then-resample", "adaptive-then-resample"] = "adaptive-best"
    anchor: Optional[List[float]] = None
    resample_half_width: float = Field(default=1.0, gt=0.0)
    gamma_res: float = Field(default=1e-5, ge=0.0)

    model_config = {"extra": "forbid", "frozen": True}

    @property
    def is_fixed(self) -> bool:
        return self.kind in ("fixed", "fixed-then-resample")

    @property
    def resamples(self) -> bool:
        return self.kind.endswith("-then-resample")


class DimensionSchedule(BaseModel):
    """constant: d^k = d. increasing: d^1 = d, d^{k+1} = d^k + 1 up to D - 1"""
    kind: Literal["constant", "increasing"] = "increasing"
    d: int = Field(default=1, ge=1)

    model_config = {"extra": "forbid", "frozen": True}


class StopConfig(BaseModel):
    """Termination of an X-REGO run.

    rule=stagnation stops at k_f. rule=local keeps going after k_f with d frozen
    at the estimate and stops once the best value improved by at most gamma over
    the last n_stop embeddings. rule=budget only stops on the caps.
    """
    rule: Literal["stagnation", "local", "budget"] = "stagnation"
    gamma: float = Field(default=1e-5, ge=0.0)
    n_stop: int = Field(default=3, ge=2)
    max_embeddings: Optional[int] = Field(default=None, ge=1)
    max_evals: Optional[int] = Field(default=None, ge=1)
    target_f: Optional[float] = None
    epsilon: float = Field(default=1e-3, gt=0.0)
    stop_at_target: bool = False

    model_config = {"extra": "forbid", "frozen": True}


class RunRecord(BaseModel):
    """One embedding of a run"""
    k: int
    d: int
    p: List[float]
    f_x: float
    f_opt: float
    evals: int
    cumulative_evals: int
    stagnation: bool = False
    resampled: bool = False
    flags: List[str] = Field(default_factory=list)


class XregoResult(BaseModel):
    x_opt: List[float]
    f_opt: float
    d_e_est: Optional[int] = None
    k_f: Optional[int] = None
    embeddings: int
    total_evals: int
    trace: List[RunRecord]
    success: Optional[bool] = None
    stop_reason: str = ""

    @model_validator(mode="after")
    def _f_opt_is_trace_minimum(self) -> "XregoResult":
        if self.trace and self.f_opt != min(record.f_x for record in self.trace):
            raise ValueError("f_opt must equal the smallest per-embedding value in the trace")
        return self


class AlgorithmSpec(BaseModel):
    """A named algorithm: anchor strategy, dimension schedule, subsolver and stopping rule"""
    name: str
    strategy: PStrategy = PStrategy()
    schedule: DimensionSchedule = DimensionSchedule()
    solver: SolverSpec = SolverSpec()
    stop: StopConfig = StopConfig()
    embed: bool = True

    model_config = {"extra": "forbid", "frozen": True}
