# src/models/experiment.py
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

from src.models.solver import SolverKind, SolverSpec

SCHEMA_VERSION = 1


class AlgorithmEntry(BaseModel):
    """An algorithm as named in an experiment file"""
    name: str
    solver: Union[SolverKind, SolverSpec, None] = None
    known_d_e: bool = False
    label: Optional[str] = None

    model_config = {"extra": "forbid"}

    @property
    def algorithm_id(self) -> str:
        if self.label:
            return self.label
        solver = self.solver.kind if isinstance(self.solver, SolverSpec) else self.solver
        parts = [self.name] + ([solver] if solver else []) + (["known-de"] if self.known_d_e else [])
        return "/".join(parts)


class ExperimentConfig(BaseModel):
    schema_version: Literal[1] = SCHEMA_VERSION
    problems: Optional[List[str]] = None
    dims: List[int] = Field(default_factory=lambda: [100], min_length=1)
    algorithms: List[AlgorithmEntry] = Field(min_length=1)
    seeds: int = Field(default=3, ge=1)
    base_seed: int = Field(default=0, ge=0)
    epsilon: float = Field(default=1e-3, gt=0.0)
    gamma: float = Field(default=1e-5, ge=0.0)
    n_stop: int = Field(default=3, ge=2)
    max_embeddings: Optional[int] = Field(default=None, ge=1)
    max_evals: Optional[int] = Field(default=None, ge=1)
    output: str = "records.jsonl"

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _unique_algorithm_ids(self) -> "ExperimentConfig":
        ids = [entry.algorithm_id for entry in self.algorithms]
        if len(set(ids)) != len(ids):
            raise ValueError(f"algorithm ids must be unique, got {ids}")
        return self


class TracePoint(BaseModel):
    cumulative_evals: int
    f_opt: Optional[float] = None


class CellResult(BaseModel):
    """Persisted outcome of one (problem, D, algorithm, seed) cell; n_f None means infinite"""
    schema_version: int = SCHEMA_VERSION
    cell_id: str
    problem: str
    D: int
    algorithm: str
    seed: int
    status: Literal["ok", "failed"] = "ok"
    error: Optional[str] = None
    f_star: Optional[float] = None
    d_e: Optional[int] = None
    epsilon: float = 1e-3
    n_f: Optional[int] = None
    f_opt: Optional[float] = None
    d_e_est: Optional[int] = None
    k_f: Optional[int] = None
    embeddings: int = 0
    total_evals: int = 0
    trace: List[TracePoint] = Field(default_factory=list)

    @model_validator(mode="after")
    def _n_f_matches_trace(self) -> "CellResult":
        expected = evals_to_success(self.trace, self.f_star, self.epsilon)
        if self.n_f != expected:
            raise ValueError(f"n_f={self.n_f} disagrees with the trace (expected {expected})")
        return self

    @property
    def solved(self) -> bool:
        return self.n_f is not None


def evals_to_success(trace: List[TracePoint], f_star: Optional[float], epsilon: float) -> Optional[int]:
    """Cumulative evaluations at the first trace point with f_opt <= f* + epsilon"""
    if f_star is None:
        return None
    for point in trace:
        if point.f_opt is not None and point.f_opt <= f_star + epsilon:
            return point.cumulative_evals
    return None


class ProfileCurve(BaseModel):
    """pi_A(alpha) = share of problems solved within alpha times the best cost"""
    algorithm: str
    ratios: List[Optional[float]]
    alphas: List[float]
    values: List[float]
    solved_fraction: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _monotone(self) -> "ProfileCurve":
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("profile values must be nondecreasing in alpha")
        return self
