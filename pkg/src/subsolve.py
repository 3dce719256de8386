# src/subsolve.py
import logging
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel
from scipy.optimize import minimize

from src.errors import DimensionError
from src.models.problem import Objective, ReducedTestCase
from src.models.rng import RngState
from src.models.solver import SolverOutcome, SolverSpec, SolverSuccess
from src.verify_mc import wilson_interval

logger = logging.getLogger(__name__)


class _BudgetExhausted(Exception):
    pass


class ReducedProblem(BaseModel):
    """min_y f(Ay + p) subject to Ay + p in X"""
    objective: Objective
    A: np.ndarray
    p: np.ndarray

    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    @property
    def d(self) -> int:
        return self.A.shape[1]

    def lift(self, y: np.ndarray) -> np.ndarray:
        return self.A @ y + self.p

    def evaluate(self, y: np.ndarray) -> float:
        """f(Ay + p), or +inf outside a box feasible set without calling f"""
        x = self.lift(np.asarray(y, dtype=float))
        if not self.objective.contains(x):
            return np.inf
        return self.objective(x)


class _CountingEvaluator:
    """Counts full-space evaluations and keeps the first best (f, y) seen"""

    def __init__(self, problem: ReducedProblem, max_evals: Optional[int]):
        self.problem = problem
        self.max_evals = max_evals
        self.evals = 0
        self.f_best = np.inf
        self.y_best = np.zeros(problem.d)
        self.f_anchor: Optional[float] = None

    def __call__(self, y: np.ndarray) -> float:
        x = self.problem.lift(y)
        if not self.problem.objective.contains(x):
            value = np.inf
        else:
            if self.max_evals is not None and self.evals >= self.max_evals:
                raise _BudgetExhausted
            self.evals += 1
            value = self.problem.objective(x)
            if np.isnan(value):
                value = np.inf
        if self.f_anchor is None and not np.any(y):
            self.f_anchor = value
        if value < self.f_best:
            self.f_best = value
            self.y_best = np.array(y, dtype=float)
        return value


def make_reduced(obj: Objective, A: np.ndarray, p: np.ndarray) -> ReducedProblem:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    p = np.asarray(p, dtype=float)
    if A.shape[0] != obj.D or p.shape != (obj.D,):
        raise DimensionError(f"Embedding of shape {A.shape} with anchor {p.shape} does not match D={obj.D}")
    obj.require_feasible(p)
    return ReducedProblem(objective=obj, A=A, p=p)


def start_points(spec: SolverSpec, d: int, rng: RngState) -> np.ndarray:
    """y = 0 followed by uniform draws; a larger start count extends a smaller one"""
    extra = spec.n_starts(d) - 1
    draws = rng.generator().uniform(-spec.start_half_width, spec.start_half_width, size=(extra, d))
    return np.vstack([np.zeros((1, d)), draws])


def solve(
    rp: ReducedProblem,
    spec: SolverSpec,
    rng: RngState,
    max_evals: Optional[int] = None,
) -> SolverOutcome:
    """Nelder-Mead from each start; the best value over every evaluation wins.

    ``max_evals`` tightens ``spec.max_evals`` for this call. Running out of
    budget returns the best point so far with ``truncated`` set.
    """
    budgets = [b for b in (spec.max_evals, max_evals) if b is not None]
    counter = _CountingEvaluator(rp, min(budgets) if budgets else None)
    d = rp.d
    edge = np.eye(d) * spec.initial_edge

    truncated = False
    starts_used = 0
    for y0 in start_points(spec, d, rng):
        starts_used += 1
        try:
            minimize(
                counter,
                y0,
                method="Nelder-Mead",
                options={
                    "initial_simplex": np.vstack([y0, y0 + edge]),
                    "xatol": spec.tolerance,
                    "fatol": spec.tolerance,
                    "maxiter": spec.max_iter_per_dim * d,
                    "adaptive": False,
                },
            )
        except _BudgetExhausted:
            truncated = True
            logger.debug("Evaluation budget exhausted after %d starts", starts_used)
            break

    f_anchor = counter.f_anchor
    if f_anchor is None:
        f_anchor = rp.evaluate(np.zeros(d))
    return SolverOutcome(
        y_best=counter.y_best,
        f_best=float(counter.f_best),
        x_best=rp.lift(counter.y_best),
        f_anchor=float(f_anchor),
        evals=counter.evals,
        starts_used=starts_used,
        truncated=truncated,
    )


def measure_solver_success(
    family: Callable[[RngState], ReducedTestCase],
    spec: SolverSpec,
    trials: int,
    rng: RngState,
    accuracy: float = 1e-6,
) -> SolverSuccess:
    """Fraction of trials with f_best <= f_min + accuracy over instances drawn from ``family``"""
    successes = 0
    gaps = []
    for trial in range(trials):
        case = family(rng.spawn(0, trial))
        outcome = solve(make_reduced(case.objective, case.A, case.p), spec, rng.spawn(1, trial))
        gap = outcome.f_best - case.f_min
        gaps.append(float(gap))
        successes += int(gap <= accuracy)

    lower, upper = wilson_interval(successes, trials)
    logger.info("Solver %s: %d/%d successes", spec.kind, successes, trials)
    return SolverSuccess(
        rho_hat=successes / trials,
        interval=(lower, upper),
        successes=successes,
        trials=trials,
        accuracy=accuracy,
        gaps=gaps,
    )
