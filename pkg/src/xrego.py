# src/xrego.py
"""
X-REGO: repeated random embeddings x = A^k y + p^{k-1} with a global or local
subsolver, an anchor strategy for p^k and a (possibly increasing) subspace
dimension d^k. The first embedding index at which consecutive per-embedding
values stagnate is k_f, and d^{k_f - 1} estimates the effective dimension.
"""
import logging
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel

from src.conic_bounds import k_xi
from src.errors import ConfigError, DimensionError
from src.models.problem import Objective
from src.models.rng import RngState
from src.models.run import (
    AlgorithmSpec,
    DimensionSchedule,
    PStrategy,
    RunRecord,
    StopConfig,
    XregoResult,
)
from src.models.solver import SOLVER_PRESETS, SolverSpec
from src.rand_geometry import gen_gaussian, uniform_in_box
from src.subsolve import make_reduced, solve

logger = logging.getLogger(__name__)

# child streams of a run
_ANCHOR, _EMBEDDING, _SOLVE, _RESAMPLE = range(4)


class AnchorState(BaseModel):
    """What next_p may look at after embedding k"""
    k: int
    x_k: np.ndarray
    f_x_k: float
    p_prev: np.ndarray
    f_p_prev: float
    x_opt: np.ndarray
    fixed_point: np.ndarray
    k_f: Optional[int] = None
    feasible: str = "unbounded"

    model_config = {"arbitrary_types_allowed": True}


class NextAnchor(NamedTuple):
    p: np.ndarray
    resampled: bool
    clamped: bool


def _into_feasible(point: np.ndarray, feasible: str) -> NextAnchor:
    if feasible == "box" and np.any(np.abs(point) > 1.0):
        logger.warning("Anchor outside [-1, 1]^D; clamping")
        return NextAnchor(np.clip(point, -1.0, 1.0), False, True)
    return NextAnchor(point, False, False)


def next_p(strategy: PStrategy, state: AnchorState, rng: RngState) -> NextAnchor:
    """Anchor p^k for embedding k + 1"""
    stagnated = state.k_f is not None and state.k >= state.k_f

    if strategy.resamples and stagnated:
        moved = abs(state.f_x_k - state.f_p_prev) > strategy.gamma_res
        if strategy.kind == "adaptive-then-resample" and moved:
            return _into_feasible(state.x_k.copy(), state.feasible)
        point = uniform_in_box(rng, state.x_k.shape[0], strategy.resample_half_width)
        chosen = _into_feasible(point, state.feasible)
        return NextAnchor(chosen.p, True, chosen.clamped)

    if strategy.is_fixed:
        return _into_feasible(state.fixed_point.copy(), state.feasible)
    return _into_feasible(state.x_opt.copy(), state.feasible)


def check_stagnation(values: Sequence[float], gamma: float = 1e-5) -> Optional[int]:
    """Smallest k >= 2 with |f(x^k) - f(x^{k-1})| <= gamma (1-based), or None"""
    for k in range(2, len(values) + 1):
        if abs(values[k - 1] - values[k - 2]) <= gamma:
            return k
    return None


def check_local_stop(best_values: Sequence[float], n_stop: int = 3, gamma: float = 1e-5) -> bool:
    """True when f(x_opt) improved by at most gamma over the last n_stop embeddings"""
    if len(best_values) < n_stop:
        return False
    return best_values[-n_stop] - best_values[-1] <= gamma


def _initial_anchors(obj: Objective, strategy: PStrategy, rng: RngState):
    if strategy.anchor is not None:
        anchor = np.asarray(strategy.anchor, dtype=float)
        if anchor.shape != (obj.D,):
            raise DimensionError(f"Anchor must have shape ({obj.D},), got {anchor.shape}")
        return anchor, anchor.copy()
    if strategy.is_fixed:
        drawn = _into_feasible(uniform_in_box(rng, obj.D, strategy.resample_half_width), obj.feasible).p
        return drawn, drawn.copy()
    origin = np.zeros(obj.D)
    return origin, origin.copy()


def _target(obj: Objective, stop: StopConfig) -> Optional[float]:
    return stop.target_f if stop.target_f is not None else obj.f_star


def run_xrego(
    obj: Objective,
    strategy: PStrategy,
    schedule: DimensionSchedule,
    spec: SolverSpec,
    stop: StopConfig,
    rng: RngState,
) -> XregoResult:
    D = obj.D
    if schedule.d > D:
        raise DimensionError(f"Subspace dimension {schedule.d} exceeds D={D}")
    d_cap = max(schedule.d, D - 1)
    max_embeddings = stop.max_embeddings or D
    target = _target(obj, stop)

    p, fixed_point = _initial_anchors(obj, strategy, rng.spawn(_ANCHOR))
    obj.require_feasible(p)

    d = schedule.d
    dims, values, bests, trace = [], [], [], []
    x_opt, f_opt = p.copy(), np.inf
    k_f: Optional[int] = None
    d_e_est: Optional[int] = None
    total_evals = 0
    stop_reason = "max-embeddings"

    for k in range(1, max_embeddings + 1):
        A = gen_gaussian(rng.spawn(_EMBEDDING, k), D, d)
        remaining = None if stop.max_evals is None else stop.max_evals - total_evals
        flags = []
        try:
            outcome = solve(make_reduced(obj, A, p), spec, rng.spawn(_SOLVE, k), max_evals=remaining)
            x_k, f_x, f_anchor, evals = outcome.x_best, outcome.f_best, outcome.f_anchor, outcome.evals
            if outcome.truncated:
                flags.append("truncated")
        except Exception:
            logger.exception("Subsolve failed at embedding %d of %s", k, obj.name)
            x_k, f_x, f_anchor, evals = p.copy(), np.inf, np.inf, 0
            flags.append("subsolve-failed")

        total_evals += evals
        if f_x < f_opt:
            x_opt, f_opt = x_k.copy(), f_x
        dims.append(d)
        values.append(f_x)
        bests.append(f_opt)

        if k_f is None:
            k_f = check_stagnation(values, stop.gamma)
            if k_f is not None:
                d_e_est = dims[k_f - 2]
                logger.debug("%s: stagnation at k=%d, d_e estimate %d", obj.name, k_f, d_e_est)

        state = AnchorState(
            k=k, x_k=x_k, f_x_k=f_x, p_prev=p, f_p_prev=f_anchor,
            x_opt=x_opt, fixed_point=fixed_point, k_f=k_f, feasible=obj.feasible,
        )
        chosen = next_p(strategy, state, rng.spawn(_RESAMPLE, k))
        if chosen.clamped:
            flags.append("anchor-clamped")
        trace.append(RunRecord(
            k=k,
            d=d,
            p=p.tolist(),
            f_x=f_x,
            f_opt=f_opt,
            evals=evals,
            cumulative_evals=total_evals,
            stagnation=k == k_f,
            resampled=chosen.resampled,
            flags=flags,
        ))

        local_active = schedule.kind == "constant" or (k_f is not None and k > k_f)
        if stop.stop_at_target and target is not None and f_opt <= target + stop.epsilon:
            stop_reason = "target"
            break
        if stop.max_evals is not None and ("truncated" in flags or total_evals >= stop.max_evals):
            stop_reason = "max-evals"
            break
        if stop.rule == "stagnation" and k_f is not None:
            stop_reason = "stagnation"
            break
        if stop.rule == "local" and local_active and check_local_stop(bests, stop.n_stop, stop.gamma):
            stop_reason = "local-stop"
            break

        p = chosen.p
        if schedule.kind == "increasing":
            if stop.rule == "local" and k_f is not None:
                d = d_e_est
            else:
                d = min(d + 1, d_cap)

    return XregoResult(
        x_opt=x_opt.tolist(),
        f_opt=f_opt,
        d_e_est=D if d_e_est is None else d_e_est,
        k_f=k_f,
        embeddings=len(trace),
        total_evals=total_evals,
        trace=trace,
        success=None if target is None else bool(f_opt <= target + stop.epsilon),
        stop_reason=stop_reason,
    )


def run_no_embedding(
    obj: Objective,
    spec: SolverSpec,
    stop: StopConfig,
    rng: RngState,
    anchor: Optional[Sequence[float]] = None,
) -> XregoResult:
    """The subsolver applied to the full problem (A = I_D), as a one-record result"""
    p = np.zeros(obj.D) if anchor is None else np.asarray(anchor, dtype=float)
    outcome = solve(make_reduced(obj, np.eye(obj.D), p), spec, rng.spawn(_SOLVE, 1), max_evals=stop.max_evals)
    target = _target(obj, stop)
    record = RunRecord(
        k=1,
        d=obj.D,
        p=p.tolist(),
        f_x=outcome.f_best,
        f_opt=outcome.f_best,
        evals=outcome.evals,
        cumulative_evals=outcome.evals,
        flags=["truncated"] if outcome.truncated else [],
    )
    return XregoResult(
        x_opt=outcome.x_best.tolist(),
        f_opt=outcome.f_best,
        embeddings=1,
        total_evals=outcome.evals,
        trace=[record],
        success=None if target is None else bool(outcome.f_best <= target + stop.epsilon),
        stop_reason="max-evals" if outcome.truncated else "single-solve",
    )


def simulate_convergence(tau_rho: float, xi: float, runs: int, rng: RngState) -> float:
    """Fraction of simulated runs, each embedding succeeding with probability tau_rho,
    that succeed within K_xi embeddings"""
    budget = k_xi(xi, tau_rho, 1.0).k_xi
    first_success = rng.generator().geometric(tau_rho, size=runs)
    return float(np.mean(first_success <= budget))


GLOBAL_ALGORITHMS = ("A-REGO", "N-REGO")
LOCAL_ALGORITHMS = ("LA-REGO", "LN-REGO")
ALGORITHM_NAMES = GLOBAL_ALGORITHMS + LOCAL_ALGORITHMS + ("no-embedding",)

_STRATEGIES = {
    "A-REGO": "adaptive-best",
    "N-REGO": "fixed",
    "LA-REGO": "adaptive-then-resample",
    "LN-REGO": "fixed-then-resample",
}


def algorithm_preset(
    name: str,
    solver: Union[SolverSpec, str, None] = None,
    d_e: Optional[int] = None,
    n_stop: int = 3,
    max_evals: Optional[int] = None,
) -> AlgorithmSpec:
    """Named algorithm with its usual subsolver and stopping rule.

    With ``d_e`` the subspace dimension is fixed at the known effective
    dimension: one embedding for global subsolvers, up to 50 with the local
    stopping rule otherwise.
    """
    if name not in ALGORITHM_NAMES:
        raise ConfigError(f"Unknown algorithm '{name}'. Known algorithms: {', '.join(ALGORITHM_NAMES)}")
    if isinstance(solver, str):
        if solver not in SOLVER_PRESETS:
            raise ConfigError(f"Unknown solver '{solver}'. Known solvers: {', '.join(SOLVER_PRESETS)}")
        solver = SOLVER_PRESETS[solver]
    if solver is None:
        solver = SOLVER_PRESETS["local" if name in LOCAL_ALGORITHMS else "expensive-multistart"]

    if name == "no-embedding":
        return AlgorithmSpec(name=name, solver=solver, stop=StopConfig(rule="budget", max_evals=max_evals), embed=False)

    strategy = PStrategy(kind=_STRATEGIES[name])
    if d_e is None:
        rule = "local" if name in LOCAL_ALGORITHMS else "stagnation"
        return AlgorithmSpec(
            name=name,
            strategy=strategy,
            schedule=DimensionSchedule(kind="increasing", d=1),
            solver=solver,
            stop=StopConfig(rule=rule, n_stop=n_stop, max_evals=max_evals),
        )

    if name in GLOBAL_ALGORITHMS:
        stop = StopConfig(rule="budget", max_embeddings=1, max_evals=max_evals)
    else:
        stop = StopConfig(rule="local", n_stop=n_stop, max_embeddings=50, max_evals=max_evals)
    return AlgorithmSpec(
        name=f"{name}-known-de",
        strategy=strategy,
        schedule=DimensionSchedule(kind="constant", d=d_e),
        solver=solver,
        stop=stop,
    )


def run_algorithm(obj: Objective, algorithm: AlgorithmSpec, rng: RngState) -> XregoResult:
    if not algorithm.embed:
        return run_no_embedding(obj, algorithm.solver, algorithm.stop, rng, algorithm.strategy.anchor)
    return run_xrego(obj, algorithm.strategy, algorithm.schedule, algorithm.solver, algorithm.stop, rng)
