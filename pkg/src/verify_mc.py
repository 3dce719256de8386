# src/verify_mc.py
"""
Monte-Carlo estimates of the probability that a random affine subspace meets
a ball (or that a random linear subspace meets a circular cone), checked
against the closed-form bounds of ``src.conic_bounds``.

Trials run in fixed-size batches, each batch on its own child stream, so an
estimate depends only on (seed, trials) and never on scheduling.
"""
import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.stats import norm

from src.conic_bounds import crofton_tail, tau_led, tau_pointwise
from src.errors import DimensionError, DomainError
from src.models.bounds import CircularCone
from src.models.mc import McConfig, McEstimate, VerifyRow
from src.models.rng import RngState
from src.rand_geometry import (
    affine_subspace_distance_batch,
    gen_gaussian_batch,
    projection_norm_batch,
)

logger = logging.getLogger(__name__)

BATCH_SIZE = 4096
DEFAULT_GRID = {"D": [3, 5, 10, 20], "d": [1, 2, 3], "r": [0.2, 0.5, 0.8]}


def wilson_interval(hits: int, n: int, confidence: float = 0.95) -> Tuple[float, float]:
    if n <= 0:
        raise DomainError(f"Need at least one trial, got {n}")
    if not 0 <= hits <= n:
        raise DomainError(f"hits must lie in [0, {n}], got {hits}")
    z = float(norm.ppf(0.5 + confidence / 2))
    p_hat = hits / n
    denom = 1 + z * z / n
    center = (p_hat + z * z / (2 * n)) / denom
    half = z * math.sqrt(p_hat * (1 - p_hat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def planar_hit_probability(r: float) -> float:
    """Exact D = 2, d = 1 probability (2/pi) arcsin(r) for a line through p"""
    return 2.0 / math.pi * math.asin(min(r, 1.0))


def _batches(trials: int) -> Iterable[Tuple[int, int]]:
    for index, start in enumerate(range(0, trials, BATCH_SIZE)):
        yield index, min(BATCH_SIZE, trials - start)


def _estimate(hits: int, trials: int, bound: float, kind: str, flags: Optional[List[str]] = None) -> McEstimate:
    lower, upper = wilson_interval(hits, trials)
    verdict = "violation" if upper < bound else "consistent"
    if verdict == "violation":
        logger.warning("%s bound %.6g exceeds Wilson upper end %.6g (%d/%d)", kind, bound, upper, hits, trials)
    return McEstimate(
        p_hat=hits / trials,
        wilson95=(lower, upper),
        trials=trials,
        hits=hits,
        bound=bound,
        bound_kind=kind,
        verdict=verdict,
        flags=flags or [],
    )


def estimate_hit_probability(cfg: McConfig) -> McEstimate:
    """Frequency of p + range(A) meeting B_radius(x*) for Gaussian A, against tau"""
    p = np.asarray(cfg.p, dtype=float)
    x_star = np.asarray(cfg.x_star, dtype=float)
    rng = RngState(seed=cfg.seed)

    hits = 0
    for index, size in _batches(cfg.trials):
        A_batch = gen_gaussian_batch(rng.spawn(index), size, cfg.D, cfg.d)
        hits += int(np.count_nonzero(affine_subspace_distance_batch(A_batch, p, x_star) <= cfg.radius))

    distance = float(np.linalg.norm(x_star - p))
    if cfg.d >= cfg.D:
        return _estimate(hits, cfg.trials, 1.0, "pointwise", ["full-space"])
    report = tau_pointwise(cfg.radius, 1.0, distance, cfg.d, cfg.D)
    return _estimate(hits, cfg.trials, report.tau, "pointwise", report.flags)


def estimate_led_hit_probability(cfg: McConfig, U: np.ndarray) -> McEstimate:
    """Same experiment seen through the effective subspace spanned by the rows of ``U``.

    The hit test runs in d_e dimensions on (U p, U A, U x*); ``cfg.radius`` is
    measured in the effective space.
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    d_e = U.shape[0]
    if U.shape[1] != cfg.D:
        raise DimensionError(f"Effective basis must be d_e x {cfg.D}, got {U.shape}")
    p_eff = U @ np.asarray(cfg.p, dtype=float)
    x_eff = U @ np.asarray(cfg.x_star, dtype=float)
    rng = RngState(seed=cfg.seed)

    hits = 0
    for index, size in _batches(cfg.trials):
        A_batch = gen_gaussian_batch(rng.spawn(index), size, cfg.D, cfg.d)
        B_batch = np.einsum("eD,nDd->ned", U, A_batch)
        hits += int(np.count_nonzero(affine_subspace_distance_batch(B_batch, p_eff, x_eff) <= cfg.radius))

    report = tau_led(cfg.radius, 1.0, float(np.linalg.norm(x_eff - p_eff)), cfg.d, d_e)
    return _estimate(hits, cfg.trials, report.tau, "led", report.flags)


def estimate_cone_ray_probability(D: int, d: int, alpha: float, trials: int, seed: int) -> McEstimate:
    """Frequency of range(A) meeting Circ_D(alpha) away from the origin, against the Crofton tail.

    The largest value of (Ay)_1 / ||Ay|| over y != 0 is ||P e_1|| with P the
    orthogonal projector onto range(A), so each trial is decided exactly.
    """
    if not 0.0 < alpha < math.pi / 2:
        raise DomainError(f"alpha must lie in (0, pi/2), got {alpha}")
    if trials < 1:
        raise DomainError(f"Need at least one trial, got {trials}")
    rng = RngState(seed=seed)
    e1 = np.zeros(D)
    e1[0] = 1.0
    threshold = math.cos(alpha)

    hits = 0
    for index, size in _batches(trials):
        A_batch = gen_gaussian_batch(rng.spawn(index), size, D, d)
        hits += int(np.count_nonzero(projection_norm_batch(A_batch, e1) >= threshold))

    bound = 1.0 if d >= D else crofton_tail(D, d, CircularCone(D=D, alpha=alpha))
    return _estimate(hits, trials, bound, "crofton")


def _grid_points(grid: Union[str, dict, Sequence[Tuple[int, int, float]]]) -> List[Tuple[int, int, float]]:
    if grid == "default":
        grid = DEFAULT_GRID
    if isinstance(grid, dict):
        return [(D, d, r) for D in grid["D"] for d in grid["d"] for r in grid["r"] if d < D]
    points = [tuple(point) for point in grid]
    for D, d, _ in points:
        if not 1 <= d < D:
            raise DimensionError(f"Grid point needs 1 <= d < D, got d={d}, D={D}")
    return points


def _verify_point(D: int, d: int, r: float, trials: int, seed: int) -> VerifyRow:
    x_star = [1.0] + [0.0] * (D - 1)
    estimate = estimate_hit_probability(
        McConfig(trials=trials, D=D, d=d, radius=r, p=[0.0] * D, x_star=x_star, seed=seed)
    )
    return VerifyRow(
        D=D,
        d=d,
        r=r,
        tau=estimate.bound,
        p_hat=estimate.p_hat,
        lower=estimate.wilson95[0],
        upper=estimate.wilson95[1],
        trials=trials,
        verdict=estimate.verdict,
        exact=planar_hit_probability(r) if (D, d) == (2, 1) else None,
    )


def run_grid(
    grid: Union[str, dict, Sequence[Tuple[int, int, float]]] = "default",
    trials: int = 20000,
    seed: int = 0,
    jobs: int = 1,
) -> List[VerifyRow]:
    """Bound-consistency suite: p = 0, x* = e_1 and radius r, so r_p = r at each (D, d, r)"""
    points = _grid_points(grid)
    root = RngState(seed=seed)
    seeds = [int(root.spawn(i).generator().integers(0, 2**63)) for i in range(len(points))]
    rows = Parallel(n_jobs=jobs)(
        delayed(_verify_point)(D, d, r, trials, s) for (D, d, r), s in zip(points, seeds)
    )
    violations = sum(row.verdict == "violation" for row in rows)
    logger.info("Verified %d grid points, %d violations", len(rows), violations)
    return list(rows)


def grid_table(rows: Sequence[VerifyRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows])
