# src/profiles.py
"""Performance profiles over evaluations-to-success, aggregated by the median over seeds."""
import logging
import math
from typing import List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np
import pandas as pd

from src.errors import DomainError
from src.models.experiment import CellResult, ProfileCurve

logger = logging.getLogger(__name__)


def cost_table(results: Sequence[CellResult]) -> pd.DataFrame:
    """Median N_f per problem (name and D) and algorithm, infinite when unsolved"""
    rows = [
        {
            "problem": f"{r.problem}|D={r.D}",
            "algorithm": r.algorithm,
            "n_f": math.inf if r.n_f is None else float(r.n_f),
        }
        for r in results
    ]
    if not rows:
        raise DomainError("No records to profile")
    frame = pd.DataFrame(rows)
    return frame.groupby(["problem", "algorithm"])["n_f"].median().unstack("algorithm").fillna(math.inf)


def performance_profile(
    results: Sequence[CellResult],
    alphas: Optional[Sequence[float]] = None,
    alpha_max: Optional[float] = None,
    points: int = 200,
) -> List[ProfileCurve]:
    costs = cost_table(results).sort_index().sort_index(axis=1)
    best = costs.min(axis=1)
    unsolved = best[np.isinf(best)].index.tolist()
    if unsolved:
        logger.warning("Excluding %d problems no algorithm solved: %s", len(unsolved), ", ".join(unsolved))
    costs, best = costs[np.isfinite(best)], best[np.isfinite(best)]
    if costs.empty:
        raise DomainError("No problem was solved by any algorithm")

    ratios = costs.div(best, axis=0)
    if alphas is None:
        finite = ratios.to_numpy()[np.isfinite(ratios.to_numpy())]
        top = alpha_max if alpha_max is not None else max(1.0, float(finite.max()))
        alphas = np.linspace(1.0, top, points)
    alphas = np.asarray(sorted(alphas), dtype=float)

    curves = []
    n_problems = len(ratios)
    for algorithm in ratios.columns:
        column = ratios[algorithm].to_numpy()
        values = [float(np.count_nonzero(column <= alpha)) / n_problems for alpha in alphas]
        curves.append(ProfileCurve(
            algorithm=algorithm,
            ratios=[None if np.isinf(v) else float(v) for v in np.sort(column)],
            alphas=alphas.tolist(),
            values=values,
            solved_fraction=float(np.count_nonzero(np.isfinite(column))) / n_problems,
        ))
    return curves


def profile_frame(curves: Sequence[ProfileCurve]) -> pd.DataFrame:
    frame = pd.DataFrame({"alpha": curves[0].alphas})
    for curve in curves:
        frame[curve.algorithm] = curve.values
    return frame


def write_profile_csv(curves: Sequence[ProfileCurve], path: str) -> None:
    profile_frame(curves).to_csv(path, index=False)


def plot_profiles(curves: Sequence[ProfileCurve], path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for curve in curves:
        ax.step(curve.alphas, curve.values, where="post", label=curve.algorithm)
    ax.set_xlabel("alpha")
    ax.set_ylabel("fraction of problems solved")
    ax.set_ylim(0.0, 1.05)
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
