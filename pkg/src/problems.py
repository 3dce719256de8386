# src/problems.py
"""
High-dimensional objectives with low effective dimension.

Each base function g on a box is rescaled to [-1, 1]^{d_e} and padded with
D - d_e fake dimensions, then hidden by a Haar rotation: f(x) = g(Ux) where
U holds the first d_e rows of the rotation.
"""
import logging
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from src.errors import ConfigError, DimensionError, DomainError, PreconditionError
from src.functions import base_functions
from src.models.problem import BaseFunction, Objective, ProblemManifest, ReducedTestCase
from src.models.rng import RngState
from src.rand_geometry import gen_gaussian, gen_haar_orthogonal, uniform_in_box

logger = logging.getLogger(__name__)


class _Rescaled:
    """g(lo + (y + 1) / 2 * (hi - lo)), the base function seen from [-1, 1]^d"""

    def __init__(self, evaluate: Callable[[np.ndarray], float], lower: np.ndarray, upper: np.ndarray):
        self.evaluate = evaluate
        self.lower = lower
        self.half_width = (upper - lower) / 2.0

    def __call__(self, y: np.ndarray) -> float:
        return self.evaluate(self.lower + (y + 1.0) * self.half_width)


class _Embedded:
    """x -> g(Ux)"""

    def __init__(self, base: BaseFunction, basis: np.ndarray):
        self.base = base
        self.basis = basis

    def __call__(self, x: np.ndarray) -> float:
        return self.base(self.basis @ x)


class _ShiftedQuadratic:
    def __init__(self, center: np.ndarray):
        self.center = center

    def __call__(self, x: np.ndarray) -> float:
        return float(np.sum((x - self.center) ** 2))


DOUBLE_WELL_TILT = 0.3


def double_well(x: np.ndarray) -> float:
    """(t^2 - 1)^2 + 0.3 t: global basin on the left, a shallower one on the right"""
    t = float(x[0])
    return (t * t - 1.0) ** 2 + DOUBLE_WELL_TILT * t


def _double_well_critical_points() -> np.ndarray:
    roots = np.roots([4.0, 0.0, -4.0, DOUBLE_WELL_TILT])
    return np.sort(roots[np.abs(roots.imag) < 1e-12].real)


def double_well_min() -> float:
    return min(double_well(np.array([t])) for t in _double_well_critical_points())


def double_well_basin_boundary() -> float:
    """The local maximum separating the two basins"""
    return float(_double_well_critical_points()[1])


def scale_to_unit_box(base: BaseFunction) -> BaseFunction:
    """Affine change of variables from [-1, 1]^d onto the base function's box"""
    if base.is_unit_box:
        return base

    bounds = np.asarray(base.bounds, dtype=float)
    lower, upper = bounds[:, 0], bounds[:, 1]
    if not np.all(np.isfinite(bounds)):
        raise DomainError(f"{base.name}: domain must be a finite box")
    if np.any(upper - lower <= 0):
        raise DomainError(f"{base.name}: degenerate interval in domain {base.bounds}")

    minimizers = [(2.0 * (np.asarray(m) - lower) / (upper - lower) - 1.0).tolist() for m in base.minimizers]
    return BaseFunction(
        name=base.name,
        dim=base.dim,
        bounds=[(-1.0, 1.0)] * base.dim,
        evaluate=_Rescaled(base.evaluate, lower, upper),
        f_star=base.f_star,
        minimizers=minimizers,
    )


def make_low_effdim(
    base: BaseFunction,
    D: int,
    rng: RngState,
    rotation: Optional[np.ndarray] = None,
) -> Objective:
    """Embed ``base`` in R^D as f(x) = g(Qx) restricted to the first d_e coordinates.

    ``rotation`` replaces the Haar draw when given (it must be D x D orthogonal).
    """
    d_e = base.dim
    if D < d_e:
        raise DimensionError(f"{base.name}: ambient dimension {D} below effective dimension {d_e}")
    if not base.is_unit_box:
        base = scale_to_unit_box(base)

    if rotation is None:
        rotation = gen_haar_orthogonal(rng, D)
    else:
        rotation = np.asarray(rotation, dtype=float)
        if rotation.shape != (D, D):
            raise DimensionError(f"Rotation must be {D} x {D}, got {rotation.shape}")
        if not np.allclose(rotation @ rotation.T, np.eye(D), atol=1e-10):
            raise PreconditionError("Rotation matrix is not orthogonal")

    basis = rotation[:d_e, :].copy()
    x_star = basis.T @ np.asarray(base.minimizers[0]) if base.minimizers else None
    return Objective(
        name=base.name,
        D=D,
        evaluate=_Embedded(base, basis),
        feasible="unbounded",
        f_star=base.f_star,
        effective_dim=d_e,
        effective_basis=basis,
        x_star=x_star,
        base=base,
    )


def problem_names() -> List[str]:
    return [base.name for base in base_functions()]


def build_problem(name: str, D: int, rng: RngState) -> Objective:
    """One suite member, drawn from the same stream ``suite`` would use for it"""
    for index, base in enumerate(base_functions()):
        if base.name == name:
            return make_low_effdim(base, D, rng.spawn(index))
    raise ConfigError(f"Unknown problem '{name}'. Known problems: {', '.join(problem_names())}")


def suite(D: int, rng: RngState) -> List[Objective]:
    """The benchmark table embedded in R^D; rows with d_e > D are skipped with a warning"""
    objectives = []
    for index, base in enumerate(base_functions()):
        if base.dim > D:
            logger.warning("Skipping %s: effective dimension %d exceeds D=%d", base.name, base.dim, D)
            continue
        objectives.append(make_low_effdim(base, D, rng.spawn(index)))
    logger.debug("Built suite of %d problems at D=%d", len(objectives), D)
    return objectives


def estimate_lipschitz(
    func: Union[BaseFunction, Objective],
    rng: RngState,
    n_points: int = 1000,
    step: float = 1e-6,
) -> float:
    """Largest central-difference gradient norm over uniform samples of the domain.

    Objectives are sampled in [-1, 1]^D.
    """
    if isinstance(func, BaseFunction):
        bounds = np.asarray(func.bounds, dtype=float)
        lower, upper = bounds[:, 0], bounds[:, 1]
    else:
        lower, upper = -np.ones(func.D), np.ones(func.D)

    dim = lower.shape[0]
    points = rng.generator().uniform(lower, upper, size=(n_points, dim))
    eye = np.eye(dim) * step
    largest = 0.0
    for x in points:
        grad = np.array([(func(x + e) - func(x - e)) / (2 * step) for e in eye])
        if np.all(np.isfinite(grad)):
            largest = max(largest, float(np.linalg.norm(grad)))
    return largest


def manifest(objectives: Sequence[Objective], seed: int, lipschitz_points: int = 0) -> List[ProblemManifest]:
    """Manifest rows; with ``lipschitz_points`` > 0 each row also carries a Lipschitz estimate"""
    rng = RngState(seed=seed, stream=1)
    return [
        ProblemManifest(
            name=obj.name,
            D=obj.D,
            d_e=obj.effective_dim,
            f_star=obj.f_star,
            seed=seed,
            feasible=obj.feasible,
            lipschitz=obj.lipschitz_estimate(rng.spawn(index), n_points=lipschitz_points) if lipschitz_points else None,
        )
        for index, obj in enumerate(objectives)
    ]


def quadratic_family(rng: RngState, D: int = 10, d: int = 2) -> ReducedTestCase:
    """||x - x0||^2 with x0 on the affine subspace p + range(A): reduced optimum 0"""
    A = gen_gaussian(rng.spawn(0), D, d)
    p = uniform_in_box(rng.spawn(1), D)
    center = A @ rng.spawn(2).generator().standard_normal(d) + p
    objective = Objective(name="shifted-quadratic", D=D, evaluate=_ShiftedQuadratic(center), f_star=0.0)
    return ReducedTestCase(objective=objective, A=A, p=p, f_min=0.0)


def double_well_family(rng: RngState, anchor_range: float = 2.0) -> ReducedTestCase:
    """The 1-d double well with A = [1] and p uniform in [-anchor_range, anchor_range].

    A single descent from y = 0 succeeds roughly when p lies left of
    ``double_well_basin_boundary()``.
    """
    p = uniform_in_box(rng, 1, half_width=anchor_range)
    f_min = double_well_min()
    objective = Objective(name="double-well", D=1, evaluate=double_well, f_star=f_min)
    return ReducedTestCase(objective=objective, A=np.ones((1, 1)), p=p, f_min=f_min)
