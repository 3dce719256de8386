# test_verify_mc.py
import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.conic_bounds import crofton_tail, tau
from src.errors import DimensionError, DomainError
from src.models.bounds import CircularCone
from src.models.mc import McConfig, McEstimate
from src.models.rng import RngState
from src.rand_geometry import gen_haar_orthogonal
from src.verify_mc import (
    DEFAULT_GRID,
    estimate_cone_ray_probability,
    estimate_hit_probability,
    estimate_led_hit_probability,
    grid_table,
    planar_hit_probability,
    run_grid,
    wilson_interval,
)


def _config(D, d, radius, x_star=None, p=None, trials=20000, seed=0):
    if x_star is None:
        x_star = [1.0] + [0.0] * (D - 1)
    return McConfig(trials=trials, D=D, d=d, radius=radius, p=p or [0.0] * D, x_star=list(x_star), seed=seed)


def test_wilson_interval_half_and_extremes():
    lower, upper = wilson_interval(50, 100)
    assert lower == pytest.approx(0.4038, abs=1e-4)
    assert upper == pytest.approx(0.5962, abs=1e-4)
    assert wilson_interval(0, 20)[0] == pytest.approx(0.0, abs=1e-12)
    assert wilson_interval(20, 20)[1] == pytest.approx(1.0)
    with pytest.raises(DomainError):
        wilson_interval(0, 0)
    with pytest.raises(DomainError):
        wilson_interval(5, 4)


def test_config_validation():
    with pytest.raises(ValidationError):
        McConfig(trials=10, D=3, d=1, radius=0.5, p=[0.0] * 3, x_star=[1.0, 0.0, 0.0])
    with pytest.raises(ValidationError):
        McConfig(trials=100, D=3, d=1, radius=0.5, p=[0.0] * 2, x_star=[1.0, 0.0, 0.0])


def test_estimate_verdict_must_match_interval():
    with pytest.raises(ValidationError):
        McEstimate(p_hat=0.1, wilson95=(0.05, 0.15), trials=100, hits=10, bound=0.5,
                   bound_kind="pointwise", verdict="consistent")
    estimate = McEstimate(p_hat=0.1, wilson95=(0.05, 0.15), trials=100, hits=10, bound=0.5,
                          bound_kind="pointwise", verdict="violation")
    assert not estimate.bound_inside_interval
    assert estimate.half_width == pytest.approx(0.05)


def test_full_space_always_hits():
    estimate = estimate_hit_probability(_config(4, 4, 0.1, trials=500))
    assert estimate.p_hat == 1.0
    assert estimate.bound == 1.0
    assert "full-space" in estimate.flags


def test_anchor_inside_ball_always_hits():
    estimate = estimate_hit_probability(_config(10, 1, 0.5, x_star=[0.1] + [0.0] * 9, trials=500))
    assert estimate.p_hat == 1.0
    assert estimate.bound == 1.0
    assert estimate.verdict == "consistent"


def test_planar_probability_matches_the_exact_value():
    assert planar_hit_probability(0.5) == pytest.approx(1 / 3)
    estimate = estimate_hit_probability(_config(2, 1, 0.5, trials=100000, seed=3))
    assert estimate.bound == pytest.approx(1 / 3, rel=1e-10)
    assert estimate.p_hat == pytest.approx(1 / 3, abs=0.01)
    assert estimate.verdict == "consistent"


def test_estimate_is_reproducible():
    first = estimate_hit_probability(_config(6, 2, 0.5, trials=3000, seed=4))
    second = estimate_hit_probability(_config(6, 2, 0.5, trials=3000, seed=4))
    assert first == second


def test_estimate_is_rotation_invariant():
    D = 5
    q = gen_haar_orthogonal(RngState(seed=8), D)
    plain = estimate_hit_probability(_config(D, 2, 0.5, trials=10000, seed=1))
    rotated = estimate_hit_probability(_config(D, 2, 0.5, x_star=q[:, 0], trials=10000, seed=2))
    assert plain.bound == pytest.approx(rotated.bound)
    assert plain.p_hat == pytest.approx(rotated.p_hat, abs=0.03)


def _effective_case(D, d_e, seed):
    U = gen_haar_orthogonal(RngState(seed=seed), D)[:d_e]
    x_star = U.T @ np.eye(d_e)[0]
    return U, x_star


def test_led_certain_once_d_reaches_d_e():
    U, x_star = _effective_case(30, 2, seed=0)
    estimate = estimate_led_hit_probability(_config(30, 2, 0.1, x_star=x_star, trials=500), U)
    assert estimate.p_hat == 1.0
    assert estimate.bound == 1.0


def test_led_probability_does_not_depend_on_ambient_dimension():
    estimates = []
    for D in (10, 200):
        U, x_star = _effective_case(D, 2, seed=D)
        estimates.append(estimate_led_hit_probability(_config(D, 1, 0.5, x_star=x_star, seed=D), U))
    for estimate in estimates:
        assert estimate.bound == pytest.approx(1 / 3, rel=1e-10)
        assert estimate.p_hat == pytest.approx(1 / 3, abs=0.02)
    assert estimates[0].p_hat == pytest.approx(estimates[1].p_hat, abs=0.03)


def test_led_rejects_mismatched_basis():
    with pytest.raises(DimensionError):
        estimate_led_hit_probability(_config(5, 1, 0.5, trials=100), np.eye(6)[:2])


def test_cone_near_half_space_is_almost_always_met():
    estimate = estimate_cone_ray_probability(5, 2, math.pi / 2 - 1e-3, 2000, seed=0)
    assert estimate.p_hat > 0.99


def test_planar_cone_probability():
    estimate = estimate_cone_ray_probability(2, 1, math.pi / 6, 20000, seed=1)
    assert estimate.bound == pytest.approx(1 / 3, rel=1e-10)
    assert estimate.p_hat == pytest.approx(1 / 3, abs=0.015)
    assert estimate.inconclusive == 0


def test_cone_frequency_matches_crofton_tail():
    estimate = estimate_cone_ray_probability(5, 2, 0.4, 20000, seed=2)
    assert estimate.bound == pytest.approx(crofton_tail(5, 2, CircularCone(D=5, alpha=0.4)))
    assert estimate.p_hat == pytest.approx(estimate.bound, abs=0.02)


def test_cone_rejects_bad_angle():
    with pytest.raises(DomainError):
        estimate_cone_ray_probability(4, 1, math.pi / 2, 100, seed=0)


def test_small_grid_tracks_tau():
    points = [(2, 1, 0.5), (5, 2, 0.5), (10, 1, 0.8)]
    rows = run_grid(points, trials=4000, seed=0)
    assert [(row.D, row.d, row.r) for row in rows] == points
    for row in rows:
        assert row.tau == pytest.approx(tau(row.r, row.d, row.D).tau)
        assert row.p_hat == pytest.approx(row.tau, abs=0.04)
        assert row.lower <= row.p_hat <= row.upper
    assert rows[0].exact == pytest.approx(1 / 3)
    assert rows[1].exact is None
    table = grid_table(rows)
    assert list(table.D) == [2, 5, 10]


def test_grid_is_independent_of_job_count():
    points = [(3, 1, 0.5), (4, 2, 0.2)]
    assert run_grid(points, trials=1000, seed=5, jobs=1) == run_grid(points, trials=1000, seed=5, jobs=2)


def test_grid_rejects_full_dimensional_points():
    with pytest.raises(DimensionError):
        run_grid([(3, 3, 0.5)], trials=100)


@pytest.mark.slow
def test_default_grid_has_no_violations():
    rows = run_grid("default", trials=20000, seed=0)
    expected = sum(1 for D in DEFAULT_GRID["D"] for d in DEFAULT_GRID["d"] if d < D) * len(DEFAULT_GRID["r"])
    assert len(rows) == expected
    assert all(row.verdict == "consistent" for row in rows)
