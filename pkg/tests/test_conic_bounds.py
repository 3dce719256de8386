# test_conic_bounds.py
import math

import numpy as np
import pytest

from src.conic_bounds import (
    bound_table,
    circ_intrinsic_volume,
    crofton_tail,
    crossover,
    crossover_distance,
    intrinsic_volumes,
    k_xi,
    log_sin_power_integral,
    subspace_intrinsic_volume,
    success_curve,
    tau,
    tau_asymptotic,
    tau_led,
    tau_pointwise,
    tau_uniform,
    tau_us,
)
from src.errors import DimensionError, DomainError
from src.models.bounds import CircularCone

ALPHAS = np.linspace(0.05, math.pi / 2 - 0.05, 20)


def test_planar_cone_example():
    values = [circ_intrinsic_volume(2, math.pi / 6, k)[0] for k in range(3)]
    assert values == pytest.approx([1 / 3, 1 / 2, 1 / 6], abs=1e-12)


@pytest.mark.parametrize("D", range(2, 61))
def test_intrinsic_volumes_sum_to_one_and_halve(D):
    for alpha in ALPHAS:
        volumes = intrinsic_volumes(D, float(alpha))
        assert volumes.total == pytest.approx(1.0, abs=1e-10)
        assert volumes.even_sum == pytest.approx(0.5, abs=1e-10)
        assert volumes.odd_sum == pytest.approx(0.5, abs=1e-10)


def test_half_space_limit():
    volumes = intrinsic_volumes(6, math.pi / 2)
    assert volumes.values[5] == pytest.approx(0.5)
    assert volumes.values[6] == pytest.approx(0.5)
    assert sum(volumes.values[:5]) == 0.0


def test_cone_rejects_bad_angle():
    with pytest.raises(DomainError):
        circ_intrinsic_volume(4, 0.0, 1)
    with pytest.raises(DimensionError):
        circ_intrinsic_volume(1, 0.3, 0)


def test_sin_power_integral_closed_forms():
    assert math.exp(log_sin_power_integral(0, 0.7)) == pytest.approx(0.7, rel=1e-12)
    assert math.exp(log_sin_power_integral(1, 1.1)) == pytest.approx(1 - math.cos(1.1), rel=1e-12)
    assert math.exp(log_sin_power_integral(2, math.pi / 2)) == pytest.approx(math.pi / 4, rel=1e-12)


def test_subspace_volumes_are_indicators():
    assert [subspace_intrinsic_volume(4, 2, k) for k in range(5)] == [0, 0, 1, 0, 0]


def test_tau_two_dimensional_subspace_is_a_power():
    report = tau(0.5, 2, 10)
    assert report.tau == pytest.approx(0.00390625, rel=1e-12)
    assert report.log10_tau == pytest.approx(8 * math.log10(0.5), abs=1e-12)


@pytest.mark.parametrize("D", [3, 5, 10, 20, 50])
@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("r", [0.2, 0.5, 0.8])
def test_tau_equals_twice_the_cone_volume(D, d, r):
    if d >= D:
        pytest.skip("d must be below D")
    volume, _ = circ_intrinsic_volume(D, math.asin(r), D - d + 1)
    assert tau(r, d, D).tau == pytest.approx(2 * volume, rel=1e-9)
    assert crofton_tail(D, d, CircularCone(D=D, alpha=math.asin(r))) >= tau(r, d, D).tau * (1 - 1e-12)


def test_tau_is_monotone():
    assert tau(0.3, 2, 10).tau < tau(0.6, 2, 10).tau
    assert tau(0.5, 1, 10).tau < tau(0.5, 3, 10).tau
    assert tau(0.5, 2, 10).tau > tau(0.5, 2, 20).tau


def test_tau_rejects_domain():
    with pytest.raises(DomainError):
        tau(1.0, 2, 10)
    with pytest.raises(DimensionError):
        tau(0.5, 10, 10)


def test_tau_large_dimension_stays_in_log_space():
    report = tau(0.1, 2, 10000)
    assert report.tau == 0.0
    assert report.log10_tau == pytest.approx(-9998.0, abs=1e-6)


def test_pointwise_bound_inside_ball_is_certain():
    report = tau_pointwise(1.0, 1.0, 0.5, 2, 10)
    assert report.tau == 1.0
    assert "p-inside-ball" in report.flags


def test_pointwise_and_uniform_bounds_use_ratio():
    assert tau_pointwise(1.0, 2.0, 1.0, 2, 10).tau == pytest.approx(0.5 ** 8)
    assert tau_uniform(1.0, 1.0, 2.0, 2, 10).tau == pytest.approx(0.5 ** 8)
    with pytest.raises(DomainError):
        tau_pointwise(-1.0, 1.0, 2.0, 2, 10)


def test_asymptotic_leading_term_for_d_two():
    assert tau_asymptotic(0.5, 2, 10) == pytest.approx(tau(0.5, 2, 10).log10_tau)


def test_uniform_sampling_bound():
    assert tau_us(1.0, 1.0, 2).tau == pytest.approx(math.pi / 4)
    assert "vacuous-risk" in tau_us(2.0, 1.0, 2).flags


def test_crossover_direction_at_large_dimension():
    D = 1000
    assert crossover_distance(D) == pytest.approx(math.sqrt(2 * D / (math.pi * math.e)))
    near = crossover(1.0, 1.0, 0.4 * math.sqrt(D), 2, D)
    far = crossover(1.0, 1.0, 0.6 * math.sqrt(D), 2, D)
    assert near.log10_ratio > 0
    assert near.regime == "embedding-favored"
    assert far.log10_ratio < 0
    assert far.regime == "uniform-favored"
    assert math.isfinite(near.embedding.log10_tau)


def test_led_bound_is_certain_once_d_reaches_d_e():
    report = tau_led(1.0, 1.0, 5.0, 3, 3)
    assert report.tau == 1.0
    assert "d-at-least-effective-dimension" in report.flags
    assert tau_led(1.0, 1.0, 2.0, 1, 2).tau == pytest.approx(1 / 3, rel=1e-10)


@pytest.mark.parametrize("xi, tau_rho, expected", [(0.9, 0.3, 8), (0.99, 0.1, 47), (0.5, 0.5, 2)])
def test_k_xi(xi, tau_rho, expected):
    params = k_xi(xi, tau_rho, 1.0)
    assert params.k_xi == expected
    assert params.guaranteed >= xi


def test_k_xi_rejects_bad_probability():
    with pytest.raises(DomainError):
        k_xi(1.0, 0.5, 0.5)


def test_success_curve():
    assert success_curve(1, 0.5, 0.5) == pytest.approx(0.25)
    assert success_curve(10, 0.1, 0.1, k_max=5, rho_at_kmax=0.9) == pytest.approx(0.9)


def test_bound_table_skips_full_subspaces():
    table = bound_table([3, 10], [1, 2, 3], [0.5])
    assert len(table) == 5
    assert set(table.columns) >= {"D", "d", "r", "tau", "log10_tau", "crofton_tail"}
    row = table[(table.D == 10) & (table.d == 2)].iloc[0]
    assert row.tau == pytest.approx(0.5 ** 8)


def test_asymptotic_order_for_a_line():
    assert abs(tau(0.3, 1, 100).log10_tau - tau_asymptotic(0.3, 1, 100)) <= 1.0


@pytest.mark.parametrize("D", range(50, 501, 50))
def test_asymptotic_ratio_stays_within_a_decade(D):
    ratio = 10.0 ** (tau(0.2, 3, D).log10_tau - tau_asymptotic(0.2, 3, D))
    assert 0.1 <= ratio <= 10.0


def test_uniform_sampling_in_the_plane():
    assert tau_us(0.5, 1.0, 2).tau == pytest.approx(math.pi / 16, rel=1e-12)


def test_uniform_sampling_in_high_dimension_uses_log_gamma():
    expected = (50 * math.log(math.pi) - math.lgamma(51) - 100 * math.log(2) + 100 * math.log(0.5)) / math.log(10)
    assert tau_us(0.5, 1.0, 100).log10_tau == pytest.approx(expected, rel=1e-12)


def test_one_embedding_suffices_at_the_e_fold_level():
    assert k_xi(1 - math.exp(-1), 1.0, 1.0).k_xi == 1


def test_crofton_tail_grows_with_the_cone():
    assert crofton_tail(10, 3, CircularCone(D=10, alpha=0.2)) < crofton_tail(10, 3, CircularCone(D=10, alpha=0.4))
    tails = [crofton_tail(10, 3, CircularCone(D=10, alpha=a)) for a in ALPHAS]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(tails, tails[1:]))
