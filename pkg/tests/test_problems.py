# test_problems.py
import numpy as np
import pytest
from scipy.linalg import null_space
from scipy.optimize import minimize

from src.errors import ConfigError, DimensionError, DomainError
from src.functions import base_functions
from src.models.problem import BaseFunction
from src.models.rng import RngState
from src.problems import (
    build_problem,
    double_well,
    double_well_basin_boundary,
    double_well_family,
    double_well_min,
    estimate_lipschitz,
    make_low_effdim,
    manifest,
    quadratic_family,
    scale_to_unit_box,
    suite,
)

TABLE = {base.name: base for base in base_functions()}


def test_table_has_eighteen_rows_with_mean_effective_dimension():
    assert len(TABLE) == 18
    assert np.mean([base.dim for base in TABLE.values()]) == pytest.approx(3.7, abs=0.05)


@pytest.mark.parametrize("name", [n for n, b in TABLE.items() if b.minimizers])
def test_listed_minimizers_attain_f_star(name):
    base = TABLE[name]
    for minimizer in base.minimizers:
        assert base(np.array(minimizer)) == pytest.approx(base.f_star, abs=1e-5)


@pytest.mark.parametrize("name, start", [
    ("Shekel 5", [4.0, 4.0, 4.0, 4.0]),
    ("Shekel 7", [4.0, 4.0, 4.0, 4.0]),
    ("Shekel 10", [4.0, 4.0, 4.0, 4.0]),
    ("Shubert", [-7.0835, 4.8580]),
])
def test_unlisted_minimizers_polish_to_f_star(name, start):
    base = TABLE[name]
    start = np.array(start)
    simplex = np.vstack([start, start + 0.01 * np.eye(base.dim)])
    result = minimize(base, start, method="Nelder-Mead",
                      options={"initial_simplex": simplex, "xatol": 1e-10, "fatol": 1e-12, "maxiter": 5000})
    assert result.fun == pytest.approx(base.f_star, abs=1e-4)


def test_scaled_branin_keeps_its_minimum():
    scaled = scale_to_unit_box(TABLE["Branin"])
    assert scaled.is_unit_box
    for minimizer in scaled.minimizers:
        y = np.array(minimizer)
        assert np.all(np.abs(y) <= 1.0)
        assert scaled(y) == pytest.approx(0.397887, abs=1e-5)


def test_scaled_hartmann6_keeps_its_minimum():
    scaled = scale_to_unit_box(TABLE["Hartmann 6"])
    assert scaled(np.array(scaled.minimizers[0])) == pytest.approx(-3.32237, abs=1e-4)


def test_scaling_a_unit_box_is_identity():
    base = BaseFunction(name="sq", dim=2, bounds=[(-1.0, 1.0)] * 2, evaluate=lambda x: float(x @ x), f_star=0.0)
    assert scale_to_unit_box(base) is base


def test_scaling_rejects_degenerate_interval():
    base = BaseFunction(name="flat", dim=1, bounds=[(2.0, 2.0)], evaluate=lambda x: 0.0, f_star=0.0)
    with pytest.raises(DomainError):
        scale_to_unit_box(base)


def test_identity_rotation_reproduces_the_scaled_base():
    base = TABLE["Beale"]
    scaled = scale_to_unit_box(base)
    obj = make_low_effdim(base, 2, RngState(seed=0), rotation=np.eye(2))
    y = np.array([0.3, -0.2])
    assert obj(y) == pytest.approx(scaled(y), rel=1e-12)


def test_embedded_objective_is_scaled_base_on_rotated_coordinates():
    rng = RngState(seed=1)
    obj = make_low_effdim(TABLE["Hartmann 3"], 20, rng)
    rotation_rows = obj.effective_basis
    for i in range(10):
        y = rng.spawn(i).generator().uniform(-1, 1, size=3)
        x = rotation_rows.T @ y
        assert obj(x) == pytest.approx(obj.base(y), abs=1e-9)


def test_constant_subspace_invariance():
    rng = RngState(seed=2)
    obj = make_low_effdim(TABLE["Branin"], 30, rng)
    V = null_space(obj.effective_basis)
    assert V.shape == (30, 28)
    for i in range(100):
        gen = rng.spawn(i).generator()
        x = gen.uniform(-1, 1, size=30)
        w = V @ gen.standard_normal(28)
        fx = obj(x)
        assert obj(x + w) == pytest.approx(fx, rel=1e-9, abs=1e-12)


def test_minimizer_set_is_an_affine_subspace():
    rng = RngState(seed=3)
    obj = make_low_effdim(TABLE["Six-hump camel"], 15, rng)
    V = null_space(obj.effective_basis)
    for i in range(10):
        h = rng.spawn(i).generator().standard_normal(V.shape[1])
        assert obj(obj.x_star + V @ h) == pytest.approx(obj.f_star, abs=1e-6)


@pytest.mark.parametrize("name", [n for n, b in TABLE.items() if b.minimizers])
def test_known_minimum_after_rotation(name):
    obj = build_problem(name, 10, RngState(seed=4))
    assert obj(obj.x_star) == pytest.approx(obj.f_star, abs=1e-5)


def test_embedding_below_effective_dimension_fails():
    with pytest.raises(DimensionError):
        make_low_effdim(TABLE["Styblinski-Tang"], 5, RngState(seed=0))


def test_suite_is_reproducible():
    first = suite(100, RngState(seed=8))
    second = suite(100, RngState(seed=8))
    assert len(first) == 18
    assert [o.name for o in first] == sorted([o.name for o in first], key=list(TABLE).index)
    np.testing.assert_array_equal(first[0].effective_basis, second[0].effective_basis)
    shekel = next(o for o in first if o.name == "Shekel 10")
    assert shekel.f_star == -10.5364


def test_build_problem_matches_suite_member():
    members = {o.name: o for o in suite(12, RngState(seed=5))}
    single = build_problem("Trid", 12, RngState(seed=5))
    np.testing.assert_array_equal(single.effective_basis, members["Trid"].effective_basis)


def test_build_problem_rejects_unknown_name():
    with pytest.raises(ConfigError):
        build_problem("Ackley", 10, RngState(seed=0))


def test_small_suite_skips_large_problems(caplog):
    members = suite(4, RngState(seed=0))
    names = {o.name for o in members}
    assert "Styblinski-Tang" not in names
    assert "Hartmann 3" in names
    assert "Skipping" in caplog.text


def test_lipschitz_estimate_of_a_linear_function():
    base = BaseFunction(name="lin", dim=2, bounds=[(-1.0, 1.0)] * 2,
                        evaluate=lambda x: float(3 * x[0] + 4 * x[1]), f_star=-7.0)
    assert estimate_lipschitz(base, RngState(seed=0), n_points=50) == pytest.approx(5.0, rel=1e-5)


def test_objective_lipschitz_uses_the_base():
    obj = build_problem("Branin", 50, RngState(seed=1))
    estimate = obj.lipschitz_estimate(RngState(seed=2), n_points=100)
    assert estimate > 0
    assert estimate == pytest.approx(estimate_lipschitz(obj.base, RngState(seed=2), n_points=100))


def test_manifest_records():
    records = manifest(suite(10, RngState(seed=3)), seed=3)
    assert len(records) == 18
    assert records[0].model_dump()["schema_version"] == 1
    assert {r.D for r in records} == {10}


def test_manifest_carries_lipschitz_estimates_on_request():
    records = manifest(suite(10, RngState(seed=3))[:3], seed=3, lipschitz_points=20)
    assert all(r.lipschitz is not None and r.lipschitz > 0 for r in records)
    again = manifest(suite(10, RngState(seed=3))[:3], seed=3, lipschitz_points=20)
    assert [r.lipschitz for r in records] == [r.lipschitz for r in again]


def test_quadratic_family_optimum_lies_on_the_subspace():
    case = quadratic_family(RngState(seed=0), D=8, d=2)
    center = case.objective.evaluate.center
    y, *_ = np.linalg.lstsq(case.A, center - case.p, rcond=None)
    assert case.objective(case.A @ y + case.p) == pytest.approx(0.0, abs=1e-18)


def test_double_well_shape():
    boundary = double_well_basin_boundary()
    assert 0.07 < boundary < 0.08
    assert double_well_min() == pytest.approx(-0.3054, abs=1e-3)
    assert double_well(np.array([-1.0])) < double_well(np.array([1.0]))
    case = double_well_family(RngState(seed=0))
    assert abs(case.p[0]) <= 2.0
