import math

import numpy as np
import pytest

from covo.benchmarks import (
    FUNCTION_IDS,
    TABLE,
    Modality,
    PenaltyParams,
    error_of,
    evaluate,
    make_objective,
    make_suite,
    penalty_u,
)
from covo.rng import RngState

from .reference import REFERENCE

# 30 * (418.9829 - 420.9687 * sin(sqrt(420.9687))) at 50 digits
F8_AT_OPTIMIZER_D30 = 3.8183512480241441657e-4


@pytest.mark.parametrize(
    "fid,x,want",
    [
        ("F1", [0.0] * 5, 0.0),
        ("F1", [1.0, 2.0, 3.0], 14.0),
        ("F2", [-1.0, 2.0], 5.0),
        ("F5", [1.0] * 6, 0.0),
        ("F6", [0.0] * 6, 0.0),
        ("F9", [0.0] * 6, 0.0),
        ("F10", [0.0] * 6, 0.0),
        ("F11", [0.0] * 6, 0.0),
        ("F12", [-1.0] * 6, 0.0),
        ("F13", [1.0] * 6, 0.0),
    ],
)
def test_examples(fid, x, want):
    spec = make_objective(fid, len(x))
    assert evaluate(spec, x) == pytest.approx(want, abs=1e-12)


def test_f8_near_zero_at_optimizer():
    spec = make_objective("F8", 30)
    v = evaluate(spec, [420.9687] * 30)
    assert abs(v) < 1e-2
    assert v == pytest.approx(F8_AT_OPTIMIZER_D30, rel=1e-6)
    assert spec.f_star == v
    assert error_of(spec, spec.f_star) == 0.0


def test_evaluate_rejects_bad_points():
    spec = make_objective("F1", 3)
    with pytest.raises(ValueError):
        evaluate(spec, [0.0, 0.0])
    with pytest.raises(ValueError):
        evaluate(spec, [0.0, 0.0, 100.5])


@pytest.mark.parametrize("x,want", [(0.0, 0.0), (11.0, 100.0), (-12.0, 1600.0), (10.0, 0.0), (-10.0, 0.0)])
def test_penalty(x, want):
    assert penalty_u(x, PenaltyParams(10, 100, 4)) == want


def test_penalty_params_validated():
    with pytest.raises(ValueError):
        PenaltyParams(0, 100, 4)
    with pytest.raises(ValueError):
        PenaltyParams(10, 100, 0.5)


def test_error_of():
    f1 = make_objective("F1", 30)
    assert error_of(f1, 0.0) == 0.0
    assert error_of(f1, 1.23e-18) == 1.23e-18
    with pytest.raises(ValueError):
        error_of(f1, math.inf)


def test_suite_shape():
    suite = make_suite(30)
    assert [s.id for s in suite] == [f"F{i}" for i in range(1, 14)]
    assert len({s.id for s in suite}) == 13
    assert (suite[0].lower, suite[0].upper) == (-100.0, 100.0)
    bounds = {s.id: (s.lower, s.upper) for s in suite}
    assert bounds["F2"] == (-10, 10)
    assert bounds["F7"] == (-1.28, 1.28)
    assert bounds["F8"] == (-500, 500)
    assert bounds["F12"] == bounds["F13"] == (-50, 50)
    for s in suite:
        assert s.lower < s.upper
        assert s.dimension == 30
        if s.id != "F8":
            assert s.f_star == 0.0
    assert suite[6].modality is Modality.NOISY and suite[5].modality is Modality.STEP


def test_suite_in_two_dimensions():
    rng = RngState(0)
    for s in make_suite(2):
        assert math.isfinite(evaluate(s, [s.lower / 2, s.upper / 3], rng))


def test_suite_rejects_dimension_one():
    with pytest.raises(ValueError):
        make_suite(1)


@pytest.mark.parametrize("fid", FUNCTION_IDS)
def test_random_points_match_reference(fid):
    spec = make_objective(fid, 10)
    rng = np.random.default_rng(123)
    X = rng.uniform(spec.lower, spec.upper, (100, 10))
    got = spec.batch(X, None)
    want = np.array([REFERENCE[fid](list(x)) for x in X])
    np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-300)


@pytest.mark.parametrize("fid", FUNCTION_IDS)
def test_known_optimum(fid):
    spec = make_objective(fid, 30)
    tol = 1e-2 if fid == "F8" else 1e-6
    assert abs(evaluate(spec, spec.x_star) - spec.f_star) < tol
    if fid == "F8":
        assert abs(evaluate(spec, spec.x_star)) < tol


@pytest.mark.parametrize("fid", ["F1", "F2", "F9", "F10"])
def test_permutation_covariance(fid):
    spec = make_objective(fid, 8)
    rng = np.random.default_rng(5)
    x = rng.uniform(spec.lower, spec.upper, 8)
    perm = rng.permutation(8)
    assert evaluate(spec, x[perm]) == pytest.approx(evaluate(spec, x), rel=1e-14)


def test_f11_product_term_is_position_weighted():
    # cos(x_i / sqrt(i)) ties each coordinate to its index, so swaps change the value
    spec = make_objective("F11", 2)
    assert evaluate(spec, [100.0, 0.0]) != pytest.approx(evaluate(spec, [0.0, 100.0]))
    assert evaluate(spec, [3.0, 3.0]) == evaluate(spec, [3.0, 3.0][::-1])


def test_f7_noise_is_seeded():
    spec = make_objective("F7", 5)
    x = [0.3] * 5
    a = evaluate(spec, x, RngState(9))
    b = evaluate(spec, x, RngState(9))
    c = evaluate(spec, x, None)
    assert a == b
    assert 0.0 <= a - c < 1.0
    assert evaluate(spec, [0.0] * 5, None) == 0.0


def test_f7_one_draw_per_evaluation():
    spec = make_objective("F7", 3)
    rng = RngState(1)
    spec.batch(np.zeros((4, 3)), rng)
    ref = RngState(1)
    ref.random(4)
    assert rng.random() == ref.random()


def test_table_covers_thirteen():
    assert len(TABLE) == 13
