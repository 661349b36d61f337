import json
import math

import numpy as np
import pytest

from toeplitz_lab.caratheodory import (
    HerglotzMeasure,
    lift_k,
    measure_from_params,
    p_coefficients,
    p_series,
    p_value,
    random_measure,
    random_params,
)
from toeplitz_lab.series import TruncatedSeries


def test_single_atom_at_one_is_koebe_kernel():
    p = p_coefficients(HerglotzMeasure.point(0.0), 6)
    assert np.allclose(p, 2.0)


def test_antipodal_atoms():
    mu = HerglotzMeasure([0.0, math.pi], [0.5, 0.5])
    p = p_coefficients(mu, 2)
    assert p[0] == pytest.approx(0.0, abs=1e-15)
    assert p[1] == pytest.approx(2.0)


def test_atom_at_i():
    p = p_coefficients(HerglotzMeasure.point(math.pi / 2), 2)
    assert p[0] == pytest.approx(2j)
    assert p[1] == pytest.approx(-2)


def test_p_series_examples():
    assert p_series(HerglotzMeasure.point(0.0), 2).allclose(TruncatedSeries([1, 2, 2]))
    quarter = HerglotzMeasure([0, math.pi / 2, math.pi, 3 * math.pi / 2], [0.25] * 4)
    assert p_series(quarter, 5).allclose(TruncatedSeries([1, 0, 0, 0, 2, 0]))
    assert p_series(HerglotzMeasure.point(math.pi / 2), 2).allclose(TruncatedSeries([1, 2j, -2]))


def test_lift_examples():
    q = TruncatedSeries([1, 2j, -2])
    assert lift_k(q, 2).allclose(TruncatedSeries([1, 0, 2j, 0, -2]))
    assert lift_k(q, 1).allclose(q)
    assert lift_k(TruncatedSeries([1]), 3).allclose(TruncatedSeries([1]))


def test_p_series_matches_closed_form():
    mu = HerglotzMeasure([0.3, 2.0, 4.1], [0.2, 0.5, 0.3])
    s = p_series(mu, 60)
    z = 0.3 * np.exp(1j * np.linspace(0, 2 * np.pi, 7))
    assert np.allclose(s(z), p_value(mu, z), atol=1e-12)


def test_coefficient_bound_on_random_measures():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(10_000):
        mu = random_measure(rng, int(rng.integers(1, 5)))
        worst = max(worst, np.abs(p_coefficients(mu, 16)).max())
    assert worst <= 2 + 1e-12


def test_real_part_positive():
    rng = np.random.default_rng(1)
    angles = 2 * np.pi * np.arange(64) / 64
    z = np.concatenate([r * np.exp(1j * angles) for r in (0.3, 0.6, 0.9)])
    for _ in range(500):
        mu = random_measure(rng, 3)
        assert (p_value(mu, z).real > 0).all()


def test_single_atom_first_coefficient_has_modulus_two():
    rng = np.random.default_rng(2)
    for t in rng.random(50) * 2 * np.pi:
        assert abs(p_coefficients(HerglotzMeasure.point(t), 1)[0]) == pytest.approx(2.0, abs=1e-15)


def test_validation():
    with pytest.raises(ValueError):
        HerglotzMeasure([], [])
    with pytest.raises(ValueError):
        HerglotzMeasure([0.0, 1.0], [0.5])
    with pytest.raises(ValueError):
        HerglotzMeasure([0.0, 1.0], [1.5, -0.5])
    with pytest.raises(ValueError):
        HerglotzMeasure([0.0, 1.0], [0.5, 0.6])


def test_angles_reduced_mod_two_pi():
    mu = HerglotzMeasure([7.0, -1.0], [0.5, 0.5])
    assert ((0 <= mu.atoms) & (mu.atoms < 2 * np.pi)).all()


def test_json_round_trip():
    mu = HerglotzMeasure([0.1234567890123456789, 5.5], [1 / 3, 2 / 3])
    text = mu.to_json()
    back = HerglotzMeasure.from_json(text)
    assert back == mu
    assert back.to_json() == text
    assert set(json.loads(text)) == {"atoms", "weights"}


def test_params_map_to_normalized_squares():
    mu = measure_from_params([0.0, 1.0, 3.0, 4.0])
    assert np.allclose(mu.weights, [9 / 25, 16 / 25])
    degenerate = measure_from_params([0.0, 1.0, 0.0, 0.0])
    assert np.allclose(degenerate.weights, [0.5, 0.5])
    collapse = measure_from_params([0.4, 2.0, 1.0, 0.0])
    assert np.allclose(p_coefficients(collapse, 2), p_coefficients(HerglotzMeasure.point(0.4), 2))


def test_random_params_prefix_property():
    a = random_params(np.random.default_rng(5), 3, 10)
    b = random_params(np.random.default_rng(5), 3, 4)
    assert np.array_equal(a[:4], b)
