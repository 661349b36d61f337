import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_lab.series import (
    OrderMismatchError,
    TruncatedSeries as TS,
    add,
    compose_zk,
    derivative,
    div,
    exp,
    log,
    mul,
    pow_binomial,
    shift,
)


def S(*c, order=None):
    return TS.from_coeffs(c, order)


def miller_power(c, alpha):
    """Independent oracle: J.C.P. Miller recurrence for (sum c_j z^j)**alpha with c_0 = 1."""
    n = len(c)
    b = np.zeros(n, dtype=complex)
    b[0] = 1.0
    for m in range(1, n):
        b[m] = sum(((alpha + 1) * j - m) * c[j] * b[m - j] for j in range(1, m + 1)) / m
    return b


def random_series(rng, order, scale=1.0, unit=False):
    c = scale * (rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1))
    if unit:
        c[0] = 1.0
    return TS(c)


# --- examples ---------------------------------------------------------------

def test_add_examples():
    assert add(S(1, 1), S(1, -1)).allclose(S(2, 0))
    assert add(S(0, 1), S(0, 0)).allclose(S(0, 1))
    assert add(S(1, 2, 3), S(1, 1, order=2)).allclose(S(2, 3, 3))


def test_mul_examples():
    assert mul(S(1, 1, 0), S(1, -1, 0)).allclose(S(1, 0, -1))
    s = S(1, 2, 3)
    assert mul(s, S(1, order=2)).allclose(s)
    assert mul(S(1, 2, 0), S(1, 3, 0)).allclose(S(1, 5, 6))


def test_div_examples():
    assert div(S(1, 0, -1), S(1, -1, 0)).allclose(S(1, 1, 0))
    a = S(2, 1j, 3)
    assert div(a, a).allclose(S(1, order=2))
    assert div(S(1, order=3), S(1, -1, order=3)).allclose(S(1, 1, 1, 1))


def test_pow_examples():
    assert pow_binomial(S(1, -1j, 0), -2).allclose(S(1, 2j, -3))
    s = S(1, 0.3, -2j)
    assert pow_binomial(s, 0).allclose(S(1, order=2))
    # (1 - i z^2)^(-1) at order 4: coefficients 1, i, i^2 at even powers
    base = S(1, 0, -1j, 0, 0)
    expected = S(1, 0, 1j, 0, -1)
    assert pow_binomial(base, -2 / 2).allclose(expected)
    # repeated-multiplication oracle: result * base == 1
    assert mul(pow_binomial(base, -1), base).allclose(S(1, order=4))


def test_compose_zk_examples():
    assert compose_zk(S(1, 1), 3).allclose(S(1, 0, 0, 1))
    s = S(1, 2, 3)
    assert compose_zk(s, 1).allclose(s)
    assert compose_zk(S(1, 2, 1), 2).allclose(S(1, 0, 2, 0, 1))


def test_compose_zk_truncates_to_requested_order():
    out = compose_zk(S(1, 2, 3), 2, order=3)
    assert out.order == 3
    assert out.allclose(S(1, 0, 2, 0))


def test_derivative_examples():
    d = derivative(S(0, 0, 0, 1))
    assert d.order == 2 and d.allclose(S(0, 0, 3))
    assert derivative(S(5, 0, 0)).allclose(S(0, 0))
    assert derivative(S(0, 1, 2)).allclose(S(1, 4))
    padded = derivative(S(0, 1, 2), pad=True)
    assert padded.order == 2 and padded.allclose(S(1, 4, 0))


def test_derivative_of_constant_order_zero():
    assert derivative(S(7)).allclose(S(0))


# --- errors -----------------------------------------------------------------

def test_order_mismatch_is_an_error():
    with pytest.raises(OrderMismatchError):
        add(S(1, 2), S(1, 2, 3))
    with pytest.raises(OrderMismatchError):
        mul(S(1, 2), S(1, 2, 3))
    with pytest.raises(OrderMismatchError):
        div(S(1, 2), S(1, 2, 3))


def test_div_by_zero_constant():
    with pytest.raises(ZeroDivisionError):
        div(S(1, 1), S(0, 1))


def test_pow_requires_unit_constant():
    with pytest.raises(ValueError):
        pow_binomial(S(2, 1), 0.5)
    with pytest.raises(ValueError):
        log(S(1.0000001, 1))


def test_from_coeffs_rejects_overflow():
    with pytest.raises(ValueError):
        TS.from_coeffs([1, 2, 3], order=1)


def test_shift_down_requires_divisibility():
    assert shift(S(0, 1, 2), -1).allclose(S(1, 2))
    with pytest.raises(ValueError):
        shift(S(1, 1, 2), -1)
    assert shift(S(1, 2, 3), 1).allclose(S(0, 1, 2))


def test_coefficient_access_checks_bounds():
    s = S(1, 2)
    assert s[1] == 2
    with pytest.raises(IndexError):
        s[2]


def test_series_is_immutable():
    s = S(1, 2)
    with pytest.raises(ValueError):
        s.coeffs[0] = 5


# --- properties -------------------------------------------------------------

orders = st.integers(min_value=0, max_value=32)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(orders, seeds)
def test_ring_axioms(order, seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_series(rng, order, 0.5) for _ in range(3))
    assert mul(mul(a, b), c).allclose(mul(a, mul(b, c)), atol=1e-12)
    assert mul(a, add(b, c)).allclose(add(mul(a, b), mul(a, c)), atol=1e-12)
    assert mul(a, b).allclose(mul(b, a), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(orders, seeds)
def test_div_inverts_mul(order, seed):
    rng = np.random.default_rng(seed)
    a = random_series(rng, order, 0.5)
    c = 0.5 * (rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)) / np.sqrt(order + 1)
    c[0] = (0.5 + rng.random()) * np.exp(2j * np.pi * rng.random())
    b = TS(c)
    assert mul(div(a, b), b).allclose(a, atol=1e-12)


@pytest.mark.parametrize("alpha", [0.5, -0.5, 2 / 3, -2 / 3, 2 / 1, 2 / 2, 2 / 3, 2 / 5, 2 / 8])
def test_pow_round_trip(alpha):
    rng = np.random.default_rng(17)
    for _ in range(20):
        s = random_series(rng, 16, 0.3, unit=True)
        back = pow_binomial(pow_binomial(s, alpha), 1 / alpha)
        assert back.allclose(s, atol=1e-10)


@pytest.mark.parametrize("alpha", [-3, -2, -1, 1, 2, 3, 4])
def test_pow_matches_repeated_mul(alpha):
    rng = np.random.default_rng(alpha + 100)
    s = random_series(rng, 12, 0.4, unit=True)
    ref = TS.constant(1.0, 12)
    for _ in range(abs(alpha)):
        ref = mul(ref, s)
    if alpha < 0:
        ref = div(TS.constant(1.0, 12), ref)
    assert pow_binomial(s, alpha).allclose(ref, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 24), seeds, st.floats(-3, 3).filter(lambda x: abs(x) > 1e-3))
def test_pow_matches_miller_recurrence(order, seed, alpha):
    rng = np.random.default_rng(seed)
    s = random_series(rng, order, 0.3, unit=True)
    ref = miller_power(s.coeffs, alpha)
    out = pow_binomial(s, alpha).coeffs
    assert np.allclose(out, ref, rtol=1e-9, atol=1e-10)


def test_log_exp_inverse():
    rng = np.random.default_rng(3)
    s = random_series(rng, 20, 0.3, unit=True)
    assert exp(log(s)).allclose(s, atol=1e-12)


def test_evaluate_matches_polynomial():
    s = S(1, 2, 3)
    assert s(0.5) == pytest.approx(1 + 1 + 0.75)
