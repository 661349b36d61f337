"""Truncated complex power series.

A :class:`TruncatedSeries` holds ``c_0 .. c_N`` for a series taken modulo
``z**(N+1)``.  The order ``N`` is part of the value: binary operations on
series of different order raise :class:`OrderMismatchError` instead of
silently padding or cutting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "OrderMismatchError",
    "TruncatedSeries",
    "add",
    "mul",
    "div",
    "log",
    "exp",
    "pow_binomial",
    "compose_zk",
    "derivative",
    "shift",
]


class OrderMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).ravel()
        if c.size == 0:
            raise ValueError("a truncated series needs at least one coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[complex], order: int | None = None) -> "TruncatedSeries":
        """Build a series, zero-padding (or rejecting overflow) up to ``order``."""
        c = np.asarray(coeffs, dtype=np.complex128).ravel()
        if order is None:
            return cls(c)
        if order < 0:
            raise ValueError("order must be non-negative")
        if c.size > order + 1 and np.any(c[order + 1:] != 0):
            raise ValueError(f"coefficients beyond order {order} are non-zero")
        out = np.zeros(order + 1, dtype=np.complex128)
        n = min(c.size, order + 1)
        out[:n] = c[:n]
        return cls(out)

    @classmethod
    def constant(cls, value: complex, order: int) -> "TruncatedSeries":
        return cls.from_coeffs([value], order)

    @classmethod
    def monomial(cls, power: int, order: int, coeff: complex = 1.0) -> "TruncatedSeries":
        c = np.zeros(order + 1, dtype=np.complex128)
        if power <= order:
            c[power] = coeff
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __getitem__(self, j: int) -> complex:
        if not 0 <= j <= self.order:
            raise IndexError(f"index {j} outside 0..{self.order}")
        return complex(self.coeffs[j])

    def __len__(self) -> int:
        return self.coeffs.size

    def __call__(self, z):
        """Evaluate the truncated polynomial at ``z`` (scalar or array)."""
        return np.polyval(self.coeffs[::-1], z)

    def __add__(self, other):
        return add(self, _coerce(other, self.order))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, -_coerce(other, self.order))

    def __rsub__(self, other):
        return add(_coerce(other, self.order), -self)

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return TruncatedSeries(self.coeffs * other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if np.isscalar(other):
            return TruncatedSeries(self.coeffs / other)
        return div(self, other)

    def __pow__(self, alpha):
        return pow_binomial(self, alpha)

    def allclose(self, other: "TruncatedSeries", atol: float = 1e-12) -> bool:
        _check_orders(self, other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0.0, atol=atol))

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, coeffs={self.coeffs!r})"


def _coerce(x, order: int) -> TruncatedSeries:
    if isinstance(x, TruncatedSeries):
        return x
    if np.isscalar(x):
        return TruncatedSeries.constant(x, order)
    raise TypeError(f"cannot combine TruncatedSeries with {type(x).__name__}")


def _check_orders(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.order != b.order:
        raise OrderMismatchError(f"orders differ: {a.order} vs {b.order}")


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_orders(a, b)
    return TruncatedSeries(a.coeffs + b.coeffs)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order."""
    _check_orders(a, b)
    n = a.order + 1
    return TruncatedSeries(np.convolve(a.coeffs, b.coeffs)[:n])


def div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Series quotient ``a / b``; requires ``b(0) != 0``."""
    _check_orders(a, b)
    b0 = b.coeffs[0]
    if b0 == 0:
        raise ZeroDivisionError("divisor has zero constant term")
    n = a.order + 1
    q = np.zeros(n, dtype=np.complex128)
    bc = b.coeffs
    for m in range(n):
        # q_m = (a_m - sum_{j=1..m} b_j q_{m-j}) / b_0
        acc = a.coeffs[m] - np.dot(bc[1:m + 1], q[m - 1::-1][:m]) if m else a.coeffs[0]
        q[m] = acc / b0
    return TruncatedSeries(q)


def _require_unit_constant(s: TruncatedSeries, what: str) -> None:
    if s.coeffs[0] != 1:
        raise ValueError(f"{what} requires constant term exactly 1, got {s.coeffs[0]!r}")


def log(s: TruncatedSeries) -> TruncatedSeries:
    """Principal logarithm of a series with constant term 1 (so ``log(s)(0) == 0``)."""
    _require_unit_constant(s, "log")
    n = s.order + 1
    # (log s)' = s'/s, then integrate term by term.
    c = s.coeffs
    out = np.zeros(n, dtype=np.complex128)
    # m*L_m = m*c_m - sum_{j=1}^{m-1} j*L_j*c_{m-j}
    for m in range(1, n):
        j = np.arange(1, m)
        out[m] = c[m] - np.dot(j * out[1:m], c[m - 1:0:-1]) / m
    return TruncatedSeries(out)


def exp(s: TruncatedSeries) -> TruncatedSeries:
    """Exponential of a series with zero constant term."""
    if s.coeffs[0] != 0:
        raise ValueError("exp requires zero constant term")
    n = s.order + 1
    c = s.coeffs
    out = np.zeros(n, dtype=np.complex128)
    out[0] = 1.0
    # m*E_m = sum_{j=1}^m j*c_j*E_{m-j}
    for m in range(1, n):
        j = np.arange(1, m + 1)
        out[m] = np.dot(j * c[1:m + 1], out[m - 1::-1][:m]) / m
    return TruncatedSeries(out)


def pow_binomial(base: TruncatedSeries, alpha: complex) -> TruncatedSeries:
    """``base ** alpha`` on the principal branch, via ``exp(alpha * log(base))``."""
    _require_unit_constant(base, "pow_binomial")
    if alpha == 0:
        return TruncatedSeries.constant(1.0, base.order)
    return exp(log(base) * alpha)


def compose_zk(a: TruncatedSeries, k: int, order: int | None = None) -> TruncatedSeries:
    """Substitute ``z -> z**k``; result has order ``order`` (default ``k * a.order``)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if order is None:
        order = k * a.order
    out = np.zeros(order + 1, dtype=np.complex128)
    src = a.coeffs[: order // k + 1]
    out[: k * (src.size - 1) + 1: k] = src
    return TruncatedSeries(out)


def derivative(a: TruncatedSeries, pad: bool = False) -> TruncatedSeries:
    """Termwise derivative.

    The honest result has order ``N - 1``.  With ``pad=True`` the result is
    re-padded to order ``N`` with a zero top coefficient, which can be combined
    with order-``N`` series but carries no information at index ``N``.
    """
    c = a.coeffs
    if a.order == 0:
        return TruncatedSeries(np.zeros(1, dtype=np.complex128))
    d = c[1:] * np.arange(1, c.size)
    if pad:
        d = np.append(d, 0.0)
    return TruncatedSeries(d)


def shift(a: TruncatedSeries, s: int) -> TruncatedSeries:
    """Multiply by ``z**s`` (``s >= 0``) keeping the order, or divide by ``z**(-s)``.

    Division requires the low ``-s`` coefficients to vanish and lowers the order.
    """
    c = a.coeffs
    if s >= 0:
        out = np.zeros_like(c)
        out[s:] = c[: c.size - s] if s else c
        return TruncatedSeries(out)
    s = -s
    if s > a.order:
        raise ValueError("cannot divide away every coefficient")
    if np.any(c[:s] != 0):
        raise ValueError(f"series is not divisible by z**{s}")
    return TruncatedSeries(c[s:])
